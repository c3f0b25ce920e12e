from typing import Dict, List, Optional, Type

from .base_kernel import KernelSpec
from .builtin_kernels import ConstantKernel, LinearDecreasingKernel, PolynomialKernel


class KernelRegistry:
    """Registry for look-ahead kernel implementations."""

    def __init__(self):
        """Initialize kernel registry."""
        self._kernel_classes: Dict[str, Type[KernelSpec]] = {}
        self._aliases: Dict[str, str] = {}
        self._register_default_kernels()

    def _register_default_kernels(self):
        """Register default kernel implementations."""
        self.register_kernel_class(LinearDecreasingKernel.kind, LinearDecreasingKernel)
        self.register_kernel_class(ConstantKernel.kind, ConstantKernel)
        self.register_kernel_class(PolynomialKernel.kind, PolynomialKernel)

        self._aliases["linear"] = LinearDecreasingKernel.kind
        self._aliases["custom"] = PolynomialKernel.kind
        self._aliases["polynomial"] = PolynomialKernel.kind

    def register_kernel_class(self, kind: str, kernel_class: Type[KernelSpec]) -> None:
        """Register a kernel implementation with the registry.

        Args:
            kind: Name identifier for the kernel kind
            kernel_class: Class that implements the kernel
        """
        self._kernel_classes[kind.lower()] = kernel_class

    def get_kernel_class(self, kind: str) -> Optional[Type[KernelSpec]]:
        """Get the kernel class for a kind name or alias."""
        key = kind.lower()
        key = self._aliases.get(key, key)
        return self._kernel_classes.get(key)

    def create_kernel(self, kind: str, eta: float, **kwargs) -> KernelSpec:
        """Create and validate a kernel instance.

        Args:
            kind: Kernel kind
            eta: Support length
            **kwargs: Additional arguments (``coefficients`` for custom kernels)

        Raises:
            ValueError: If the kind is not registered
            ProfileError: If the kernel violates its hypotheses
        """
        kernel_class = self.get_kernel_class(kind)

        if kernel_class is None:
            raise ValueError(f"Unknown kernel kind: {kind}. Choose from: {', '.join(self.list_available_kernels())}")

        kernel = kernel_class(eta, **kwargs)
        kernel.validate()
        return kernel

    def list_available_kernels(self) -> List[str]:
        """List registered kernel kinds."""
        return sorted(self._kernel_classes)


# Create a singleton instance
kernel_registry = KernelRegistry()
