from .base_kernel import KernelSpec
from .builtin_kernels import ConstantKernel, LinearDecreasingKernel, PolynomialKernel
from .kernel_registry import KernelRegistry, kernel_registry
from .weights import ConvolutionField, KernelWeights, convolve, convolve_all, discretize_kernel


def create_kernel(kind: str, eta: float, **kwargs) -> KernelSpec:
    """Create a validated kernel from the default registry."""
    return kernel_registry.create_kernel(kind, eta, **kwargs)
