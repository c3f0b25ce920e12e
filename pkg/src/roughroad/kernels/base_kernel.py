from abc import ABC, abstractmethod
from typing import Any, Dict

import numpy as np

from ..errors import InvalidArgumentError, ProfileError

CHECK_SAMPLES = 1000


class KernelSpec(ABC):
    """Base class for look-ahead kernels omega_eta supported on [0, eta]."""

    kind: str = "abstract"
    requires_endpoint_zero = True
    requires_unit_mass = True

    def __init__(self, eta: float, **kwargs):
        """Initialize the kernel.

        Args:
            eta: Look-ahead distance (support length), > 0
            **kwargs: Kind-specific configuration
        """
        if not eta > 0:
            raise InvalidArgumentError(f"Kernel support eta must be positive, got {eta}")
        self.eta = float(eta)
        self.config = kwargs

    @abstractmethod
    def density(self, y: np.ndarray) -> np.ndarray:
        """omega_eta(y) for y in [0, eta]."""
        pass

    @abstractmethod
    def antiderivative(self, y: np.ndarray) -> np.ndarray:
        """Integral of omega_eta over [0, y]."""
        pass

    def omega_at_zero(self) -> float:
        return float(self.density(np.asarray(0.0)))

    def mass(self) -> float:
        return float(self.antiderivative(np.asarray(self.eta)))

    def validate(self) -> None:
        """Check non-negativity, monotonicity, omega(eta) = 0 and unit mass on a sample.

        Raises:
            ProfileError: If a hypothesis fails
        """
        y = np.linspace(0.0, self.eta, CHECK_SAMPLES)
        w = self.density(y)
        scale = max(1.0, float(np.max(np.abs(w))))
        if np.any(w < -1e-12 * scale):
            raise ProfileError(f"Kernel '{self.kind}' takes negative values on [0, eta]")
        if np.any(np.diff(w) > 1e-12 * scale):
            raise ProfileError(f"Kernel '{self.kind}' is not non-increasing on [0, eta]")
        if self.requires_endpoint_zero and abs(w[-1]) > 1e-12 * scale:
            raise ProfileError(f"Kernel '{self.kind}' must vanish at eta, got {w[-1]:.3e}")
        if self.requires_unit_mass and abs(self.mass() - 1.0) > 1e-9:
            raise ProfileError(f"Kernel '{self.kind}' must integrate to 1, got {self.mass():.12g}")

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind, "eta": self.eta, **self.config}

    def __repr__(self):
        return f"{type(self).__name__}(eta={self.eta})"
