"""Velocity laws, flux and CFL bounds of the road with a change of surface at x = 0."""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Optional, Union

import numpy as np

from .errors import DegenerateModelError, DomainError, InvalidArgumentError, ProfileError, UndefinedSideError
from .kernels.weights import KernelWeights
from .profiles import FOLLOW_PSI, BoundProfile, ProfileManager, get_default_profile_manager
from .profiles.profile_manager import ProfileRef

logger = logging.getLogger(__name__)

CFL_MODES = ("basic", "bv-strict")
DEFAULT_SAFETY = 0.9
VELOCITY_SLACK = 1e-10
ENDPOINT_TOL = 1e-12


class FluxSide(str, Enum):
    LEFT = "left"
    RIGHT = "right"

    @classmethod
    def from_position(cls, x: float) -> "FluxSide":
        if x < 0:
            return cls.LEFT
        if x > 0:
            return cls.RIGHT
        raise UndefinedSideError("The flux side is undefined at x = 0")

    @classmethod
    def from_interface(cls, i: int, n_left: int) -> "FluxSide":
        """Side of interface ``i`` of a ghost-padded state (x_{j-1/2} with j = i - n_left)."""
        return cls.LEFT if i <= n_left else cls.RIGHT


@dataclass(frozen=True)
class ModelSpec:
    """v_s(R) = k_s psi(R) on each side, slowdown factor g, density bound rho_max."""

    k_l: float
    k_r: float
    psi: BoundProfile
    g: BoundProfile
    rho_max: float = 1.0

    def __post_init__(self):
        if not (self.k_l > 0 and self.k_r > 0):
            raise InvalidArgumentError(f"Speed factors must be positive, got k_l={self.k_l}, k_r={self.k_r}")
        if not self.rho_max > 0:
            raise InvalidArgumentError(f"rho_max must be positive, got {self.rho_max}")
        if not self.psi.is_non_increasing():
            raise ProfileError(f"psi '{self.psi.label}' must be non-increasing on [0, rho_max]")
        if np.any(self.psi(self.psi.grid()) < -ENDPOINT_TOL):
            raise ProfileError(f"psi '{self.psi.label}' must be non-negative on [0, rho_max]")
        if not self.g.is_non_increasing():
            raise ProfileError(f"g '{self.g.label}' must be non-increasing on [0, rho_max]")
        if abs(self.g(self.rho_max)) > ENDPOINT_TOL:
            raise ProfileError(f"g '{self.g.label}' must vanish at rho_max, got {self.g(self.rho_max):.3e}")
        if np.any(self.g(self.g.grid()) < -ENDPOINT_TOL):
            raise ProfileError(f"g '{self.g.label}' must be non-negative on [0, rho_max]")

    @classmethod
    def from_names(
        cls,
        k_l: float,
        k_r: float,
        psi: ProfileRef = "linear",
        g: ProfileRef = "linear",
        rho_max: float = 1.0,
        manager: Optional[ProfileManager] = None,
    ) -> "ModelSpec":
        """Build a model from profile names, aliases or coefficient lists.

        ``g="psi"`` makes the slowdown factor follow the speed profile.
        """
        manager = manager or get_default_profile_manager()
        psi_profile = manager.resolve(psi)
        g_profile = psi_profile if isinstance(g, str) and g.strip().lower() == FOLLOW_PSI else manager.resolve(g)
        return cls(
            k_l=float(k_l),
            k_r=float(k_r),
            psi=psi_profile.bind(rho_max),
            g=g_profile.bind(rho_max),
            rho_max=float(rho_max),
        )

    def k(self, side: FluxSide) -> float:
        return self.k_l if side is FluxSide.LEFT else self.k_r

    @cached_property
    def psi_norm(self) -> float:
        return self.psi.sup_norm()

    @cached_property
    def psi_prime_norm(self) -> float:
        return self.psi.derivative_sup_norm()

    @cached_property
    def g_norm(self) -> float:
        return self.g.sup_norm()

    @cached_property
    def g_prime_norm(self) -> float:
        return self.g.derivative_sup_norm()

    def to_dict(self):
        return {
            "k_l": self.k_l,
            "k_r": self.k_r,
            "psi": self.psi.to_dict(),
            "g": self.g.to_dict(),
            "rho_max": self.rho_max,
        }


def velocity(side: FluxSide, R: Union[float, np.ndarray], model: ModelSpec):
    """k_side psi(R).

    Raises:
        DomainError: If R leaves [0, rho_max] by more than the round-off slack
    """
    R_arr = np.asarray(R)
    if np.any(R_arr < -VELOCITY_SLACK) or np.any(R_arr > model.rho_max + VELOCITY_SLACK):
        raise DomainError(f"Convolution value outside [0, {model.rho_max}]: {R}")
    return model.k(side) * model.psi(R)


def _bound(dx: float, denominator: float) -> float:
    return dx / denominator if denominator > 0 else math.inf


def cfl_dt(
    model: ModelSpec,
    dx: float,
    mode: str = "basic",
    kernel: Optional[KernelWeights] = None,
    safety: float = DEFAULT_SAFETY,
) -> float:
    """Largest admissible dt times the safety factor.

    ``basic`` guarantees the maximum principle; ``bv-strict`` is the tighter
    bound under which the solution also stays continuous in time, and needs
    the kernel for omega(0).

    Raises:
        DegenerateModelError: If every bound is infinite (e.g. psi == 0)
    """
    if mode not in CFL_MODES:
        raise InvalidArgumentError(f"Unknown CFL mode '{mode}', choose from {CFL_MODES}")
    if not 0 < safety <= 1:
        raise InvalidArgumentError(f"CFL safety factor must lie in (0, 1], got {safety}")
    dx = float(dx)

    bounds = []
    for k in (model.k_l, model.k_r):
        if mode == "basic":
            bounds.append(_bound(dx, model.rho_max * k * model.g_prime_norm * model.psi_norm))
            bounds.append(_bound(dx, k * model.g_norm * model.psi_norm))
        else:
            if kernel is None:
                raise InvalidArgumentError("The bv-strict CFL mode needs the kernel weights")
            denominator = (
                model.rho_max * k * model.psi_norm * (model.g_norm + model.g_prime_norm)
                + dx * model.rho_max * kernel.omega_at_zero * k * model.psi_prime_norm * model.g_norm
            )
            bounds.append(_bound(dx, denominator))

    dt = min(bounds)
    if math.isinf(dt):
        raise DegenerateModelError("Every CFL denominator vanishes; the model transports nothing")
    logger.debug("CFL (%s): dt=%.6e before safety %.3f", mode, dt, safety)
    return safety * dt


def exact_flux(x: float, rho, R, model: ModelSpec):
    """rho g(rho) v_side(R) with the side taken from the sign of x."""
    side = FluxSide.from_position(x)
    return rho * model.g(rho) * velocity(side, R, model)
