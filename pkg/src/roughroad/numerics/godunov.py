"""Godunov scheme for the local limit problem rho_t + (k(x) rho g(rho) psi(rho))_x = 0.

k(x) is k_l for cells j < 0 and k_r for cells j >= 0, so the two fluxes meet
at the interface x_{-1/2}. Every interface uses the demand/supply form
min(D_up(rho_up), S_down(rho_down)), which is the classical Godunov flux for
unimodal fluxes and the standard coupling when the two fluxes do not cross.
"""

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np
from numpy.polynomial import Polynomial
from scipy.optimize import minimize_scalar

from ..errors import CFLViolationError, InvalidArgumentError, ProfileError
from ..mesh import Mesh
from ..model import FluxSide, ModelSpec
from ..report import RunReport
from ..state import State
from .scheme import StepObserver, StepRecord, _check_compatible, check_bounds, extend, march

logger = logging.getLogger(__name__)

SAMPLES = 10_000
ARGMAX_TOL = 1e-12
CFL_SLACK = 1e-12


@dataclass(frozen=True)
class LocalFlux:
    """f(rho) = k rho g(rho) psi(rho) on [0, rho_max] with its maximizer rho_star."""

    poly: Polynomial
    rho_max: float
    label: str = ""
    rho_star: float = field(init=False)
    f_star: float = field(init=False)
    max_speed: float = field(init=False)

    def __post_init__(self):
        grid = np.linspace(0.0, self.rho_max, SAMPLES)
        dpoly = self.poly.deriv()
        slopes = dpoly(grid)
        _check_unimodal(slopes, self.label)
        rho_star = _argmax(self.poly, grid)
        object.__setattr__(self, "rho_star", rho_star)
        object.__setattr__(self, "f_star", float(self.poly(rho_star)))
        object.__setattr__(self, "max_speed", float(np.max(np.abs(slopes))))

    @classmethod
    def from_model(cls, model: ModelSpec, side: FluxSide) -> "LocalFlux":
        poly = model.k(side) * Polynomial([0.0, 1.0]) * model.g.poly * model.psi.poly
        return cls(poly=poly, rho_max=model.rho_max, label=side.value)

    def __call__(self, rho):
        return self.poly(rho)

    def demand(self, rho):
        rho = np.asarray(rho)
        return np.where(rho <= self.rho_star, self.poly(rho), self.f_star)

    def supply(self, rho):
        rho = np.asarray(rho)
        return np.where(rho <= self.rho_star, self.f_star, self.poly(rho))


@dataclass(frozen=True)
class LocalFluxPair:
    left: LocalFlux
    right: LocalFlux

    @classmethod
    def from_model(cls, model: ModelSpec) -> "LocalFluxPair":
        return cls(left=LocalFlux.from_model(model, FluxSide.LEFT), right=LocalFlux.from_model(model, FluxSide.RIGHT))

    @property
    def rho_max(self) -> float:
        return self.left.rho_max


def _check_unimodal(slopes: np.ndarray, label: str) -> None:
    scale = float(np.max(np.abs(slopes)))
    if scale == 0.0:
        raise ProfileError(f"Local flux '{label}' is identically zero")
    signs = np.sign(slopes[np.abs(slopes) > 1e-12 * scale])
    changes = np.count_nonzero(np.diff(signs))
    if changes != 1 or signs[0] < 0:
        raise ProfileError(
            f"Local flux '{label}' is not unimodal on [0, rho_max] ({changes} slope sign changes)"
        )


def _argmax(poly: Polynomial, grid: np.ndarray) -> float:
    values = poly(grid)
    i = int(np.argmax(values))
    best = float(grid[i])
    if 0 < i < len(grid) - 1:
        try:
            result = minimize_scalar(
                lambda r: -poly(r),
                bracket=(grid[i - 1], grid[i], grid[i + 1]),
                method="golden",
                tol=ARGMAX_TOL,
            )
        except ValueError:
            return best
        if grid[i - 1] <= result.x <= grid[i + 1] and poly(result.x) >= values[i]:
            best = float(result.x)
    return best


def godunov_interface_flux(rho_L, rho_R, flux_L: LocalFlux, flux_R: LocalFlux):
    """min(D_L(rho_L), S_R(rho_R))."""
    return np.minimum(flux_L.demand(rho_L), flux_R.supply(rho_R))


def godunov_cfl_dt(fluxes: LocalFluxPair, dx: float, safety: float = 0.9) -> float:
    """theta dx / max |f'| over both sides."""
    if not 0 < safety <= 1:
        raise InvalidArgumentError(f"CFL safety factor must lie in (0, 1], got {safety}")
    return safety * float(dx) / max(fluxes.left.max_speed, fluxes.right.max_speed)


def godunov_fluxes(state: State, mesh: Mesh, fluxes: LocalFluxPair) -> np.ndarray:
    """Godunov fluxes at the n_cells + 1 interfaces of the padded state."""
    ext = extend(state, 1)
    up, down = ext[:-1], ext[1:]
    i = np.arange(mesh.n_cells + 1)
    demand = np.where(i <= mesh.n_left, fluxes.left.demand(up), fluxes.right.demand(up))
    supply = np.where(i < mesh.n_left, fluxes.left.supply(down), fluxes.right.supply(down))
    return np.minimum(demand, supply)


def advance_godunov(state: State, mesh: Mesh, dt: float, fluxes: LocalFluxPair, index: int = 0) -> StepRecord:
    F = godunov_fluxes(state, mesh, fluxes)
    new = state.values - dt / mesh.dx * (F[1:] - F[:-1])
    check_bounds(new, fluxes.rho_max, index, -mesh.n_left)
    return StepRecord(index=index, dt=dt, before=state, after=state.evolve(new, state.time + dt), fluxes=F)


def godunov_step(state: State, mesh: Mesh, dt: float, fluxes: LocalFluxPair) -> State:
    """One conservative Godunov step.

    Raises:
        CFLViolationError: If dt exceeds dx / max |f'|
    """
    bound = godunov_cfl_dt(fluxes, mesh.dx, safety=1.0)
    if dt > bound * (1 + CFL_SLACK):
        raise CFLViolationError(f"dt={dt:.6e} exceeds the local CFL bound {bound:.6e}")
    return advance_godunov(state, mesh, dt, fluxes).after


def run_godunov(
    state0: State,
    mesh: Mesh,
    model: ModelSpec,
    t_final: float,
    observers: Sequence[StepObserver] = (),
    dt: Optional[float] = None,
    safety: float = 0.9,
    checkpoints: Iterable[float] = (),
    label: str = "godunov",
) -> RunReport:
    """Solve the local limit problem of ``model`` up to ``t_final``."""
    _check_compatible(state0, mesh, model, None)
    fluxes = LocalFluxPair.from_model(model)
    bound = godunov_cfl_dt(fluxes, mesh.dx, safety=1.0)
    if dt is None:
        dt = safety * bound
    elif dt > bound * (1 + CFL_SLACK):
        raise CFLViolationError(f"dt={dt:.6e} exceeds the local CFL bound {bound:.6e}")
    logger.info(
        "Running %s: dx=%.6g, dt=%.6e, rho*=(%.6f, %.6f)",
        label,
        mesh.dx,
        dt,
        fluxes.left.rho_star,
        fluxes.right.rho_star,
    )

    def advance_fn(state: State, size: float, index: int) -> StepRecord:
        return advance_godunov(state, mesh, size, fluxes, index)

    return march(state0, mesh, dt, t_final, advance_fn, observers, checkpoints, label)
