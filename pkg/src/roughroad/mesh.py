"""Uniform cell-centred mesh aligned with the flux discontinuity.

Cell ``I_j = [x_{j-1/2}, x_{j+1/2})`` has centre ``x_j = j * dx``; the
discontinuity x = 0 is the midpoint of ``I_0`` so no interface ever sits on it.
"""

import logging
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence, Tuple

import numpy as np

from .errors import DomainError, InvalidArgumentError
from .state import State

logger = logging.getLogger(__name__)

GAUSS_POINTS = 5


@dataclass(frozen=True)
class Mesh:
    """Cells j = -n_left, ..., n_right of width dx."""

    dx: float
    n_left: int
    n_right: int

    @property
    def n_cells(self) -> int:
        return self.n_left + self.n_right + 1

    @property
    def indices(self) -> np.ndarray:
        return np.arange(-self.n_left, self.n_right + 1)

    @property
    def centers(self) -> np.ndarray:
        return self.indices * self.dx

    @property
    def interfaces(self) -> np.ndarray:
        """x_{j+1/2} for j = -n_left-1, ..., n_right (n_cells + 1 values)."""
        return (np.arange(-self.n_left - 1, self.n_right + 1) + 0.5) * self.dx

    @property
    def domain(self) -> Tuple[float, float]:
        return (-(self.n_left + 0.5) * self.dx, (self.n_right + 0.5) * self.dx)

    def position(self, j: int) -> int:
        """Array position of cell j."""
        if not -self.n_left <= j <= self.n_right:
            raise InvalidArgumentError(f"Cell {j} outside [{-self.n_left}, {self.n_right}]")
        return j + self.n_left

    def to_dict(self):
        return {"dx": self.dx, "n_left": self.n_left, "n_right": self.n_right}


@dataclass(frozen=True)
class TimeGrid:
    """Uniform time steps; the last one may be shortened to land on t_final."""

    dt: float
    lam: float
    t_final: float
    n_steps: int

    def step_sizes(self) -> Iterator[float]:
        for n in range(self.n_steps):
            if n == self.n_steps - 1:
                yield self.last_step
            else:
                yield self.dt

    @property
    def last_step(self) -> float:
        if self.n_steps == 0:
            return 0.0
        last = self.t_final - (self.n_steps - 1) * self.dt
        # Snap to dt so restarted runs take bit-identical steps.
        if abs(last - self.dt) <= 1e-12 * self.dt:
            return self.dt
        return last


@dataclass(frozen=True)
class PiecewiseConstant:
    """rho0 = values[i] on [breakpoints[i-1], breakpoints[i]).

    ``values`` has one more entry than ``breakpoints``; the first and last
    pieces extend to -inf and +inf.
    """

    breakpoints: Tuple[float, ...]
    values: Tuple[float, ...]

    def __post_init__(self):
        object.__setattr__(self, "breakpoints", tuple(float(b) for b in self.breakpoints))
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        if len(self.values) != len(self.breakpoints) + 1:
            raise InvalidArgumentError(
                "A piecewise-constant datum needs one more value than breakpoints"
            )
        if any(a >= b for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise InvalidArgumentError("Breakpoints must be strictly increasing")

    @classmethod
    def from_pairs(cls, pairs: Sequence[Tuple[float, float]], default: float = 0.0) -> "PiecewiseConstant":
        """Build from ordered (breakpoint, value) pairs; ``default`` holds left of the first one."""
        breakpoints = [b for b, _ in pairs if not math.isinf(b)]
        values = [default] if not pairs or not math.isinf(pairs[0][0]) else []
        values.extend(v for _, v in pairs)
        return cls(tuple(breakpoints), tuple(values))

    @classmethod
    def constant(cls, value: float) -> "PiecewiseConstant":
        return cls((), (value,))

    def __call__(self, x: np.ndarray) -> np.ndarray:
        idx = np.searchsorted(np.asarray(self.breakpoints), x, side="right")
        return np.asarray(self.values)[idx]

    def integrate(self, a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Exact integral over [a, b] for arrays of interval ends."""
        a = np.asarray(a, dtype=np.float64)[..., None]
        b = np.asarray(b, dtype=np.float64)[..., None]
        lo = np.concatenate(([-np.inf], self.breakpoints))
        hi = np.concatenate((self.breakpoints, [np.inf]))
        overlap = np.clip(np.minimum(b, hi) - np.maximum(a, lo), 0.0, None)
        return overlap @ np.asarray(self.values)

    def to_dict(self):
        return {"breakpoints": list(self.breakpoints), "values": list(self.values)}

    @classmethod
    def from_dict(cls, data):
        return cls(tuple(data.get("breakpoints", ())), tuple(data["values"]))


def build_mesh(dx: float, n_left: int, n_right: int) -> Mesh:
    """Build the aligned mesh.

    Args:
        dx: Cell width, > 0
        n_left: Number of cells with j < 0, >= 1
        n_right: Number of cells with j > 0, >= 1

    Raises:
        InvalidArgumentError: If dx or a count is not admissible
    """
    if not (dx > 0 and math.isfinite(dx)):
        raise InvalidArgumentError(f"dx must be positive, got {dx}")
    if int(n_left) != n_left or int(n_right) != n_right or n_left < 1 or n_right < 1:
        raise InvalidArgumentError(
            f"Cell counts must be integers >= 1, got n_left={n_left}, n_right={n_right}"
        )
    return Mesh(dx=float(dx), n_left=int(n_left), n_right=int(n_right))


def mesh_for_domain(dx: float, x_min: float, x_max: float) -> Mesh:
    """Aligned mesh whose cell centres cover approximately [x_min, x_max]."""
    if not x_min < 0 < x_max:
        raise InvalidArgumentError(f"Domain [{x_min}, {x_max}] must contain x = 0")
    n_left = int(round(-x_min / dx))
    n_right = int(round(x_max / dx))
    return build_mesh(dx, n_left, n_right)


def build_time_grid(dx: float, dt: float, t_final: float) -> TimeGrid:
    """Time grid with n_steps * dt >= t_final > (n_steps - 1) * dt."""
    if not dt > 0:
        raise InvalidArgumentError(f"dt must be positive, got {dt}")
    if t_final < 0:
        raise InvalidArgumentError(f"t_final must be non-negative, got {t_final}")
    n_steps = int(math.ceil(t_final / dt)) if t_final > 0 else 0
    while n_steps * dt < t_final:
        n_steps += 1
    while n_steps > 0 and (n_steps - 1) * dt >= t_final:
        n_steps -= 1
    return TimeGrid(dt=dt, lam=dt / dx, t_final=t_final, n_steps=n_steps)


def _check_range(values: np.ndarray, rho_max: float, what: str) -> None:
    if values.size and (values.min() < 0.0 or values.max() > rho_max):
        raise DomainError(
            f"{what} must lie in [0, {rho_max}], got [{values.min()}, {values.max()}]"
        )


def project_initial_datum(rho0: PiecewiseConstant, mesh: Mesh, rho_max: float = 1.0) -> State:
    """Exact cell averages of a piecewise-constant datum.

    Cells that lie inside one piece take its value exactly. Overlaps of
    straddling cells are measured in units of dx against the cell index, so
    no interface coordinates are subtracted.

    Raises:
        DomainError: If a datum value lies outside [0, rho_max]
    """
    values = np.asarray(rho0.values)
    _check_range(values, rho_max, "Initial datum values")
    j = mesh.indices.astype(np.float64)
    cuts = np.asarray(rho0.breakpoints, dtype=np.float64) / mesh.dx
    # Breakpoints within round-off of a cell centre or interface are put on it.
    halves = np.round(2.0 * cuts) / 2.0
    cuts = np.where(np.abs(cuts - halves) <= 1e-9 * np.maximum(1.0, np.abs(cuts)), halves, cuts)

    first = np.searchsorted(cuts, j - 0.5, side="right")
    last = np.searchsorted(cuts, j + 0.5, side="left")
    averages = values[first].copy()

    straddling = np.nonzero(first != last)[0]
    if straddling.size:
        lo = np.concatenate(([-np.inf], cuts))
        hi = np.concatenate((cuts, [np.inf]))
        jj = j[straddling, None]
        overlap = np.clip(np.minimum(jj + 0.5, hi) - np.maximum(jj - 0.5, lo), 0.0, None)
        averages[straddling] = np.clip(overlap @ values, values.min(), values.max())
    return State(values=averages, time=0.0)


def project_function(rho0: Callable[[np.ndarray], np.ndarray], mesh: Mesh, rho_max: float = 1.0) -> State:
    """Cell averages of a general function by 5-point Gauss-Legendre per cell."""
    nodes, weights = np.polynomial.legendre.leggauss(GAUSS_POINTS)
    centers = mesh.centers[:, None]
    x = centers + 0.5 * mesh.dx * nodes[None, :]
    averages = 0.5 * (np.asarray(rho0(x), dtype=np.float64) @ weights)
    _check_range(averages, rho_max, "Projected initial datum")
    return State(values=averages, time=0.0)
