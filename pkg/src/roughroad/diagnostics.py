"""Measured quantities of a run: L1 norms and errors, EOA, total variation,
the discrete entropy residual and the per-step observers built on them."""

import logging
import math
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from .errors import DivisibilityError, InvalidArgumentError
from .kernels.weights import KernelWeights, convolve_all
from .mesh import Mesh
from .model import ModelSpec
from .numerics.scheme import StepRecord, extend, interface_velocities
from .report import ErrorRow, ErrorTable
from .state import State

logger = logging.getLogger(__name__)

ENTROPY_TOL = 1e-10
BOUND_TOL = 1e-12
CONSERVATION_TOL = 1e-12
RATIO_TOL = 1e-9

ArrayLike = Union[State, np.ndarray]


def _values(state: ArrayLike) -> np.ndarray:
    return state.values if isinstance(state, State) else np.asarray(state, dtype=np.float64)


def l1_norm(state: ArrayLike, mesh: Mesh) -> float:
    """dx * sum |rho_j|."""
    return float(mesh.dx * np.abs(_values(state)).sum())


def refinement_ratio(coarse_mesh: Mesh, reference_mesh: Mesh) -> int:
    """Integer r = dx / dx_ref.

    Raises:
        DivisibilityError: If r is not an integer >= 1
    """
    ratio = coarse_mesh.dx / reference_mesh.dx
    r = int(round(ratio))
    if r < 1 or abs(ratio - r) > RATIO_TOL * ratio:
        raise DivisibilityError(
            f"dx={coarse_mesh.dx:.12g} is not an integer multiple of dx_ref={reference_mesh.dx:.12g}",
            nearest=max(1, r) * reference_mesh.dx,
        )
    return r


def project(reference: ArrayLike, reference_mesh: Mesh, coarse_mesh: Mesh) -> np.ndarray:
    """Exact coarse-cell averages of the piecewise-constant reference.

    Both meshes centre a cell on x = 0, so for even ratios a coarse interface
    cuts a reference cell in half; integrating the reconstruction handles
    that exactly. Coarse cells past the reference domain see its edge values.
    """
    values = _values(reference)
    if reference_mesh == coarse_mesh:
        return values.copy()
    edges = reference_mesh.interfaces
    cumulative = np.concatenate(([0.0], np.cumsum(values * reference_mesh.dx)))

    def primitive(x: np.ndarray) -> np.ndarray:
        inside = np.interp(x, edges, cumulative)
        below = (x - edges[0]) * values[0]
        above = cumulative[-1] + (x - edges[-1]) * values[-1]
        return np.where(x < edges[0], below, np.where(x > edges[-1], above, inside))

    return np.diff(primitive(coarse_mesh.interfaces)) / coarse_mesh.dx


def l1_error(coarse: State, reference: State, coarse_mesh: Mesh, reference_mesh: Mesh) -> float:
    """dx * sum |coarse - projected reference|.

    Raises:
        DivisibilityError: If dx / dx_ref is not an integer
        InvalidArgumentError: If the two states are at different times
    """
    refinement_ratio(coarse_mesh, reference_mesh)
    if abs(coarse.time - reference.time) > 1e-9 * max(1.0, abs(reference.time)):
        raise InvalidArgumentError(
            f"States at different times: t={coarse.time} vs t_ref={reference.time}"
        )
    projected = project(reference, reference_mesh, coarse_mesh)
    return float(coarse_mesh.dx * np.abs(coarse.values - projected).sum())


def eoa(errors: Sequence[Tuple[float, float]]) -> List[Optional[float]]:
    """Experimental orders log(e_{i-1} / e_i) / log(dx_{i-1} / dx_i); None where undefined."""
    orders: List[Optional[float]] = [None] if errors else []
    for (dx_prev, e_prev), (dx, e) in zip(errors, errors[1:]):
        if e_prev <= 0 or e <= 0 or dx_prev == dx:
            logger.warning("EOA undefined between dx=%g (e=%g) and dx=%g (e=%g)", dx_prev, e_prev, dx, e)
            orders.append(None)
            continue
        orders.append(math.log(e_prev / e) / math.log(dx_prev / dx))
    return orders


def error_table(errors: Sequence[Tuple[float, float]], reference: str, label: str = "") -> ErrorTable:
    orders = eoa(errors)
    rows = [ErrorRow(dx=float(dx), error=float(e), eoa=order) for (dx, e), order in zip(errors, orders)]
    return ErrorTable(rows=rows, reference=reference, label=label)


def total_variation(
    state: ArrayLike,
    mesh: Optional[Mesh] = None,
    window: Optional[Tuple[float, float]] = None,
) -> float:
    """sum |rho_{j+1} - rho_j|, optionally over the cells with centres in [a, b].

    The window must not contain x = 0, where the flux jumps.
    """
    values = _values(state)
    if window is not None:
        a, b = window
        if mesh is None:
            raise InvalidArgumentError("A windowed total variation needs the mesh")
        if a > b or a <= 0 <= b:
            raise InvalidArgumentError(f"TV window [{a}, {b}] must be ordered and exclude x = 0")
        centers = mesh.centers
        values = values[(centers >= a) & (centers <= b)]
    if values.shape[0] < 2:
        return 0.0
    return float(np.abs(np.diff(values)).sum())


def time_variation(state_n: ArrayLike, state_np1: ArrayLike, mesh: Mesh) -> float:
    """dx * sum |rho^{n+1} - rho^n|."""
    return float(mesh.dx * np.abs(_values(state_np1) - _values(state_n)).sum())


def _residual(before: State, after: State, c: float, dt: float, dx: float, v: np.ndarray, model: ModelSpec) -> np.ndarray:
    ext = extend(before, 1)
    up, down = ext[:-1], ext[1:]
    g = model.g
    Fc = (np.maximum(up, c) * g(np.maximum(down, c)) - np.minimum(up, c) * g(np.minimum(down, c))) * v
    lam = dt / dx
    new, old = after.values, before.values
    return (
        np.abs(new - c)
        - np.abs(old - c)
        + lam * (Fc[1:] - Fc[:-1])
        + lam * np.sign(new - c) * c * g(c) * (v[1:] - v[:-1])
    )


def entropy_residual(
    state_n: State,
    state_np1: State,
    c: float,
    dt: float,
    mesh: Mesh,
    model: ModelSpec,
    weights: KernelWeights,
) -> np.ndarray:
    """Left-hand side of the discrete entropy inequality, one value per cell.

    The clipped flux is F^c(u, w) = F(u v c, w v c) - F(u ^ c, w ^ c) with
    F(u, w) = u g(w) v_{j+1/2}. Every entry is <= 0 when dt satisfies the
    bv-strict CFL bound. Under the basic bound the step keeps the maximum
    principle but rough data can give positive entries.
    """
    if not 0.0 <= c <= model.rho_max:
        raise InvalidArgumentError(f"Entropy constant c={c} outside [0, {model.rho_max}]")
    v = interface_velocities(convolve_all(state_n, weights), mesh, model)
    return _residual(state_n, state_np1, c, dt, mesh.dx, v, model)


def entropy_constants(rho_max: float = 1.0, plateaus: Sequence[float] = (0.1, 0.9), count: int = 11) -> List[float]:
    """Equispaced constants on [0, rho_max] plus the plateau values of the datum."""
    grid = np.linspace(0.0, rho_max, count)
    candidates = np.concatenate((grid, np.asarray(plateaus, dtype=float)))
    return sorted({round(float(c), 12) for c in candidates if 0.0 <= c <= rho_max})


class EntropyObserver:
    """Evaluates the entropy residual for a sweep of constants after every step.

    The residual is only guaranteed non-positive for steps within the
    bv-strict CFL bound; ``cfl_mode`` names the bound the run uses and a
    warning is logged for any other.
    """

    name = "entropy"

    def __init__(
        self,
        mesh: Mesh,
        model: ModelSpec,
        c_values: Optional[Sequence[float]] = None,
        tol: float = ENTROPY_TOL,
        cfl_mode: str = "bv-strict",
    ):
        if cfl_mode != "bv-strict":
            logger.warning(
                "Entropy sweep under the %s CFL bound: residuals may be positive on rough data, use bv-strict",
                cfl_mode,
            )
        self.mesh = mesh
        self.model = model
        self.cfl_mode = cfl_mode
        self.c_values = list(c_values) if c_values is not None else entropy_constants(model.rho_max)
        self.tol = tol
        self.max_by_c: Dict[float, float] = {c: -math.inf for c in self.c_values}
        self.coupling_by_c: Dict[float, float] = {c: 0.0 for c in self.c_values}
        self.violations = 0
        self.worst: Optional[Dict[str, Any]] = None

    def observe(self, record: StepRecord) -> None:
        v = record.velocities
        if v is None:
            return
        lam = record.dt / self.mesh.dx
        # psi(R) at x_{-1/2}, recovered from the left velocity there.
        psi_at_zero = v[self.mesh.n_left] / self.model.k_l
        jump = abs(self.model.k_r - self.model.k_l)
        for c in self.c_values:
            residual = _residual(record.before, record.after, c, record.dt, self.mesh.dx, v, self.model)
            peak = float(residual.max())
            self.max_by_c[c] = max(self.max_by_c[c], peak)
            coupling = lam * jump * c * float(self.model.g(c)) * psi_at_zero
            self.coupling_by_c[c] = max(self.coupling_by_c[c], coupling)
            bad = int(np.count_nonzero(residual > self.tol))
            if bad:
                self.violations += bad
                if self.worst is None or peak > self.worst["residual"]:
                    self.worst = {
                        "step": record.index,
                        "c": c,
                        "cell": int(np.argmax(residual)) - self.mesh.n_left,
                        "residual": peak,
                    }

    def max_residual(self) -> float:
        return max(self.max_by_c.values()) if self.max_by_c else -math.inf

    def summary(self) -> Dict[str, Any]:
        return {
            "tolerance": self.tol,
            "cfl_mode": self.cfl_mode,
            "c_values": self.c_values,
            "max_residual": _json_float(self.max_residual()),
            "max_residual_by_c": {f"{c:.6g}": _json_float(r) for c, r in self.max_by_c.items()},
            "coupling_term_by_c": {f"{c:.6g}": r for c, r in self.coupling_by_c.items()},
            "violations": self.violations,
            "worst": self.worst,
        }


class MaxPrincipleObserver:
    """Tracks the extreme cell values against [0, rho_max]."""

    name = "bounds"

    def __init__(self, rho_max: float = 1.0, tol: float = BOUND_TOL):
        self.rho_max = rho_max
        self.tol = tol
        self.lowest = math.inf
        self.highest = -math.inf
        self.violations = 0

    def observe(self, record: StepRecord) -> None:
        values = record.after.values
        self.lowest = min(self.lowest, float(values.min()))
        self.highest = max(self.highest, float(values.max()))
        self.violations += int(np.count_nonzero((values < -self.tol) | (values > self.rho_max + self.tol)))

    def summary(self) -> Dict[str, Any]:
        return {
            "tolerance": self.tol,
            "min": _json_float(self.lowest),
            "max": _json_float(self.highest),
            "violations": self.violations,
        }


class ConservationObserver:
    """Checks dx * (mass change) = -dt * (outflow - inflow) step by step.

    It also records how far the cells next to each boundary moved from their
    initial values, which tells whether a wave reached the boundary.
    """

    name = "conservation"

    def __init__(self, mesh: Mesh, tol: float = CONSERVATION_TOL):
        self.mesh = mesh
        self.tol = tol
        self.max_defect = 0.0
        self.violations = 0
        self.edges: Optional[np.ndarray] = None
        self.boundary_disturbance = 0.0

    def observe(self, record: StepRecord) -> None:
        before, after = record.before.values, record.after.values
        if self.edges is None:
            self.edges = np.array([before[0], before[-1]])
        change = self.mesh.dx * float(np.sum(after - before))
        throughput = record.dt * (record.fluxes[0] - record.fluxes[-1])
        scale = max(self.mesh.dx * float(np.abs(before).sum()), 1e-300)
        defect = abs(change - throughput) / scale
        self.max_defect = max(self.max_defect, defect)
        if defect > self.tol:
            self.violations += 1
        edges = np.array([after[0], after[-1]])
        self.boundary_disturbance = max(self.boundary_disturbance, float(np.max(np.abs(edges - self.edges))))

    def summary(self) -> Dict[str, Any]:
        return {
            "tolerance": self.tol,
            "max_relative_defect": self.max_defect,
            "boundary_disturbance": self.boundary_disturbance,
            "violations": self.violations,
        }


def _json_float(value: float) -> Optional[float]:
    return float(value) if math.isfinite(value) else None
