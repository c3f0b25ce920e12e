"""Upwind finite-volume scheme for the non-local flux with a discontinuity at x = 0.

One step reads

    rho_j^{n+1} = rho_j^n - lam * (F_{j+1/2} - F_{j-1/2}),
    F_{j+1/2}   = rho_j g(rho_{j+1}) k_s psi(R_{j+1/2}),

with k_s = k_l for x_{j+1/2} < 0 and k_r otherwise, and R the discrete
look-ahead convolution. Boundaries are absorbing: ghost cells repeat the
outermost physical value.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Protocol, Sequence

import numpy as np
import pandas as pd

from ..errors import (
    CFLViolationError,
    DomainError,
    InternalConsistencyError,
    InvalidArgumentError,
    RoughRoadError,
    StepError,
)
from ..kernels.weights import ConvolutionField, KernelWeights, convolve_all
from ..mesh import Mesh, build_time_grid
from ..model import FluxSide, ModelSpec, cfl_dt, velocity
from ..report import SERIES_COLUMNS, RunReport
from ..state import State

logger = logging.getLogger(__name__)

BOUND_SLACK = 1e-12
CFL_SLACK = 1e-12


@dataclass(frozen=True)
class StepRecord:
    """Everything one step computed; handed read-only to observers.

    ``fluxes[i]`` is the flux through interface i of the padded state, so
    ``fluxes[0]`` enters through the left boundary and ``fluxes[-1]`` leaves
    through the right one.
    """

    index: int
    dt: float
    before: State
    after: State
    fluxes: np.ndarray
    field: Optional[ConvolutionField] = None
    velocities: Optional[np.ndarray] = None


class StepObserver(Protocol):
    name: str

    def observe(self, record: StepRecord) -> None: ...

    def summary(self) -> Dict: ...


def ghost_values(state: State, side: str, count: int) -> np.ndarray:
    """Zero-order extrapolation of the outermost physical value."""
    if count < 1:
        raise InvalidArgumentError(f"Ghost count must be >= 1, got {count}")
    if side == "left":
        edge = state.values[0]
    elif side == "right":
        edge = state.values[-1]
    else:
        raise InvalidArgumentError(f"Ghost side must be 'left' or 'right', got {side!r}")
    return np.full(count, edge)


def extend(state: State, right: int = 1) -> np.ndarray:
    """One left ghost, the physical cells, then ``right`` right ghosts."""
    return np.concatenate((ghost_values(state, "left", 1), state.values, ghost_values(state, "right", right)))


def numerical_flux(j_interface: int, rho_up: float, rho_down: float, R: float, model: ModelSpec) -> float:
    """F at x_{j+1/2}: Left for j < 0, Right for j >= 0."""
    side = FluxSide.LEFT if j_interface < 0 else FluxSide.RIGHT
    return rho_up * model.g(rho_down) * velocity(side, R, model)


def interface_velocities(field: ConvolutionField, mesh: Mesh, model: ModelSpec) -> np.ndarray:
    """v_{j+1/2} at the n_cells + 1 interfaces of the padded state."""
    R = field.values
    split = mesh.n_left + 1
    return np.concatenate(
        (
            velocity(FluxSide.LEFT, R[:split], model),
            velocity(FluxSide.RIGHT, R[split:], model),
        )
    )


def interface_fluxes(state: State, mesh: Mesh, model: ModelSpec, weights: KernelWeights):
    """Fluxes, convolution field and velocities at every interface of one step."""
    field = convolve_all(state, weights)
    v = interface_velocities(field, mesh, model)
    ext = extend(state, 1)
    fluxes = ext[:-1] * model.g(ext[1:]) * v
    return fluxes, field, v


def check_bounds(values: np.ndarray, rho_max: float, index: int, first_cell: int = 0) -> None:
    """Raise if a cell left [0, rho_max]; ``first_cell`` is the mesh index of ``values[0]``."""
    lo, hi = float(values.min()), float(values.max())
    if lo < -BOUND_SLACK or hi > rho_max + BOUND_SLACK:
        cell = (int(np.argmin(values)) if lo < -BOUND_SLACK else int(np.argmax(values))) + first_cell
        raise InternalConsistencyError(
            f"Maximum principle broken at step {index}, cell {cell}: range [{lo!r}, {hi!r}]",
            cell=cell,
        )


def advance(
    state: State,
    mesh: Mesh,
    dt: float,
    model: ModelSpec,
    weights: KernelWeights,
    index: int = 0,
) -> StepRecord:
    """One step with its fluxes; no CFL check (``step`` and ``run`` do that)."""
    fluxes, field, v = interface_fluxes(state, mesh, model, weights)
    lam = dt / mesh.dx
    new = state.values - lam * (fluxes[1:] - fluxes[:-1])
    check_bounds(new, model.rho_max, index, -mesh.n_left)
    after = state.evolve(new, state.time + dt)
    return StepRecord(index=index, dt=dt, before=state, after=after, fluxes=fluxes, field=field, velocities=v)


def _check_compatible(state: State, mesh: Mesh, model: ModelSpec, weights: Optional[KernelWeights]) -> None:
    if len(state) != mesh.n_cells:
        raise InvalidArgumentError(f"State has {len(state)} cells, mesh has {mesh.n_cells}")
    if weights is not None and abs(weights.dx - mesh.dx) > 1e-12 * mesh.dx:
        raise InvalidArgumentError(f"Kernel weights built for dx={weights.dx}, mesh has dx={mesh.dx}")
    if state.min() < -BOUND_SLACK or state.max() > model.rho_max + BOUND_SLACK:
        raise DomainError(f"State outside [0, {model.rho_max}]: [{state.min()}, {state.max()}]")


def _check_cfl(dt: float, bound: float) -> None:
    if dt > bound * (1 + CFL_SLACK):
        raise CFLViolationError(f"dt={dt:.6e} exceeds the CFL bound {bound:.6e}")


def step(
    state: State,
    mesh: Mesh,
    dt: float,
    model: ModelSpec,
    weights: KernelWeights,
    cfl_mode: str = "basic",
) -> State:
    """Advance ``state`` by dt.

    Raises:
        CFLViolationError: If dt exceeds the CFL bound of ``cfl_mode``
        InternalConsistencyError: If a cell leaves [0, rho_max]
    """
    _check_compatible(state, mesh, model, weights)
    _check_cfl(dt, cfl_dt(model, mesh.dx, cfl_mode, weights, safety=1.0))
    return advance(state, mesh, dt, model, weights).after


def _row(state: State, mesh: Mesh, index: int, dt: float, fluxes: Optional[np.ndarray], previous: Optional[State]):
    # Local import: diagnostics builds on this module.
    from ..diagnostics import l1_norm, time_variation, total_variation

    n_left = mesh.n_left
    if fluxes is None:
        inflow = outflow = left_of_zero = right_of_zero = np.nan
    else:
        inflow, outflow = fluxes[0], fluxes[-1]
        left_of_zero, right_of_zero = fluxes[n_left], fluxes[n_left + 1]
    return (
        index,
        state.time,
        dt,
        l1_norm(state, mesh),
        state.min(),
        state.max(),
        total_variation(state),
        0.0 if previous is None else time_variation(previous, state, mesh),
        float(inflow),
        float(outflow),
        float(left_of_zero),
        float(right_of_zero),
    )


def march(
    state0: State,
    mesh: Mesh,
    dt: float,
    t_final: float,
    advance_fn: Callable[[State, float, int], StepRecord],
    observers: Sequence[StepObserver] = (),
    checkpoints: Iterable[float] = (),
    label: str = "",
) -> RunReport:
    """Time loop shared by the non-local scheme and the local Godunov oracle.

    Checkpoint times split the run into segments that each end exactly on
    their target time; the last step of a segment may be shortened.
    """
    checkpoints = [float(t) for t in checkpoints]
    targets = sorted({float(t) for t in checkpoints if state0.time < t < t_final})
    targets.append(float(t_final))

    rows: List[tuple] = [_row(state0, mesh, 0, 0.0, None, None)]
    snapshots: Dict[float, State] = {}
    if state0.time in checkpoints:
        snapshots[state0.time] = state0
    state = state0
    index = 0
    total = sum(
        build_time_grid(mesh.dx, dt, b - a).n_steps for a, b in zip([state0.time] + targets[:-1], targets)
    )
    report_every = max(1, total // 10)

    for target in targets:
        grid = build_time_grid(mesh.dx, dt, target - state.time)
        for size in grid.step_sizes():
            try:
                record = advance_fn(state, size, index)
            except StepError:
                raise
            except RoughRoadError as exc:
                raise StepError(index, exc) from exc
            for observer in observers:
                observer.observe(record)
            index += 1
            rows.append(_row(record.after, mesh, index, size, record.fluxes, state))
            state = record.after
            if index % report_every == 0:
                logger.debug("%s step %d/%d, t=%.6f", label or "run", index, total, state.time)
        # Land exactly on the target time.
        state = state.evolve(state.values, target)
        rows[-1] = (rows[-1][0], target) + rows[-1][2:]
        if target in checkpoints:
            snapshots[target] = state

    series = pd.DataFrame(rows, columns=list(SERIES_COLUMNS))
    return RunReport(
        series=series,
        final=state,
        mesh=mesh,
        dt=dt,
        snapshots=snapshots,
        observers={observer.name: observer.summary() for observer in observers},
        label=label,
    )


def run(
    state0: State,
    mesh: Mesh,
    model: ModelSpec,
    weights: KernelWeights,
    t_final: float,
    observers: Sequence[StepObserver] = (),
    dt: Optional[float] = None,
    cfl_mode: str = "basic",
    safety: float = 0.9,
    checkpoints: Iterable[float] = (),
    label: str = "",
) -> RunReport:
    """Advance ``state0`` to the absolute time ``t_final``.

    A single dt from the CFL bound is used for the whole run.

    Raises:
        CFLViolationError: If an explicit dt exceeds the bound of ``cfl_mode``
        StepError: If a step fails; carries the step index
    """
    _check_compatible(state0, mesh, model, weights)
    if t_final < state0.time:
        raise InvalidArgumentError(f"t_final={t_final} lies before the state time {state0.time}")
    bound = cfl_dt(model, mesh.dx, cfl_mode, weights, safety=1.0)
    if dt is None:
        dt = cfl_dt(model, mesh.dx, cfl_mode, weights, safety=safety)
    else:
        _check_cfl(dt, bound)

    checkpoints = [float(t) for t in checkpoints]
    logger.info(
        "Running %s: dx=%.6g, eta=%g, dt=%.6e, t=%g -> %g",
        label or "scheme",
        mesh.dx,
        weights.eta,
        dt,
        state0.time,
        t_final,
    )

    def advance_fn(state: State, size: float, index: int) -> StepRecord:
        return advance(state, mesh, size, model, weights, index)

    report = march(state0, mesh, dt, t_final, advance_fn, observers, checkpoints, label)
    logger.info("Finished %s after %d steps", label or "scheme", report.n_steps)
    return report
