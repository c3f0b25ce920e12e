"""Execution of experiments: independent runs, error and distance tables, artifacts.

Runs of one experiment are independent and can be spread over worker
processes; results are gathered by key, so the output does not depend on
completion order.
"""

import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple, Union

import numpy as np
import pandas as pd

from ..diagnostics import (
    ConservationObserver,
    EntropyObserver,
    MaxPrincipleObserver,
    error_table,
    l1_error,
    total_variation,
)
from ..errors import InvalidArgumentError
from ..kernels import KernelSpec, create_kernel, discretize_kernel
from ..mesh import project_initial_datum
from ..model import ModelSpec
from ..numerics.godunov import run_godunov
from ..numerics.scheme import run
from ..report import FLOAT_FORMAT, ErrorTable, RunReport
from ..utils.config import RunConfig, format_fraction
from .experiment import ExperimentSpec

logger = logging.getLogger(__name__)

PUBLISHED_TOLERANCE = 0.25
TV_WINDOW_GAP = 0.1


@dataclass(frozen=True)
class RunOptions:
    """Solver and observer settings shared by every run of an experiment."""

    cfl_mode: str = "basic"
    cfl_safety: float = 0.9
    entropy_sweep: bool = False
    entropy_values: Optional[Tuple[float, ...]] = None
    check_bounds: bool = True
    check_conservation: bool = True
    parallelism: int = 1
    compare_g: Optional[str] = None

    @classmethod
    def from_config(cls, config: RunConfig) -> "RunOptions":
        values = config.observers.entropy_values
        return cls(
            cfl_mode=config.cfl.mode,
            cfl_safety=config.cfl.safety,
            entropy_sweep=config.observers.entropy_sweep,
            entropy_values=tuple(values) if values is not None else None,
            parallelism=config.parallelism,
            compare_g=config.compare_g,
        )


@dataclass(frozen=True)
class Job:
    key: str
    spec: ExperimentSpec
    dx: Fraction
    local: bool = False
    eta: Optional[float] = None
    t_final: Optional[float] = None
    checkpoints: Tuple[float, ...] = ()
    g: Optional[str] = None


def build_model(spec: ExperimentSpec, g: Optional[str] = None) -> ModelSpec:
    m = spec.model
    return ModelSpec.from_names(
        m["k_l"],
        m["k_r"],
        psi=m.get("psi", "linear"),
        g=g if g is not None else m.get("g", "linear"),
        rho_max=m.get("rho_max", 1.0),
    )


def build_kernel(spec: ExperimentSpec, eta: Optional[float] = None) -> KernelSpec:
    options = dict(spec.kernel)
    kind = options.pop("kind", "linear-decreasing")
    default_eta = options.pop("eta", None)
    return create_kernel(kind, eta if eta is not None else default_eta, **options)


def cfl_mode_for(options: RunOptions) -> str:
    """The CFL bound a run uses; an entropy sweep needs the bv-strict one."""
    if options.entropy_sweep and options.cfl_mode != "bv-strict":
        logger.warning("Entropy sweep requested with the %s CFL bound, running with bv-strict", options.cfl_mode)
        return "bv-strict"
    return options.cfl_mode


def observers_for(job_mesh, model: ModelSpec, options: RunOptions) -> list:
    observers = []
    if options.check_bounds:
        observers.append(MaxPrincipleObserver(model.rho_max))
    if options.check_conservation:
        observers.append(ConservationObserver(job_mesh))
    if options.entropy_sweep:
        observers.append(EntropyObserver(job_mesh, model, options.entropy_values, cfl_mode=options.cfl_mode))
    return observers


def solve(job: Job, options: RunOptions) -> RunReport:
    """Run one job: the non-local scheme, or the local Godunov oracle."""
    spec = job.spec
    model = build_model(spec, job.g)
    mesh = spec.mesh(job.dx)
    state0 = project_initial_datum(spec.datum(), mesh, model.rho_max)
    t_final = spec.t_final if job.t_final is None else job.t_final
    if job.local:
        observers = observers_for(mesh, model, RunOptions(check_bounds=options.check_bounds))
        return run_godunov(
            state0,
            mesh,
            model,
            t_final,
            observers=observers,
            safety=options.cfl_safety,
            checkpoints=job.checkpoints,
            label=job.key,
        )
    weights = discretize_kernel(build_kernel(spec, job.eta), mesh.dx)
    options = replace(options, cfl_mode=cfl_mode_for(options))
    return run(
        state0,
        mesh,
        model,
        weights,
        t_final,
        observers=observers_for(mesh, model, options),
        cfl_mode=options.cfl_mode,
        safety=options.cfl_safety,
        checkpoints=job.checkpoints,
        label=job.key,
    )


def _solve_packed(args: Tuple[Job, RunOptions]) -> Tuple[str, RunReport]:
    job, options = args
    return job.key, solve(job, options)


def execute(jobs: Sequence[Job], options: RunOptions) -> Dict[str, RunReport]:
    """Run independent jobs, in worker processes when parallelism allows."""
    workers = min(options.parallelism, len(jobs))
    if workers <= 1:
        return dict(_solve_packed((job, options)) for job in jobs)
    logger.info("Running %d jobs on %d workers", len(jobs), workers)
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return dict(pool.map(_solve_packed, [(job, options) for job in jobs]))


def tv_away_from_zero(report: RunReport, gap: float = TV_WINDOW_GAP) -> float:
    """TV over the cells with |x| > gap, each side of the discontinuity on its own."""
    mesh = report.mesh
    lo, hi = mesh.domain
    return total_variation(report.final, mesh, (lo, -gap)) + total_variation(report.final, mesh, (gap, hi))


def _frames(report: RunReport) -> Dict[float, pd.DataFrame]:
    return {t: state.to_frame(report.mesh.centers) for t, state in sorted(report.snapshots.items())}


def _relative(value: float, published: Optional[float]) -> Optional[float]:
    if published is None or published == 0:
        return None
    return abs(value - published) / abs(published)


@dataclass
class Example1Result:
    spec: ExperimentSpec
    table: ErrorTable
    reports: Dict[str, RunReport]
    snapshots: Dict[float, pd.DataFrame] = field(default_factory=dict)
    deviations: Dict[str, Optional[float]] = field(default_factory=dict)
    g_tables: Dict[str, ErrorTable] = field(default_factory=dict)

    def violations(self) -> int:
        return sum(report.violations() for report in self.reports.values())

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": self.spec.id,
            "scale": self.spec.scale,
            "g": self.spec.model.get("g", "linear"),
            "table": self.table.to_dict(),
            "published": self.spec.published.get("errors", {}),
            "relative_deviation": self.deviations,
            "g_comparison": {g: table.to_dict() for g, table in self.g_tables.items()},
            "snapshot_times": sorted(self.snapshots),
            "tv_initial": _tv_initial(self.spec),
            "tv_away_from_zero": {key: tv_away_from_zero(report) for key, report in self.reports.items()},
            "runs": {key: report.summary() for key, report in self.reports.items()},
            "violations": self.violations(),
        }


@dataclass
class Example2Result:
    spec: ExperimentSpec
    distances: pd.DataFrame
    overlays: pd.DataFrame
    reports: Dict[str, RunReport]
    figure: Optional[pd.DataFrame] = None

    def violations(self) -> int:
        return sum(report.violations() for report in self.reports.values())

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": self.spec.id,
            "scale": self.spec.scale,
            "distances": self.distances.to_dict(orient="records"),
            "figure_t_final": self.spec.figure["t_final"] if self.figure is not None else None,
            "runs": {key: report.summary() for key, report in self.reports.items()},
            "violations": self.violations(),
        }


@dataclass
class CustomResult:
    spec: ExperimentSpec
    reports: Dict[str, RunReport]

    def violations(self) -> int:
        return sum(report.violations() for report in self.reports.values())

    def summary(self) -> Dict[str, Any]:
        return {
            "experiment": self.spec.id,
            "scale": self.spec.scale,
            "runs": {key: report.summary() for key, report in self.reports.items()},
            "violations": self.violations(),
        }


ExperimentResult = Union[Example1Result, Example2Result, CustomResult]


def _tv_initial(spec: ExperimentSpec) -> float:
    mesh = spec.mesh(spec.resolutions[0])
    return total_variation(project_initial_datum(spec.datum(), mesh, spec.model.get("rho_max", 1.0)))


def _dx_key(dx: Fraction, g: Optional[str] = None) -> str:
    key = f"dx={format_fraction(dx)}"
    return key if g is None else f"g={g} {key}"


def example1(spec: ExperimentSpec, options: RunOptions = RunOptions()) -> Example1Result:
    """L1 errors and EOA against a fine reference, plus profile snapshots."""
    spec.validate()
    if spec.reference_dx is None:
        raise InvalidArgumentError(f"Experiment '{spec.id}' needs a reference resolution")
    if spec.scale == "desk":
        logger.warning(
            "%s at desk scale: dx in %s against dx_ref=%s",
            spec.id,
            [format_fraction(dx) for dx in spec.resolutions],
            format_fraction(spec.reference_dx),
        )

    profiles: List[Optional[str]] = [None]
    if options.compare_g is not None:
        profiles.append(options.compare_g)

    jobs: List[Job] = []
    snapshot_dx = spec.snapshot_dx if spec.snapshot_dx is not None else spec.resolutions[-1]
    for g in profiles:
        for dx in sorted(set(spec.resolutions) | {spec.reference_dx}, reverse=True):
            checkpoints = tuple(spec.snapshot_times) if dx == snapshot_dx and g is None else ()
            key = _dx_key(dx, g) if dx != spec.reference_dx else f"reference {_dx_key(dx, g)}"
            jobs.append(Job(key=key, spec=spec, dx=dx, checkpoints=checkpoints, g=g))
    if spec.snapshot_times and snapshot_dx not in spec.resolutions and snapshot_dx != spec.reference_dx:
        jobs.append(Job(key=f"snapshots {_dx_key(snapshot_dx)}", spec=spec, dx=snapshot_dx, checkpoints=tuple(spec.snapshot_times)))

    reports = execute(jobs, options)

    tables: Dict[Optional[str], ErrorTable] = {}
    for g in profiles:
        reference = reports[f"reference {_dx_key(spec.reference_dx, g)}"]
        errors = []
        for dx in sorted(spec.resolutions, reverse=True):
            report = reports[_dx_key(dx, g)]
            errors.append((float(dx), l1_error(report.final, reference.final, report.mesh, reference.mesh)))
        tables[g] = error_table(
            errors,
            reference=f"dx_ref={format_fraction(spec.reference_dx)}",
            label=spec.id if g is None else f"{spec.id} g={g}",
        )
    if spec.t_final == 0:
        logger.warning("%s: T = 0, errors are projection differences and the EOA is meaningless", spec.id)

    published = spec.published.get("errors", {})
    deviations: Dict[str, Optional[float]] = {}
    for row in tables[None].rows:
        label = format_fraction(Fraction(row.dx).limit_denominator(10**9))
        deviations[label] = _relative(row.error, published.get(label))
        if deviations[label] is not None and deviations[label] > PUBLISHED_TOLERANCE:
            logger.warning(
                "%s dx=%s: L1 error %.3e deviates %.0f%% from the published %.1e (g=%s)",
                spec.id,
                label,
                row.error,
                100 * deviations[label],
                published[label],
                spec.model.get("g", "linear"),
            )

    snapshot_report = next((reports[job.key] for job in jobs if job.checkpoints), None)
    return Example1Result(
        spec=spec,
        table=tables[None],
        reports=reports,
        snapshots=_frames(snapshot_report) if snapshot_report is not None else {},
        deviations=deviations,
        g_tables={g: table for g, table in tables.items() if g is not None},
    )


def _eta_label(eta: float) -> str:
    return f"{eta:g}"


def example2(spec: ExperimentSpec, options: RunOptions = RunOptions(), figure: bool = True) -> Example2Result:
    """L1 distance between the non-local solutions for each eta and the local Godunov solution."""
    spec.validate()
    if spec.scale == "desk":
        logger.warning(
            "%s at desk scale: dx=%s, eta in %s",
            spec.id,
            format_fraction(spec.resolutions[0]),
            spec.etas,
        )
    dx = spec.resolutions[0]
    jobs = [Job(key=f"eta={_eta_label(eta)} {_dx_key(dx)}", spec=spec, dx=dx, eta=eta) for eta in spec.etas]
    jobs.append(Job(key=f"local {_dx_key(dx)}", spec=spec, dx=dx, local=True))
    with_figure = figure and spec.figure is not None
    if with_figure:
        fig_dx, fig_t = spec.figure["dx"], float(spec.figure["t_final"])
        jobs.extend(
            Job(key=f"figure eta={_eta_label(eta)} {_dx_key(fig_dx)}", spec=spec, dx=fig_dx, eta=eta, t_final=fig_t)
            for eta in spec.etas
        )
        jobs.append(Job(key=f"figure local {_dx_key(fig_dx)}", spec=spec, dx=fig_dx, local=True, t_final=fig_t))

    reports = execute(jobs, options)

    local = reports[f"local {_dx_key(dx)}"]
    published = spec.published.get("distances", {})
    rows = []
    overlay = {"x": local.mesh.centers, "rho_local": local.final.values}
    for eta in spec.etas:
        report = reports[f"eta={_eta_label(eta)} {_dx_key(dx)}"]
        distance = l1_error(report.final, local.final, report.mesh, local.mesh)
        rows.append(
            {
                "case": spec.case,
                "eta": eta,
                "dx": float(dx),
                "l1_distance": distance,
                "published": published.get(_eta_label(eta), np.nan),
            }
        )
        overlay[f"rho_eta_{_eta_label(eta)}"] = report.final.values
    distances = pd.DataFrame(rows, columns=["case", "eta", "dx", "l1_distance", "published"])

    values = distances["l1_distance"].to_numpy()
    if not np.all(np.diff(values) < 0):
        logger.warning("%s: L1 distances %s do not decrease with eta", spec.id, values.tolist())

    figure_frame = None
    if with_figure:
        fig_local = reports[f"figure local {_dx_key(fig_dx)}"]
        data = {"x": fig_local.mesh.centers, "rho_local": fig_local.final.values}
        for eta in spec.etas:
            data[f"rho_eta_{_eta_label(eta)}"] = reports[f"figure eta={_eta_label(eta)} {_dx_key(fig_dx)}"].final.values
        figure_frame = pd.DataFrame(data)

    return Example2Result(
        spec=spec,
        distances=distances,
        overlays=pd.DataFrame(overlay),
        reports=reports,
        figure=figure_frame,
    )


def custom(spec: ExperimentSpec, options: RunOptions = RunOptions()) -> CustomResult:
    """Run the non-local scheme at every requested resolution."""
    spec.validate()
    jobs = [Job(key=_dx_key(dx), spec=spec, dx=dx, checkpoints=tuple(spec.snapshot_times)) for dx in spec.resolutions]
    return CustomResult(spec=spec, reports=execute(jobs, options))


def run_experiment(spec: ExperimentSpec, options: RunOptions = RunOptions()) -> ExperimentResult:
    if spec.example == "example1":
        return example1(spec, options)
    if spec.example == "example2":
        return example2(spec, options)
    return custom(spec, options)


def prepare_output(directory: Union[str, Path]) -> Path:
    """Create the output directory and make sure it is writable before any compute.

    Raises:
        PermissionError: If the directory cannot be written
    """
    path = Path(directory)
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise PermissionError(f"Cannot create output directory {path}: {exc}") from exc
    if not os.access(path, os.W_OK):
        raise PermissionError(f"Output directory {path} is not writable")
    return path


def _write_frame(frame: pd.DataFrame, path: Path, written: List[Path]) -> None:
    frame.to_csv(path, index=False, float_format=FLOAT_FORMAT)
    written.append(path)
    logger.info("Wrote %s", path)


def _file_label(dx: Fraction) -> str:
    return format_fraction(dx).replace("/", "-")


def write_artifacts(results: Iterable[ExperimentResult], directory: Union[str, Path]) -> List[Path]:
    """Write tables, snapshots, overlays and ``summary.json``; returns the written paths."""
    out = prepare_output(directory)
    results = list(results)
    written: List[Path] = []
    distance_frames = []

    for result in results:
        spec = result.spec
        if isinstance(result, Example1Result):
            _write_frame(result.table.to_frame(), out / f"table1_case{spec.case}.csv", written)
            for g, table in result.g_tables.items():
                _write_frame(table.to_frame(), out / f"table1_case{spec.case}_g-{g}.csv", written)
            for t, frame in result.snapshots.items():
                _write_frame(frame, out / f"snapshots_example1_case{spec.case}_t{t:g}.csv", written)
        elif isinstance(result, Example2Result):
            distance_frames.append(result.distances)
            _write_frame(result.overlays, out / f"snapshots_example2_case{spec.case}_t{spec.t_final:g}.csv", written)
            if result.figure is not None:
                t = float(spec.figure["t_final"])
                _write_frame(result.figure, out / f"snapshots_example2_case{spec.case}_figure_t{t:g}.csv", written)
        else:
            for key, report in result.reports.items():
                dx = Fraction(report.mesh.dx).limit_denominator(10**9)
                _write_frame(report.final.to_frame(report.mesh.centers), out / f"snapshots_{spec.id}_dx{_file_label(dx)}.csv", written)
                report.to_csv(out / f"series_{spec.id}_dx{_file_label(dx)}.csv")
                written.append(out / f"series_{spec.id}_dx{_file_label(dx)}.csv")

    if distance_frames:
        table2 = pd.concat(distance_frames, ignore_index=True).sort_values(["case", "eta"], ascending=[True, False])
        _write_frame(table2, out / "table2.csv", written)

    summary_path = out / "summary.json"
    payload = {"experiments": [result.summary() for result in results]}
    summary_path.write_text(json.dumps(payload, sort_keys=True, indent=2, default=_json_default) + "\n", encoding="utf-8")
    written.append(summary_path)
    logger.info("Wrote %s", summary_path)
    return written


def _json_default(value: Any) -> Any:
    if isinstance(value, (np.floating, np.integer)):
        return value.item()
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, Fraction):
        return format_fraction(value)
    raise TypeError(f"Not JSON serializable: {type(value).__name__}")


def validate_run(
    spec: ExperimentSpec,
    dx: Fraction,
    options: RunOptions = RunOptions(),
    t_final: Optional[float] = None,
) -> RunReport:
    """One non-local run at ``dx`` with the checks selected in ``options``."""
    spec.validate()
    job = Job(key=f"validate {spec.id} {_dx_key(dx)}", spec=spec, dx=dx, t_final=t_final)
    return solve(job, options)
