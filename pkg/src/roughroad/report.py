"""Run and error-table containers with their CSV / JSON serialization."""

import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Tuple, Union

import numpy as np
import pandas as pd

from .mesh import Mesh
from .state import State

FLOAT_FORMAT = "%.7e"

SERIES_COLUMNS = (
    "step",
    "time",
    "dt",
    "mass",
    "min",
    "max",
    "tv",
    "time_variation",
    "inflow",
    "outflow",
    "flux_left_of_zero",
    "flux_right_of_zero",
)


def _finite(value: float) -> Optional[float]:
    return None if value is None or not math.isfinite(value) else float(value)


@dataclass
class RunReport:
    """Per-step diagnostics of one run plus the final state.

    ``series`` has one row per time level, the initial one included, so its
    length is the number of steps + 1.
    """

    series: pd.DataFrame
    final: State
    mesh: Mesh
    dt: float
    snapshots: Dict[float, State] = field(default_factory=dict)
    observers: Dict[str, Dict[str, Any]] = field(default_factory=dict)
    label: str = ""

    @property
    def n_steps(self) -> int:
        return len(self.series) - 1

    def boundary_throughput(self) -> Tuple[float, float]:
        """Time integrals of the inflow and outflow boundary fluxes."""
        steps = self.series.iloc[1:]
        return float((steps["dt"] * steps["inflow"]).sum()), float((steps["dt"] * steps["outflow"]).sum())

    def mass_balance_defect(self) -> float:
        """Relative mismatch between the mass change and the net boundary throughput."""
        if self.n_steps == 0:
            return 0.0
        inflow, outflow = self.boundary_throughput()
        mass = self.series["mass"]
        change = float(mass.iloc[-1] - mass.iloc[0])
        scale = max(float(mass.abs().max()), 1e-300)
        return abs(change - (inflow - outflow)) / scale

    def stationary_flux_drift(self, fraction: float = 0.1) -> float:
        """Largest relative change of the fluxes next to x = 0 over the last steps."""
        if self.n_steps == 0:
            return 0.0
        count = max(2, int(math.ceil(fraction * self.n_steps)))
        tail = self.series.iloc[1:].tail(count)
        drift = 0.0
        for column in ("flux_left_of_zero", "flux_right_of_zero"):
            values = tail[column].to_numpy()
            scale = max(abs(values[-1]), 1e-300)
            drift = max(drift, float(np.max(np.abs(values - values[-1]))) / scale)
        return drift

    def violations(self) -> int:
        return int(sum(summary.get("violations", 0) for summary in self.observers.values()))

    def summary(self) -> Dict[str, Any]:
        """JSON-ready digest of the run."""
        inflow, outflow = self.boundary_throughput()
        return {
            "label": self.label,
            "mesh": self.mesh.to_dict(),
            "dt": self.dt,
            "n_steps": self.n_steps,
            "t_final": self.final.time,
            "mass_initial": float(self.series["mass"].iloc[0]),
            "mass_final": float(self.series["mass"].iloc[-1]),
            "inflow": inflow,
            "outflow": outflow,
            "mass_balance_defect": self.mass_balance_defect(),
            "min": float(self.series["min"].min()),
            "max": float(self.series["max"].max()),
            "tv_final": float(self.series["tv"].iloc[-1]),
            "stationary_flux_drift": _finite(self.stationary_flux_drift()),
            "observers": self.observers,
            "violations": self.violations(),
        }

    def to_frame(self) -> pd.DataFrame:
        return self.series.copy()

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.series.to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path


@dataclass(frozen=True)
class ErrorRow:
    dx: float
    error: float
    eoa: Optional[float] = None


@dataclass
class ErrorTable:
    """L1 errors against a reference, coarsest resolution first."""

    rows: List[ErrorRow]
    reference: str
    label: str = ""

    def __post_init__(self):
        dxs = [row.dx for row in self.rows]
        if any(a <= b for a, b in zip(dxs, dxs[1:])):
            raise ValueError("Error table rows must have strictly decreasing dx")

    @property
    def errors(self) -> List[float]:
        return [row.error for row in self.rows]

    @property
    def orders(self) -> List[Optional[float]]:
        return [row.eoa for row in self.rows]

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {
                "dx": [row.dx for row in self.rows],
                "l1_error": [row.error for row in self.rows],
                "eoa": [np.nan if row.eoa is None else row.eoa for row in self.rows],
            }
        )

    def to_csv(self, path: Union[str, Path]) -> Path:
        path = Path(path)
        self.to_frame().to_csv(path, index=False, float_format=FLOAT_FORMAT)
        return path

    def to_dict(self) -> Dict[str, Any]:
        return {
            "label": self.label,
            "reference": self.reference,
            "rows": [{"dx": row.dx, "l1_error": row.error, "eoa": row.eoa} for row in self.rows],
        }
