from dataclasses import dataclass
from typing import Any, Dict

import numpy as np
import pandas as pd


@dataclass(frozen=True)
class State:
    """Cell densities at one time level.

    ``values[i]`` holds rho_j for j = i - n_left of the mesh the state lives
    on. The array is stored read-only so observers cannot alter it.
    """

    values: np.ndarray
    time: float = 0.0
    ghost_policy: str = "absorbing"

    def __post_init__(self):
        values = np.array(self.values, dtype=np.float64)
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        if self.ghost_policy != "absorbing":
            raise ValueError(f"Unsupported ghost policy: {self.ghost_policy}")

    def __len__(self) -> int:
        return self.values.shape[0]

    def evolve(self, values: np.ndarray, time: float) -> "State":
        """Return a new state with the same ghost policy."""
        return State(values=values, time=time, ghost_policy=self.ghost_policy)

    def min(self) -> float:
        return float(self.values.min())

    def max(self) -> float:
        return float(self.values.max())

    def to_frame(self, centers: np.ndarray) -> pd.DataFrame:
        """Plot-ready table with columns ``x`` and ``rho``."""
        return pd.DataFrame({"x": centers, "rho": self.values})

    def to_dict(self) -> Dict[str, Any]:
        return {
            "values": self.values.tolist(),
            "time": self.time,
            "ghost_policy": self.ghost_policy,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "State":
        return cls(
            values=np.asarray(data["values"], dtype=np.float64),
            time=data.get("time", 0.0),
            ghost_policy=data.get("ghost_policy", "absorbing"),
        )
