from typing import Any, Dict, List

import numpy as np
from numpy.polynomial import Polynomial

SAMPLES = 10_000
SAMPLING_MARGIN = 1.01


class Profile:
    """A polynomial profile used for the speed law psi or the slowdown factor g.

    Coefficients are given in the scaled variable s = rho / rho_max, lowest
    degree first, so ``[1, -1]`` is ``1 - rho / rho_max`` whatever rho_max is.
    """

    def __init__(self, id, name, coefficients, description="", builtin=True, aliases=None):
        self.id = id
        self.name = name
        self.coefficients = tuple(float(c) for c in coefficients)
        self.description = description
        self.builtin = builtin
        self.aliases = tuple(aliases or ())
        if not self.coefficients:
            raise ValueError(f"Profile '{id}' needs at least one coefficient")

    def bind(self, rho_max: float = 1.0) -> "BoundProfile":
        """Return the profile as a function of rho on [0, rho_max]."""
        scaled = Polynomial(self.coefficients)
        poly = Polynomial([c / rho_max ** k for k, c in enumerate(scaled.coef)])
        return BoundProfile(poly=poly, rho_max=rho_max, builtin=self.builtin, label=self.id)

    def to_dict(self):
        """Convert profile to dictionary."""
        return {
            "id": self.id,
            "name": self.name,
            "coefficients": list(self.coefficients),
            "description": self.description,
            "builtin": self.builtin,
            "aliases": list(self.aliases),
        }

    @classmethod
    def from_dict(cls, data):
        """Create a profile from a dictionary."""
        return cls(
            id=data.get("id"),
            name=data.get("name", data.get("id")),
            coefficients=data.get("coefficients", ()),
            description=data.get("description", ""),
            builtin=data.get("builtin", True),
            aliases=data.get("aliases", ()),
        )

    def __repr__(self):
        return f"Profile({self.id!r}, {list(self.coefficients)})"


class BoundProfile:
    """Profile evaluated in rho, with the sup-norms the CFL conditions need."""

    def __init__(self, poly: Polynomial, rho_max: float, builtin: bool = True, label: str = "custom"):
        self.poly = poly
        self.dpoly = poly.deriv()
        self.rho_max = rho_max
        self.builtin = builtin
        self.label = label

    def __call__(self, rho):
        return self.poly(rho)

    def derivative(self, rho):
        return self.dpoly(rho)

    def sup_norm(self) -> float:
        """||p|| on [0, rho_max]."""
        return self._sup(self.poly)

    def derivative_sup_norm(self) -> float:
        """||p'|| on [0, rho_max]."""
        return self._sup(self.dpoly)

    def is_non_increasing(self, tol: float = 1e-12) -> bool:
        return bool(np.all(self.dpoly(self.grid()) <= tol))

    def grid(self, n: int = SAMPLES) -> np.ndarray:
        return np.linspace(0.0, self.rho_max, n)

    def _sup(self, poly: Polynomial) -> float:
        if self.builtin:
            # Extrema sit at the interval ends or at real critical points inside it.
            candidates: List[float] = [0.0, self.rho_max]
            if poly.degree() >= 2:
                roots = poly.deriv().roots()
                real = roots[np.abs(roots.imag) < 1e-12].real
                candidates.extend(r for r in real if 0.0 < r < self.rho_max)
            return float(np.max(np.abs(poly(np.asarray(candidates)))))
        return float(np.max(np.abs(poly(self.grid())))) * SAMPLING_MARGIN

    def to_dict(self) -> Dict[str, Any]:
        return {"label": self.label, "coefficients": self.poly.coef.tolist(), "rho_max": self.rho_max}
