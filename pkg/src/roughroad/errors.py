"""Exceptions raised by the roughroad package."""

from typing import Optional


class RoughRoadError(Exception):
    """Base class for all roughroad errors."""


class InvalidArgumentError(RoughRoadError, ValueError):
    """An argument is outside its admissible range (dx <= 0, zero counts, ...)."""


class DomainError(RoughRoadError, ValueError):
    """A density lies outside [0, rho_max]."""


class DivisibilityError(RoughRoadError, ValueError):
    """A length ratio that must be an integer is not.

    Args:
        message: Human readable description
        nearest: Nearest admissible value (e.g. the closest dx dividing eta)
    """

    def __init__(self, message: str, nearest: Optional[float] = None):
        if nearest is not None:
            message = f"{message} (nearest admissible value: {nearest:.12g})"
        super().__init__(message)
        self.nearest = nearest


class DegenerateModelError(RoughRoadError, ValueError):
    """The model makes every CFL denominator vanish."""


class UndefinedSideError(RoughRoadError, ValueError):
    """The flux side was requested exactly at the discontinuity x = 0."""


class ProfileError(RoughRoadError, ValueError):
    """A profile, kernel or local flux violates its structural hypotheses."""


class CFLViolationError(RoughRoadError, ValueError):
    """The time step exceeds the CFL bound."""


class InternalConsistencyError(RoughRoadError, RuntimeError):
    """An invariant that the scheme guarantees was broken (flux or CFL bug).

    Args:
        message: Human readable description
        cell: Mesh index j of the offending cell, when one is known
    """

    def __init__(self, message: str, cell: Optional[int] = None):
        super().__init__(message)
        self.cell = cell


class StepError(RoughRoadError, RuntimeError):
    """A time step failed.

    Carries the step index, the underlying error and, when the cause names
    one, the mesh index of the offending cell.
    """

    def __init__(self, step: int, cause: Exception, cell: Optional[int] = None):
        if cell is None:
            cell = getattr(cause, "cell", None)
        where = f" at cell {cell}" if cell is not None else ""
        super().__init__(f"step {step} failed{where}: {cause}")
        self.step = step
        self.cause = cause
        self.cell = cell


class ConfigError(RoughRoadError, ValueError):
    """A configuration file could not be parsed or validated."""
