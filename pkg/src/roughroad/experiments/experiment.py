import copy
from fractions import Fraction
from typing import Any, Dict, List, Optional, Tuple

from ..errors import DivisibilityError, InvalidArgumentError
from ..mesh import Mesh, PiecewiseConstant, mesh_for_domain
from ..utils.config import format_fraction, parse_fraction

EXAMPLES = ("example1", "example2", "custom")


class ExperimentSpec:
    """One configured study: model, kernel, datum, road and resolutions."""

    def __init__(
        self,
        id,
        title,
        example,
        case=None,
        model=None,
        kernel=None,
        initial=None,
        domain=(-3.0, 5.0),
        t_final=2.0,
        resolutions=(),
        reference_dx=None,
        etas=(),
        snapshot_times=(),
        snapshot_dx=None,
        figure=None,
        published=None,
        desk=None,
        description="",
        scale="full",
    ):
        if example not in EXAMPLES:
            raise InvalidArgumentError(f"Unknown example '{example}', choose from {EXAMPLES}")
        self.id = id
        self.title = title
        self.example = example
        self.case = case
        self.model = dict(model or {})
        self.kernel = dict(kernel or {"kind": "linear-decreasing", "eta": 0.4})
        self.initial = dict(initial or {"breakpoints": [], "values": [0.0]})
        self.domain: Tuple[float, float] = (float(domain[0]), float(domain[1]))
        self.t_final = float(t_final)
        self.resolutions: List[Fraction] = [parse_fraction(dx) for dx in resolutions]
        self.reference_dx: Optional[Fraction] = parse_fraction(reference_dx) if reference_dx is not None else None
        self.etas = [float(eta) for eta in etas]
        self.snapshot_times = [float(t) for t in snapshot_times]
        self.snapshot_dx: Optional[Fraction] = parse_fraction(snapshot_dx) if snapshot_dx is not None else None
        self.figure = dict(figure) if figure else None
        if self.figure is not None:
            self.figure["dx"] = parse_fraction(self.figure["dx"])
        self.published = dict(published or {})
        self.desk = dict(desk or {})
        self.description = description
        self.scale = scale

    @property
    def case_label(self) -> str:
        return f"case{self.case}" if self.case else self.id

    def kernel_etas(self) -> List[float]:
        """Supports to run: the eta sweep of example2, otherwise the single kernel support."""
        return list(self.etas) if self.example == "example2" else [float(self.kernel["eta"])]

    def datum(self) -> PiecewiseConstant:
        return PiecewiseConstant(tuple(self.initial.get("breakpoints", ())), tuple(self.initial["values"]))

    def mesh(self, dx) -> Mesh:
        return mesh_for_domain(float(dx), *self.domain)

    def all_resolutions(self) -> List[Fraction]:
        extra = [self.reference_dx, self.snapshot_dx]
        if self.figure is not None:
            extra.append(self.figure["dx"])
        return self.resolutions + [dx for dx in extra if dx is not None]

    def validate(self) -> None:
        """Check every admissibility condition before anything runs.

        Raises:
            DivisibilityError: If an eta is not a multiple of a dx, or a dx not
                a multiple of the reference dx
            InvalidArgumentError: On a negative final time or an empty sweep
        """
        if self.t_final < 0:
            raise InvalidArgumentError(f"Final time must be non-negative, got {self.t_final}")
        if not self.resolutions:
            raise InvalidArgumentError(f"Experiment '{self.id}' has no resolutions")
        if self.example == "example2" and not self.etas:
            raise InvalidArgumentError(f"Experiment '{self.id}' has no eta values")
        for dx in self.all_resolutions():
            if dx <= 0:
                raise InvalidArgumentError(f"dx must be positive, got {format_fraction(dx)}")
            for eta in self.kernel_etas():
                _check_multiple(Fraction(str(eta)), dx, "eta", "dx")
        if self.reference_dx is not None:
            for dx in self.resolutions:
                if dx < self.reference_dx:
                    raise InvalidArgumentError(
                        f"dx={format_fraction(dx)} is finer than the reference {format_fraction(self.reference_dx)}"
                    )
                _check_multiple(dx, self.reference_dx, "dx", "dx_ref")

    def scaled(self, scale: str) -> "ExperimentSpec":
        """The same experiment at ``full`` or ``desk`` scale."""
        if scale not in ("full", "desk"):
            raise InvalidArgumentError(f"Unknown scale '{scale}'")
        if scale == "full" or not self.desk:
            return self.with_overrides(scale=scale)
        return self.with_overrides(scale=scale, **copy.deepcopy(self.desk))

    def with_overrides(self, **changes) -> "ExperimentSpec":
        data = self.to_dict()
        data.update(changes)
        return ExperimentSpec.from_dict(data)

    def to_dict(self) -> Dict[str, Any]:
        """Convert the experiment to a JSON-ready dictionary (dx as ``"p/q"``)."""
        figure = None
        if self.figure is not None:
            figure = {**self.figure, "dx": format_fraction(self.figure["dx"])}
        return {
            "id": self.id,
            "title": self.title,
            "example": self.example,
            "case": self.case,
            "model": dict(self.model),
            "kernel": dict(self.kernel),
            "initial": dict(self.initial),
            "domain": list(self.domain),
            "t_final": self.t_final,
            "resolutions": [format_fraction(dx) for dx in self.resolutions],
            "reference_dx": format_fraction(self.reference_dx) if self.reference_dx is not None else None,
            "etas": list(self.etas),
            "snapshot_times": list(self.snapshot_times),
            "snapshot_dx": format_fraction(self.snapshot_dx) if self.snapshot_dx is not None else None,
            "figure": figure,
            "published": dict(self.published),
            "desk": copy.deepcopy(self.desk),
            "description": self.description,
            "scale": self.scale,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentSpec":
        """Create an experiment from a dictionary."""
        return cls(
            id=data.get("id"),
            title=data.get("title", data.get("id")),
            example=data.get("example", "custom"),
            case=data.get("case"),
            model=data.get("model"),
            kernel=data.get("kernel"),
            initial=data.get("initial"),
            domain=data.get("domain", (-3.0, 5.0)),
            t_final=data.get("t_final", 2.0),
            resolutions=data.get("resolutions", ()),
            reference_dx=data.get("reference_dx"),
            etas=data.get("etas", ()),
            snapshot_times=data.get("snapshot_times", ()),
            snapshot_dx=data.get("snapshot_dx"),
            figure=data.get("figure"),
            published=data.get("published"),
            desk=data.get("desk"),
            description=data.get("description", ""),
            scale=data.get("scale", "full"),
        )

    def __repr__(self):
        return f"ExperimentSpec({self.id!r}, scale={self.scale!r})"


def _check_multiple(length: Fraction, unit: Fraction, length_name: str, unit_name: str) -> None:
    """Raise unless length = N unit; the suggestion adjusts whichever of the two is a dx."""
    ratio = length / unit
    if ratio.denominator != 1 or ratio < 1:
        steps = max(1, round(ratio))
        nearest = length / steps if unit_name == "dx" else unit * steps
        raise DivisibilityError(
            f"{length_name}={format_fraction(length)} is not a multiple of {unit_name}={format_fraction(unit)}",
            nearest=float(nearest),
        )
