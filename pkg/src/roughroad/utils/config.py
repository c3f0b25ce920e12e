"""Run configuration: a strict pydantic schema fed from YAML files and CLI flags.

Precedence is defaults < experiment defaults < config file < explicit flags.
Cell widths are kept as ``fractions.Fraction`` so that divisibility by the
kernel support is decided exactly; they serialize back to ``"p/q"`` strings.
"""

import logging
from fractions import Fraction
from pathlib import Path
from typing import Annotated, Any, Dict, List, Literal, Optional, Union

from pydantic import BaseModel, BeforeValidator, ConfigDict, Field, PlainSerializer, ValidationError

from ..errors import ConfigError

logger = logging.getLogger(__name__)


def parse_fraction(value: Any) -> Fraction:
    """Read ``"1/320"``, ``0.025``, ``"0.025"`` or a Fraction as an exact rational.

    Floats go through their shortest repr so that 0.1 becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError(f"Not a length: {value!r}")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(repr(value))
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"Not a rational length: {value!r}") from exc
    raise ValueError(f"Not a length: {value!r}")


def format_fraction(value: Fraction) -> str:
    return f"{value.numerator}/{value.denominator}" if value.denominator != 1 else str(value.numerator)


Rational = Annotated[
    Fraction,
    BeforeValidator(parse_fraction),
    PlainSerializer(format_fraction, return_type=str),
]
ProfileValue = Union[str, List[float]]


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid", arbitrary_types_allowed=True)


class ExperimentSection(StrictModel):
    name: str = "example1"
    case: Optional[Literal["I", "II"]] = "I"


class ModelSection(StrictModel):
    k_l: Optional[float] = Field(default=None, gt=0)
    k_r: Optional[float] = Field(default=None, gt=0)
    psi: Optional[ProfileValue] = None
    g: Optional[ProfileValue] = None
    rho_max: Optional[float] = Field(default=None, gt=0)


class KernelSection(StrictModel):
    kind: Optional[str] = None
    eta: Optional[float] = Field(default=None, gt=0)
    coefficients: Optional[List[float]] = None


class MeshSection(StrictModel):
    dx: Optional[List[Rational]] = None
    reference_dx: Optional[Rational] = None
    x_min: Optional[float] = Field(default=None, lt=0)
    x_max: Optional[float] = Field(default=None, gt=0)


class InitialSection(StrictModel):
    breakpoints: List[float] = Field(default_factory=list)
    values: List[float]


class CFLSection(StrictModel):
    mode: Literal["basic", "bv-strict"] = "basic"
    safety: float = Field(default=0.9, gt=0, le=1)


class ObserverSection(StrictModel):
    entropy_sweep: bool = False
    entropy_values: Optional[List[float]] = None


class OutputSection(StrictModel):
    directory: Path = Path("results")


class RunConfig(StrictModel):
    """Everything one ``roughroad run`` needs."""

    experiment: ExperimentSection = Field(default_factory=ExperimentSection)
    model: ModelSection = Field(default_factory=ModelSection)
    kernel: KernelSection = Field(default_factory=KernelSection)
    mesh: MeshSection = Field(default_factory=MeshSection)
    initial: Optional[InitialSection] = None
    t_final: Optional[float] = Field(default=None, ge=0)
    snapshot_times: Optional[List[float]] = None
    etas: Optional[List[float]] = None
    cfl: CFLSection = Field(default_factory=CFLSection)
    observers: ObserverSection = Field(default_factory=ObserverSection)
    output: OutputSection = Field(default_factory=OutputSection)
    parallelism: int = Field(default=1, ge=1)
    scale: Literal["full", "desk"] = "full"
    compare_g: Optional[str] = None

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json", exclude_none=True)

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "RunConfig":
        """Validate a nested mapping.

        Raises:
            ConfigError: Naming the offending key and the violated constraint
        """
        try:
            return cls.model_validate(data or {})
        except ValidationError as exc:
            raise ConfigError(_describe(exc)) from exc

    def with_overrides(self, overrides: Dict[str, Any]) -> "RunConfig":
        """Apply dotted-key overrides (``{"model.k_l": 3}``); ``None`` values are ignored."""
        data = self.to_dict()
        for key, value in overrides.items():
            if value is None:
                continue
            node = data
            *parents, leaf = key.split(".")
            for parent in parents:
                node = node.setdefault(parent, {})
            node[leaf] = value
        return RunConfig.from_dict(data)

    def experiment_spec(self, manager=None):
        """The selected experiment with scale and every override applied.

        Raises:
            DivisibilityError: If a kernel support or refinement ratio is not integral
        """
        from ..experiments import get_default_experiment_manager

        manager = manager or get_default_experiment_manager()
        spec = manager.resolve(self.experiment.name, self.experiment.case).scaled(self.scale)

        changes: Dict[str, Any] = {}
        model = {k: v for k, v in self.model.model_dump().items() if v is not None}
        if model:
            changes["model"] = {**spec.model, **model}
        kernel = {k: v for k, v in self.kernel.model_dump().items() if v is not None}
        if kernel:
            changes["kernel"] = {**spec.kernel, **kernel}
        if self.mesh.dx is not None:
            changes["resolutions"] = list(self.mesh.dx)
        if self.mesh.reference_dx is not None:
            changes["reference_dx"] = self.mesh.reference_dx
        if self.mesh.x_min is not None or self.mesh.x_max is not None:
            x_min, x_max = spec.domain
            changes["domain"] = (
                self.mesh.x_min if self.mesh.x_min is not None else x_min,
                self.mesh.x_max if self.mesh.x_max is not None else x_max,
            )
        if self.initial is not None:
            changes["initial"] = self.initial.model_dump()
        if self.t_final is not None:
            changes["t_final"] = self.t_final
        if self.snapshot_times is not None:
            changes["snapshot_times"] = list(self.snapshot_times)
        if self.etas is not None:
            changes["etas"] = list(self.etas)

        spec = spec.with_overrides(**changes)
        spec.validate()
        return spec


def _describe(exc: ValidationError) -> str:
    issues = []
    for error in exc.errors():
        location = ".".join(str(part) for part in error["loc"]) or "<root>"
        issues.append(f"{location}: {error['msg']}")
    return "Invalid configuration: " + "; ".join(issues)


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    """Read a YAML file into a mapping.

    Raises:
        ConfigError: With line and column for malformed YAML
    """
    from ruamel.yaml import YAML
    from ruamel.yaml.error import YAMLError

    yaml = YAML(typ="safe")
    source = Path(path)
    try:
        with source.open("r", encoding="utf-8") as fh:
            data = yaml.load(fh)
    except OSError as exc:
        raise ConfigError(f"Cannot read configuration {source}: {exc}") from exc
    except YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{source}:{mark.line + 1}:{mark.column + 1}" if mark is not None else str(source)
        problem = getattr(exc, "problem", None) or str(exc)
        raise ConfigError(f"{where}: {problem}") from exc
    if data is None:
        return {}
    if not isinstance(data, dict):
        raise ConfigError(f"{source}: the top level must be a mapping")
    return data


def parse_config(
    path: Optional[Union[str, Path]] = None,
    overrides: Optional[Dict[str, Any]] = None,
) -> RunConfig:
    """Load, validate and check a configuration; explicit overrides win over the file.

    Raises:
        ConfigError: On parse or schema errors
        DivisibilityError: If the selected resolutions do not divide the kernel support
    """
    data = load_config(path) if path is not None else {}
    config = RunConfig.from_dict(data)
    if overrides:
        config = config.with_overrides(overrides)
    from ..experiments import build_model

    try:
        build_model(config.experiment_spec())
    except ValueError as exc:
        if isinstance(exc, ConfigError):
            raise
        # Divisibility, range and profile errors keep their type; unknown names are config errors.
        if type(exc) is ValueError:
            raise ConfigError(str(exc)) from exc
        raise
    logger.debug("Parsed configuration: %s", config.to_dict())
    return config
