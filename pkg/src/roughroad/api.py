import logging
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from .experiments import (
    ExperimentSpec,
    RunOptions,
    get_default_experiment_manager,
    run_experiment,
    write_artifacts,
)
from .kernels import kernel_registry
from .profiles import get_default_profile_manager

logger = logging.getLogger(__name__)


class RoughRoad:
    """Main interface for the roughroad package."""

    def __init__(self):
        """Initialize RoughRoad with default managers."""
        self.experiment_manager = get_default_experiment_manager()
        self.profile_manager = get_default_profile_manager()
        self.current_experiment: Optional[ExperimentSpec] = None
        self.scale = "full"

    def load(self, item_type: str) -> List[Dict[str, str]]:
        """Load experiments, profiles or kernels.

        Args:
            item_type: Type of items to load ("experiments", "profiles" or "kernels")

        Returns:
            List of items with their id, name, and description
        """
        if item_type.lower() == "experiments":
            return [
                {"id": e.id, "name": e.title, "description": e.description}
                for e in self.experiment_manager.list_experiments()
            ]

        elif item_type.lower() == "profiles":
            return [
                {"id": p.id, "name": p.name, "description": p.description}
                for p in self.profile_manager.list_profiles()
            ]

        elif item_type.lower() == "kernels":
            return [
                {"id": kind, "name": cls.__name__, "description": (cls.__doc__ or "").strip().splitlines()[0]}
                for kind, cls in ((k, kernel_registry.get_kernel_class(k)) for k in kernel_registry.list_available_kernels())
            ]

        else:
            raise ValueError(f"Invalid item type: {item_type}. Choose from: experiments, profiles, kernels")

    def select_experiment(self, name: str, case: Optional[str] = None, scale: str = "full") -> ExperimentSpec:
        """Select an experiment by id, or by example name and case."""
        self.current_experiment = self.experiment_manager.resolve(name, case).scaled(scale)
        self.scale = scale
        return self.current_experiment

    def run(
        self,
        options: Optional[RunOptions] = None,
        out: Optional[Union[str, Path]] = None,
        **overrides: Any,
    ):
        """Run the selected experiment; artifacts are written when ``out`` is given.

        Raises:
            ValueError: If no experiment is selected
        """
        if self.current_experiment is None:
            raise ValueError("No experiment selected. Call select_experiment() first.")
        spec = self.current_experiment.with_overrides(**overrides) if overrides else self.current_experiment
        result = run_experiment(spec, options or RunOptions())
        if out is not None:
            write_artifacts([result], out)
        return result
