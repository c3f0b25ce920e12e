from typing import Dict, List, Optional

from .experiment import ExperimentSpec

CASE_IDS = {"I": "case1", "II": "case2", "1": "case1", "2": "case2"}


class ExperimentManager:
    """Manager for experiment operations."""

    def __init__(self):
        """Initialize experiment manager."""
        self.experiments: Dict[str, ExperimentSpec] = {}

    def add_experiment(self, experiment: ExperimentSpec) -> None:
        """Add an experiment to the manager."""
        if experiment.id in self.experiments:
            raise ValueError(f"Experiment with ID '{experiment.id}' already exists")

        self.experiments[experiment.id] = experiment

    def get_experiment(self, experiment_id: str) -> Optional[ExperimentSpec]:
        """Get an experiment by ID."""
        return self.experiments.get(experiment_id)

    def list_experiments(self, example: Optional[str] = None) -> List[ExperimentSpec]:
        """List experiments, optionally filtered by example."""
        results = list(self.experiments.values())

        if example:
            results = [e for e in results if e.example == example]

        return results

    def resolve(self, name: str, case: Optional[str] = None) -> ExperimentSpec:
        """Find an experiment from ``example1`` + ``I`` or a full id such as ``example2-case2``."""
        experiment = self.get_experiment(name)
        if experiment is None and case is not None:
            suffix = CASE_IDS.get(str(case).upper())
            if suffix is not None:
                experiment = self.get_experiment(f"{name}-{suffix}")
        if experiment is None:
            known = ", ".join(sorted(self.experiments))
            raise ValueError(f"Experiment not found: {name} (case {case}). Choose from: {known}")
        return experiment

    def load_default_experiments(self) -> None:
        """Load the default experiments."""
        from .default_experiments import DEFAULT_EXPERIMENTS

        for experiment_data in DEFAULT_EXPERIMENTS:
            try:
                self.add_experiment(ExperimentSpec.from_dict(experiment_data))
            except ValueError:
                # Skip if experiment with same ID already exists
                pass
