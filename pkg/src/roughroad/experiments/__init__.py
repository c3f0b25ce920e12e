from .experiment import EXAMPLES, ExperimentSpec
from .experiment_manager import ExperimentManager
from .default_experiments import DEFAULT_EXPERIMENTS
from .runner import (
    CustomResult,
    Example1Result,
    Example2Result,
    RunOptions,
    build_kernel,
    build_model,
    custom,
    example1,
    example2,
    prepare_output,
    run_experiment,
    validate_run,
    write_artifacts,
)


def get_default_experiment_manager() -> ExperimentManager:
    """Get an experiment manager pre-loaded with the shipped experiments."""
    manager = ExperimentManager()
    manager.load_default_experiments()
    return manager
