from .errors import (
    CFLViolationError,
    ConfigError,
    DegenerateModelError,
    DivisibilityError,
    DomainError,
    InternalConsistencyError,
    InvalidArgumentError,
    ProfileError,
    RoughRoadError,
    StepError,
    UndefinedSideError,
)
from .state import State
from .mesh import Mesh, PiecewiseConstant, TimeGrid, build_mesh, build_time_grid, mesh_for_domain, project_initial_datum
from .profiles import Profile, ProfileManager, get_default_profile_manager
from .kernels import KernelSpec, KernelWeights, convolve, convolve_all, create_kernel, discretize_kernel
from .model import FluxSide, ModelSpec, cfl_dt, velocity
from .numerics import LocalFluxPair, run, run_godunov, step
from .diagnostics import entropy_residual, eoa, l1_error, total_variation
from .report import ErrorTable, RunReport
from .experiments import ExperimentSpec, RunOptions, get_default_experiment_manager
from .api import RoughRoad

# Create a singleton instance for easy access
rr = RoughRoad()

# Export main classes
__all__ = [
    "RoughRoad",
    "rr",
    "State",
    "Mesh",
    "TimeGrid",
    "PiecewiseConstant",
    "build_mesh",
    "build_time_grid",
    "mesh_for_domain",
    "project_initial_datum",
    "Profile",
    "ProfileManager",
    "get_default_profile_manager",
    "KernelSpec",
    "KernelWeights",
    "create_kernel",
    "discretize_kernel",
    "convolve",
    "convolve_all",
    "FluxSide",
    "ModelSpec",
    "velocity",
    "cfl_dt",
    "step",
    "run",
    "run_godunov",
    "LocalFluxPair",
    "l1_error",
    "eoa",
    "total_variation",
    "entropy_residual",
    "ErrorTable",
    "RunReport",
    "ExperimentSpec",
    "RunOptions",
    "get_default_experiment_manager",
    "RoughRoadError",
    "InvalidArgumentError",
    "DomainError",
    "DivisibilityError",
    "DegenerateModelError",
    "UndefinedSideError",
    "ProfileError",
    "CFLViolationError",
    "InternalConsistencyError",
    "StepError",
    "ConfigError",
]
