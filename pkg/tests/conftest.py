import pytest

from roughroad.kernels import create_kernel, discretize_kernel
from roughroad.mesh import PiecewiseConstant, mesh_for_domain, project_initial_datum
from roughroad.model import ModelSpec


@pytest.fixture
def case1_model():
    """Fast road followed by a slow one."""
    return ModelSpec.from_names(3.0, 1.0, psi="1-rho", g="1-rho")


@pytest.fixture
def case2_model():
    return ModelSpec.from_names(1.0, 3.0, psi="1-rho", g="1-rho")


@pytest.fixture
def example_datum():
    return PiecewiseConstant((-0.5, 1.5), (0.1, 0.9, 0.1))


@pytest.fixture
def coarse_setup(example_datum):
    """Mesh, initial state and kernel weights of the worked examples at dx = 1/40."""
    mesh = mesh_for_domain(1 / 40, -3.0, 5.0)
    state0 = project_initial_datum(example_datum, mesh)
    weights = discretize_kernel(create_kernel("linear-decreasing", 0.4), mesh.dx)
    return mesh, state0, weights
