"""Tests for the two-sided velocity law and the CFL bounds."""

import numpy as np
import pytest

from roughroad.errors import DegenerateModelError, DomainError, InvalidArgumentError, ProfileError, UndefinedSideError
from roughroad.kernels import create_kernel, discretize_kernel
from roughroad.model import FluxSide, ModelSpec, cfl_dt, exact_flux, velocity


def test_norms_of_the_example_model(case1_model):
    assert case1_model.psi_norm == pytest.approx(1.0)
    assert case1_model.psi_prime_norm == pytest.approx(1.0)
    assert case1_model.g_norm == pytest.approx(1.0)
    assert case1_model.g_prime_norm == pytest.approx(1.0)


def test_side_from_position():
    assert FluxSide.from_position(-1e-9) is FluxSide.LEFT
    assert FluxSide.from_position(0.3) is FluxSide.RIGHT
    with pytest.raises(UndefinedSideError):
        FluxSide.from_position(0.0)


def test_side_from_interface():
    # interface n_left is x_{-1/2}, the last one still on the left road
    assert FluxSide.from_interface(5, 5) is FluxSide.LEFT
    assert FluxSide.from_interface(6, 5) is FluxSide.RIGHT


def test_velocity(case1_model):
    assert velocity(FluxSide.LEFT, 0.25, case1_model) == pytest.approx(2.25)
    assert velocity(FluxSide.RIGHT, 0.25, case1_model) == pytest.approx(0.75)
    np.testing.assert_allclose(velocity(FluxSide.RIGHT, np.array([0.0, 1.0]), case1_model), [1.0, 0.0])


def test_velocity_tolerates_round_off_only(case1_model):
    velocity(FluxSide.LEFT, 1.0 + 1e-12, case1_model)
    with pytest.raises(DomainError):
        velocity(FluxSide.LEFT, 1.001, case1_model)
    with pytest.raises(DomainError):
        velocity(FluxSide.LEFT, -0.01, case1_model)


def test_exact_flux(case1_model):
    assert exact_flux(-1.0, 0.5, 0.5, case1_model) == pytest.approx(0.375)
    assert exact_flux(1.0, 0.5, 0.5, case1_model) == pytest.approx(0.125)
    with pytest.raises(UndefinedSideError):
        exact_flux(0.0, 0.5, 0.5, case1_model)


def test_basic_cfl(case1_model):
    assert cfl_dt(case1_model, 0.025, safety=1.0) == pytest.approx(0.025 / 3)
    assert cfl_dt(case1_model, 0.025) == pytest.approx(0.9 * 0.025 / 3)


def test_basic_cfl_against_an_independent_formula(case1_model, case2_model):
    # every norm is 1 for 1 - rho, so both bounds reduce to dx / k
    for model in (case1_model, case2_model):
        for dx in (1 / 40, 1 / 320, 0.013):
            expected = min(dx / (1.0 * model.k_l * 1.0 * 1.0), dx / (model.k_r * 1.0 * 1.0))
            assert cfl_dt(model, dx, safety=1.0) == pytest.approx(expected, rel=1e-14)


def test_bv_strict_cfl(case1_model):
    weights = discretize_kernel(create_kernel("linear-decreasing", 0.4), 0.025)
    # rho_max k ||psi|| (||g|| + ||g'||) + dx rho_max omega(0) k ||psi'|| ||g|| with k = 3, omega(0) = 5
    expected = 0.025 / (3 * 2 + 0.025 * 5 * 3)
    assert cfl_dt(case1_model, 0.025, "bv-strict", weights, safety=1.0) == pytest.approx(expected)
    assert cfl_dt(case1_model, 0.025, "bv-strict", weights, safety=1.0) < cfl_dt(case1_model, 0.025, safety=1.0)


def test_bv_strict_needs_the_kernel(case1_model):
    with pytest.raises(InvalidArgumentError):
        cfl_dt(case1_model, 0.025, "bv-strict")


@pytest.mark.parametrize("safety", [0.0, -0.5, 1.5])
def test_cfl_safety_range(case1_model, safety):
    with pytest.raises(InvalidArgumentError):
        cfl_dt(case1_model, 0.025, safety=safety)


def test_unknown_cfl_mode(case1_model):
    with pytest.raises(InvalidArgumentError):
        cfl_dt(case1_model, 0.025, "strict")


def test_degenerate_model():
    model = ModelSpec.from_names(1.0, 1.0, psi=[0.0], g="linear")
    with pytest.raises(DegenerateModelError):
        cfl_dt(model, 0.1)


def test_constant_psi_is_allowed():
    model = ModelSpec.from_names(1.0, 2.0, psi="constant", g="linear")
    assert model.psi_prime_norm == 0.0
    assert cfl_dt(model, 0.1, safety=1.0) == pytest.approx(0.05)


def test_g_must_vanish_at_rho_max():
    with pytest.raises(ProfileError, match="vanish"):
        ModelSpec.from_names(1.0, 1.0, psi="linear", g="constant")


def test_psi_must_be_non_increasing():
    with pytest.raises(ProfileError):
        ModelSpec.from_names(1.0, 1.0, psi=[0.5, 0.5], g="linear")


def test_speed_factors_must_be_positive():
    with pytest.raises(InvalidArgumentError):
        ModelSpec.from_names(0.0, 1.0)


def test_g_can_follow_psi():
    model = ModelSpec.from_names(1.0, 1.0, psi="quadratic", g="psi")
    assert model.g.label == "quadratic"
    assert model.g(0.5) == pytest.approx(0.75)


@pytest.mark.parametrize("psi", ["1-rho", "(1-rho)^2", "quadratic"])
def test_velocity_is_non_increasing(psi):
    model = ModelSpec.from_names(3.0, 1.0, psi=psi, g="1-rho")
    R = np.sort(np.random.default_rng(3).uniform(0.0, 1.0, 200))
    for side in (FluxSide.LEFT, FluxSide.RIGHT):
        v = velocity(side, R, model)
        assert np.all(np.diff(v) <= 1e-15)
        assert np.all(v >= 0.0)
