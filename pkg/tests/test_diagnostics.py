"""Tests for norms, errors, EOA, total variation and the entropy residual."""

import logging

import numpy as np
import pytest

from roughroad.diagnostics import (
    EntropyObserver,
    MaxPrincipleObserver,
    entropy_constants,
    entropy_residual,
    eoa,
    error_table,
    l1_error,
    l1_norm,
    project,
    refinement_ratio,
    time_variation,
    total_variation,
)
from roughroad.errors import DivisibilityError, InvalidArgumentError
from roughroad.kernels import convolve_all, create_kernel, discretize_kernel
from roughroad.mesh import build_mesh, project_initial_datum
from roughroad.model import cfl_dt
from roughroad.numerics import run, step
from roughroad.numerics.scheme import interface_velocities
from roughroad.report import ErrorRow, ErrorTable
from roughroad.state import State


def test_l1_norm_of_the_example_datum(example_datum):
    mesh = build_mesh(1 / 40, 120, 200)
    state = project_initial_datum(example_datum, mesh)
    # the mesh covers [-3, 5] widened by dx/2 at each end, [-3.0125, 5.0125]:
    # 0.9 on a length of 2 plus 0.1 on the remaining 6.025
    assert l1_norm(state, mesh) == pytest.approx(2.4025, rel=1e-13)


def test_total_variation_of_the_example_datum(example_datum):
    mesh = build_mesh(1 / 40, 120, 200)
    state = project_initial_datum(example_datum, mesh)
    assert total_variation(state) == pytest.approx(1.6, abs=1e-13)
    assert total_variation(state, mesh, (0.1, 5.0)) == pytest.approx(0.8, abs=1e-13)
    assert total_variation(state, mesh, (-3.0, -0.1)) == pytest.approx(0.8, abs=1e-13)


def test_total_variation_window_must_exclude_zero(example_datum):
    mesh = build_mesh(1 / 40, 120, 200)
    state = project_initial_datum(example_datum, mesh)
    with pytest.raises(InvalidArgumentError):
        total_variation(state, mesh, (-1.0, 1.0))
    with pytest.raises(InvalidArgumentError):
        total_variation(state, None, (0.5, 1.0))


def test_time_variation():
    mesh = build_mesh(0.5, 1, 1)
    assert time_variation(State([0.1, 0.2, 0.3]), State([0.2, 0.2, 0.1]), mesh) == pytest.approx(0.15)


def test_refinement_ratio():
    assert refinement_ratio(build_mesh(0.3, 1, 1), build_mesh(0.1, 4, 4)) == 3
    with pytest.raises(DivisibilityError):
        refinement_ratio(build_mesh(0.25, 1, 1), build_mesh(0.1, 4, 4))


def test_projection_by_hand():
    coarse_mesh = build_mesh(0.3, 1, 1)
    reference_mesh = build_mesh(0.1, 4, 4)
    reference = State([0.0, 0.0, 0.0, 0.2, 0.4, 0.3, 0.6, 0.6, 0.6])
    np.testing.assert_allclose(project(reference, reference_mesh, coarse_mesh), [0.0, 0.3, 0.6], atol=1e-14)
    coarse = State([0.1, 0.3, 0.6])
    assert l1_error(coarse, reference, coarse_mesh, reference_mesh) == pytest.approx(0.03, abs=1e-14)


def test_projection_with_an_even_ratio_halves_cells():
    coarse_mesh = build_mesh(0.2, 1, 1)
    reference_mesh = build_mesh(0.1, 3, 3)
    # the coarse cell [-0.1, 0.1) covers the reference cell 0 and half of cells -1 and 1
    reference = State([0.0, 0.0, 0.2, 0.4, 0.6, 0.0, 0.0])
    projected = project(reference, reference_mesh, coarse_mesh)
    assert projected[1] == pytest.approx(0.5 * 0.4 + 0.25 * 0.2 + 0.25 * 0.6)


def test_projection_of_a_constant_is_the_constant():
    coarse_mesh = build_mesh(0.4, 5, 5)
    reference_mesh = build_mesh(0.05, 40, 40)
    projected = project(State(np.full(reference_mesh.n_cells, 0.7)), reference_mesh, coarse_mesh)
    np.testing.assert_allclose(projected, 0.7, rtol=1e-13)


def test_l1_error_needs_equal_times():
    coarse_mesh = build_mesh(0.3, 1, 1)
    reference_mesh = build_mesh(0.1, 4, 4)
    with pytest.raises(InvalidArgumentError):
        l1_error(State([0.1] * 3, time=1.0), State([0.1] * 9, time=2.0), coarse_mesh, reference_mesh)


def test_eoa():
    orders = eoa([(0.1, 0.04), (0.05, 0.02), (0.025, 0.005)])
    assert orders[0] is None
    assert orders[1] == pytest.approx(1.0)
    assert orders[2] == pytest.approx(2.0)


def test_eoa_with_a_zero_error_is_undefined(caplog):
    with caplog.at_level(logging.WARNING, logger="roughroad.diagnostics"):
        orders = eoa([(0.1, 0.0), (0.05, 0.01)])
    assert orders == [None, None]
    assert "EOA undefined" in caplog.text


def test_error_table():
    table = error_table([(1 / 40, 5.7e-2), (1 / 80, 2.8e-2)], reference="dx_ref=1/1280", label="case I")
    frame = table.to_frame()
    assert list(frame.columns) == ["dx", "l1_error", "eoa"]
    assert np.isnan(frame["eoa"].iloc[0])
    assert frame["eoa"].iloc[1] == pytest.approx(np.log(5.7 / 2.8) / np.log(2))
    assert table.to_dict()["rows"][0]["eoa"] is None


def test_error_table_rows_must_refine():
    with pytest.raises(ValueError):
        ErrorTable(rows=[ErrorRow(0.05, 0.1), ErrorRow(0.1, 0.2)], reference="ref")


def test_entropy_constants():
    values = entropy_constants()
    assert len(values) == 11
    assert values[0] == 0.0 and values[-1] == 1.0
    assert 0.1 in values and 0.9 in values
    assert entropy_constants(1.0, plateaus=(0.25,)) == sorted(set(entropy_constants(1.0, plateaus=())) | {0.25})


def test_entropy_residual_at_zero_is_the_conservative_update(case1_model, coarse_setup):
    mesh, state0, weights = coarse_setup
    dt = cfl_dt(case1_model, mesh.dx, "basic", weights)
    state1 = step(state0, mesh, dt, case1_model, weights)
    residual = entropy_residual(state0, state1, 0.0, dt, mesh, case1_model, weights)
    assert residual.shape == (mesh.n_cells,)
    assert np.max(np.abs(residual)) <= 1e-14


def test_entropy_residual_rejects_constants_out_of_range(case1_model, coarse_setup):
    mesh, state0, weights = coarse_setup
    with pytest.raises(InvalidArgumentError):
        entropy_residual(state0, state0, 1.5, 0.001, mesh, case1_model, weights)


def test_entropy_inequality_over_a_full_case_one_run(case1_model, coarse_setup):
    mesh, state0, weights = coarse_setup
    entropy = EntropyObserver(mesh, case1_model)
    bounds = MaxPrincipleObserver()
    report = run(state0, mesh, case1_model, weights, 2.0, observers=[entropy, bounds], cfl_mode="bv-strict")
    assert entropy.violations == 0
    assert entropy.max_residual() <= 1e-10
    summary = report.observers["entropy"]
    assert summary["violations"] == 0
    assert set(summary["max_residual_by_c"]) == {f"{c:.6g}" for c in entropy_constants()}
    # the x = 0 coupling term vanishes at c = 0 and c = rho_max
    assert summary["coupling_term_by_c"]["0"] == 0.0
    assert summary["coupling_term_by_c"]["1"] == 0.0
    assert summary["coupling_term_by_c"]["0.5"] > 0.0
    assert report.violations() == 0


def residual_by_hand(rho, new, c, lam, v, g):
    """One cell at a time, with absorbing ghosts on both sides."""
    padded = [rho[0]] + list(rho) + [rho[-1]]

    def clipped(i):
        u, w = padded[i], padded[i + 1]
        return (max(u, c) * g(max(w, c)) - min(u, c) * g(min(w, c))) * v[i]

    out = []
    for j in range(len(rho)):
        sign = int(new[j] > c) - int(new[j] < c)
        out.append(
            abs(new[j] - c)
            - abs(rho[j] - c)
            + lam * (clipped(j + 1) - clipped(j))
            + lam * sign * c * g(c) * (v[j + 1] - v[j])
        )
    return np.array(out)


@pytest.fixture
def small_setup():
    """Eight cells with a four-cell kernel."""
    mesh = build_mesh(0.1, 3, 4)
    weights = discretize_kernel(create_kernel("linear-decreasing", 0.4), mesh.dx)
    return mesh, weights


def test_entropy_residual_by_hand(case1_model, small_setup):
    mesh, weights = small_setup
    state0 = State(np.random.default_rng(37).uniform(0.0, 1.0, mesh.n_cells))
    dt = cfl_dt(case1_model, mesh.dx, "bv-strict", weights)
    state1 = step(state0, mesh, dt, case1_model, weights, cfl_mode="bv-strict")
    v = interface_velocities(convolve_all(state0, weights), mesh, case1_model)
    expected = residual_by_hand(state0.values, state1.values, 0.37, dt / mesh.dx, v, lambda r: 1.0 - r)
    residual = entropy_residual(state0, state1, 0.37, dt, mesh, case1_model, weights)
    np.testing.assert_allclose(residual, expected, rtol=0, atol=1e-15)


@pytest.mark.parametrize("model_name", ["case1_model", "case2_model"])
def test_entropy_residual_on_rough_data_under_bv_strict_steps(request, model_name, small_setup):
    model = request.getfixturevalue(model_name)
    mesh, weights = small_setup
    dt = cfl_dt(model, mesh.dx, "bv-strict", weights)
    rng = np.random.default_rng(2024)
    worst = -np.inf
    for _ in range(200):
        state0 = State(rng.uniform(0.0, 1.0, mesh.n_cells))
        state1 = step(state0, mesh, dt, model, weights, cfl_mode="bv-strict")
        for c in entropy_constants():
            worst = max(worst, float(entropy_residual(state0, state1, c, dt, mesh, model, weights).max()))
    assert worst <= 1e-12


def test_entropy_observer_warns_under_the_basic_bound(case1_model, small_setup, caplog):
    mesh, _ = small_setup
    with caplog.at_level(logging.WARNING, logger="roughroad.diagnostics"):
        observer = EntropyObserver(mesh, case1_model, cfl_mode="basic")
    assert "residuals may be positive" in caplog.text
    assert observer.summary()["cfl_mode"] == "basic"
    caplog.clear()
    with caplog.at_level(logging.WARNING, logger="roughroad.diagnostics"):
        EntropyObserver(mesh, case1_model)
    assert caplog.text == ""


def test_total_variation_reflection_and_triangle_inequality():
    rng = np.random.default_rng(9)
    for _ in range(20):
        a = rng.uniform(0.0, 1.0, 30)
        b = rng.uniform(0.0, 1.0, 30)
        assert total_variation(a[::-1]) == pytest.approx(total_variation(a), rel=1e-14)
        assert total_variation(a + b) <= total_variation(a) + total_variation(b) + 1e-14


def test_l1_error_of_a_state_with_itself():
    mesh = build_mesh(0.1, 4, 4)
    state = State(np.random.default_rng(1).uniform(0.0, 1.0, mesh.n_cells), time=0.5)
    assert l1_error(state, state, mesh, mesh) == 0.0


def test_projection_conserves_mass():
    coarse_mesh = build_mesh(0.3, 3, 3)
    reference_mesh = build_mesh(0.1, 10, 10)
    reference = State(np.random.default_rng(4).uniform(0.0, 1.0, reference_mesh.n_cells))
    projected = project(reference, reference_mesh, coarse_mesh)
    assert coarse_mesh.dx * projected.sum() == pytest.approx(reference_mesh.dx * reference.values.sum(), rel=1e-13)
