"""Tests for the experiment registry, the runners and the artifact writer."""

import json
import logging
from fractions import Fraction

import numpy as np
import pytest

from roughroad.errors import DivisibilityError, InvalidArgumentError
from roughroad.experiments import (
    CustomResult,
    ExperimentSpec,
    RunOptions,
    build_kernel,
    build_model,
    custom,
    example1,
    example2,
    get_default_experiment_manager,
    prepare_output,
    validate_run,
    write_artifacts,
)
from roughroad.kernels import discretize_kernel
from roughroad.model import cfl_dt


@pytest.fixture
def manager():
    return get_default_experiment_manager()


@pytest.fixture
def riemann(manager):
    """Congested block released on a uniform road, at two resolutions."""
    return manager.resolve("custom").with_overrides(resolutions=["1/50", "1/100"], snapshot_times=[0.25, 0.5])


def test_manager_lists_the_shipped_experiments(manager):
    ids = [e.id for e in manager.list_experiments()]
    assert ids == ["example1-case1", "example1-case2", "example2-case1", "example2-case2", "custom"]
    assert len(manager.list_experiments(example="example2")) == 2


def test_resolve_by_name_and_case(manager):
    assert manager.resolve("example1", "II").id == "example1-case2"
    assert manager.resolve("example2-case1").id == "example2-case1"
    with pytest.raises(ValueError, match="Experiment not found"):
        manager.resolve("example1", "III")


def test_shipped_experiments_are_admissible(manager):
    for spec in manager.list_experiments():
        spec.validate()
        spec.scaled("desk").validate()


def test_desk_scale(manager):
    spec = manager.resolve("example1", "I").scaled("desk")
    assert spec.scale == "desk"
    assert spec.resolutions == [Fraction(1, 40), Fraction(1, 80), Fraction(1, 160), Fraction(1, 320)]
    assert spec.reference_dx == Fraction(1, 640)
    # published values are kept for comparison
    assert spec.published["errors"]["1/40"] == 5.7e-2


def test_divisibility_suggests_the_nearest_dx(manager):
    spec = manager.resolve("example1", "I").with_overrides(resolutions=["3/20"])
    with pytest.raises(DivisibilityError) as info:
        spec.validate()
    assert info.value.nearest == pytest.approx(0.4 / 3)
    assert "nearest admissible value" in str(info.value)


def test_resolutions_must_be_multiples_of_the_reference(manager):
    spec = manager.resolve("example1", "I").with_overrides(resolutions=["1/40", "1/200"], reference_dx="1/400")
    spec.validate()
    spec = manager.resolve("example1", "I").with_overrides(resolutions=["1/40"], reference_dx="1/30")
    with pytest.raises(InvalidArgumentError):
        spec.validate()


def test_dict_round_trip(manager):
    for spec in manager.list_experiments():
        data = spec.to_dict()
        assert ExperimentSpec.from_dict(data).to_dict() == data
    assert manager.resolve("example2-case2").to_dict()["figure"]["dx"] == "1/3200"


def test_unknown_example_kind():
    with pytest.raises(InvalidArgumentError):
        ExperimentSpec(id="x", title="x", example="example3")


def test_example1_errors_decrease_with_dx(manager):
    spec = manager.resolve("example1", "I").with_overrides(
        resolutions=["1/40", "1/80", "1/160"],
        reference_dx="1/320",
        snapshot_dx="1/160",
        snapshot_times=[1.0, 2.0],
    )
    result = example1(spec)
    errors = result.table.errors
    assert len(errors) == 3
    assert errors[0] > errors[1] > errors[2] > 0.0
    assert all(order > 0.5 for order in result.table.orders[1:])
    assert sorted(result.snapshots) == [1.0, 2.0]
    assert list(result.snapshots[2.0].columns) == ["x", "rho"]
    assert result.violations() == 0

    summary = result.summary()
    assert summary["experiment"] == "example1-case1"
    assert set(summary["relative_deviation"]) == {"1/40", "1/80", "1/160"}
    assert summary["runs"]["reference dx=1/320"]["t_final"] == 2.0
    # both sides of the discontinuity keep a bounded variation
    assert all(tv < 10 * summary["tv_initial"] for tv in summary["tv_away_from_zero"].values())


def test_example1_compares_an_alternative_g(manager):
    spec = manager.resolve("example1", "II").with_overrides(
        resolutions=["1/40", "1/80"], reference_dx="1/160", snapshot_times=[], t_final=0.5
    )
    result = example1(spec, RunOptions(compare_g="1-rho^2"))
    assert list(result.g_tables) == ["1-rho^2"]
    assert len(result.g_tables["1-rho^2"].rows) == 2
    assert result.snapshots == {}


def test_example2_distances_shrink_with_eta(manager):
    spec = manager.resolve("example2", "I").with_overrides(resolutions=["1/200"], etas=[0.1, 0.02])
    result = example2(spec, figure=False)
    distances = result.distances
    assert list(distances.columns) == ["case", "eta", "dx", "l1_distance", "published"]
    assert list(distances["eta"]) == [0.1, 0.02]
    assert distances["l1_distance"].iloc[0] > distances["l1_distance"].iloc[1] > 0.0
    assert distances["published"].iloc[0] == 7.4e-2
    assert list(result.overlays.columns) == ["x", "rho_local", "rho_eta_0.1", "rho_eta_0.02"]
    assert result.figure is None
    assert result.violations() == 0


def test_example2_with_a_single_cell_kernel(manager):
    spec = manager.resolve("example2", "I").with_overrides(resolutions=["1/100"], etas=[0.1, 0.01])
    result = example2(spec, figure=False)
    distances = result.distances["l1_distance"]
    assert list(result.distances["eta"]) == [0.1, 0.01]
    assert np.isfinite(distances).all()
    assert 0.0 < distances.iloc[1] < distances.iloc[0]
    assert result.violations() == 0


def test_entropy_sweep_switches_to_the_bv_strict_bound(manager, caplog):
    spec = manager.resolve("example1", "I")
    options = RunOptions(cfl_mode="basic", entropy_sweep=True, entropy_values=(0.3, 0.5))
    with caplog.at_level(logging.WARNING, logger="roughroad"):
        report = validate_run(spec, Fraction(1, 40), options, t_final=0.25)
    assert "running with bv-strict" in caplog.text
    assert "residuals may be positive" not in caplog.text
    assert report.observers["entropy"]["cfl_mode"] == "bv-strict"
    assert report.observers["entropy"]["violations"] == 0
    weights = discretize_kernel(build_kernel(spec), 1 / 40)
    assert report.dt == pytest.approx(cfl_dt(build_model(spec), 1 / 40, "bv-strict", weights))


def test_example2_figure(manager):
    spec = manager.resolve("example2", "II").with_overrides(
        resolutions=["1/100"], etas=[0.1], t_final=0.2, figure={"t_final": 0.1, "dx": "1/200"}
    )
    result = example2(spec)
    assert list(result.figure.columns) == ["x", "rho_local", "rho_eta_0.1"]
    assert len(result.figure) == spec.mesh(Fraction(1, 200)).n_cells
    assert result.reports["figure local dx=1/200"].final.time == 0.1


def test_custom_riemann_problem(riemann):
    result = custom(riemann)
    assert isinstance(result, CustomResult)
    assert sorted(result.reports) == ["dx=1/100", "dx=1/50"]
    for report in result.reports.values():
        assert report.final.time == 0.5
        assert sorted(report.snapshots) == [0.25, 0.5]
        assert report.mass_balance_defect() <= 1e-12
        assert 0.0 <= report.final.min() and report.final.max() <= 1.0
    assert result.violations() == 0


def test_parallel_runs_match_serial_runs(riemann):
    serial = custom(riemann)
    parallel = custom(riemann, RunOptions(parallelism=2))
    assert list(parallel.reports) == list(serial.reports)
    for key, report in serial.reports.items():
        assert np.array_equal(parallel.reports[key].final.values, report.final.values)


def test_validate_run_with_the_entropy_sweep(manager):
    spec = manager.resolve("example1", "II")
    options = RunOptions(entropy_sweep=True, entropy_values=(0.0, 0.5, 1.0))
    report = validate_run(spec, Fraction(1, 40), options, t_final=0.5)
    assert report.final.time == 0.5
    assert set(report.observers) == {"bounds", "conservation", "entropy"}
    assert report.violations() == 0


def test_artifacts_are_deterministic(riemann, tmp_path):
    first = write_artifacts([custom(riemann)], tmp_path / "a")
    second = write_artifacts([custom(riemann)], tmp_path / "b")
    assert [p.name for p in first] == [p.name for p in second]
    assert "summary.json" in [p.name for p in first]
    for a, b in zip(first, second):
        assert a.read_bytes() == b.read_bytes()

    summary = json.loads((tmp_path / "a" / "summary.json").read_text())
    assert summary["experiments"][0]["experiment"] == "custom"


def test_table2_is_written_for_example2(manager, tmp_path):
    spec = manager.resolve("example2", "I").with_overrides(resolutions=["1/100"], etas=[0.1, 0.02], t_final=0.2)
    paths = write_artifacts([example2(spec, figure=False)], tmp_path)
    names = {p.name for p in paths}
    assert {"table2.csv", "snapshots_example2_caseI_t0.2.csv", "summary.json"} <= names
    header = (tmp_path / "table2.csv").read_text().splitlines()[0]
    assert header == "case,eta,dx,l1_distance,published"


def test_prepare_output_rejects_a_file(tmp_path):
    target = tmp_path / "taken"
    target.write_text("not a directory")
    with pytest.raises(PermissionError):
        prepare_output(target)
    assert prepare_output(tmp_path / "new" / "dir").is_dir()


@pytest.mark.slow
@pytest.mark.parametrize("case", ["I", "II"])
def test_desk_scale_convergence_orders(manager, case):
    result = example1(manager.resolve("example1", case).scaled("desk"))
    orders = [order for order in result.table.orders if order is not None]
    assert len(orders) == 3
    assert all(0.7 <= order <= 1.6 for order in orders)
    assert result.violations() == 0
