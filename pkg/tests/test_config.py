"""Tests for the YAML / pydantic run configuration."""

from fractions import Fraction

import pytest

from roughroad.errors import ConfigError, DivisibilityError
from roughroad.experiments import build_model
from roughroad.utils.config import RunConfig, format_fraction, load_config, parse_config, parse_fraction


def write(tmp_path, text, name="run.yaml"):
    path = tmp_path / name
    path.write_text(text, encoding="utf-8")
    return path


@pytest.mark.parametrize(
    "value, expected",
    [("1/320", Fraction(1, 320)), (0.025, Fraction(1, 40)), ("0.4", Fraction(2, 5)), (2, Fraction(2)), (Fraction(1, 3), Fraction(1, 3))],
)
def test_parse_fraction(value, expected):
    assert parse_fraction(value) == expected


@pytest.mark.parametrize("value", ["abc", "1/0", True, None])
def test_parse_fraction_rejects(value):
    with pytest.raises(ValueError):
        parse_fraction(value)


def test_format_fraction():
    assert format_fraction(Fraction(1, 320)) == "1/320"
    assert format_fraction(Fraction(2)) == "2"


def test_minimal_config_fills_the_experiment_defaults(tmp_path):
    config = parse_config(write(tmp_path, "experiment:\n  name: example1\n  case: I\n"))
    spec = config.experiment_spec()
    assert spec.id == "example1-case1"
    assert spec.t_final == 2.0
    assert [format_fraction(dx) for dx in spec.resolutions] == ["1/40", "1/80", "1/160", "1/320", "1/640"]
    assert spec.model["g"] == "linear"
    assert config.cfl.mode == "basic"
    assert config.cfl.safety == 0.9


def test_divisibility_is_checked_at_parse_time(tmp_path):
    path = write(tmp_path, "kernel:\n  eta: 0.4\nmesh:\n  dx: [0.15]\n")
    with pytest.raises(DivisibilityError) as info:
        parse_config(path)
    assert info.value.nearest == pytest.approx(0.4 / 3)


def test_model_from_config(tmp_path):
    path = write(tmp_path, "model:\n  k_l: 3\n  k_r: 1\n  psi: 1-rho\n")
    model = build_model(parse_config(path).experiment_spec())
    assert (model.k_l, model.k_r) == (3.0, 1.0)
    assert model.psi_norm == pytest.approx(1.0)
    assert model.psi_prime_norm == pytest.approx(1.0)


def test_unknown_keys_are_rejected(tmp_path):
    with pytest.raises(ConfigError, match="model.kl"):
        parse_config(write(tmp_path, "model:\n  kl: 3\n"))
    with pytest.raises(ConfigError, match="timestep"):
        parse_config(write(tmp_path, "timestep: 0.1\n"))


def test_constraint_violations_name_the_key(tmp_path):
    with pytest.raises(ConfigError, match="cfl.safety"):
        parse_config(write(tmp_path, "cfl:\n  safety: 1.5\n"))
    with pytest.raises(ConfigError, match="cfl.mode"):
        parse_config(write(tmp_path, "cfl:\n  mode: strict\n"))


def test_malformed_yaml_reports_line_and_column(tmp_path):
    path = write(tmp_path, "experiment:\n  name: [example1\n  case: I\n")
    with pytest.raises(ConfigError, match=r"run\.yaml:\d+:\d+"):
        load_config(path)


def test_top_level_must_be_a_mapping(tmp_path):
    with pytest.raises(ConfigError, match="mapping"):
        load_config(write(tmp_path, "- 1\n- 2\n"))


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError, match="Cannot read"):
        load_config(tmp_path / "absent.yaml")


def test_unknown_experiment_is_a_config_error():
    with pytest.raises(ConfigError, match="Experiment not found"):
        parse_config(overrides={"experiment.name": "example3"})


def test_unknown_profile_is_a_config_error():
    with pytest.raises(ConfigError, match="Unknown profile"):
        parse_config(overrides={"model.g": "cubic"})


def test_explicit_overrides_win_over_the_file(tmp_path):
    path = write(tmp_path, "t_final: 1.0\ncfl:\n  safety: 0.5\n")
    config = parse_config(path, {"t_final": 0.5, "cfl.safety": None})
    assert config.t_final == 0.5
    assert config.cfl.safety == 0.5


def test_round_trip_is_lossless():
    config = RunConfig.from_dict(
        {
            "experiment": {"name": "example2", "case": "II"},
            "mesh": {"dx": ["1/400"], "x_min": -3.0},
            "etas": [0.1, 0.02],
            "observers": {"entropy_sweep": True, "entropy_values": [0.0, 0.5]},
            "parallelism": 2,
            "scale": "desk",
        }
    )
    data = config.to_dict()
    assert data["mesh"]["dx"] == ["1/400"]
    assert RunConfig.from_dict(data) == config
    assert RunConfig.from_dict(data).to_dict() == data


def test_desk_scale_and_overrides_reach_the_experiment():
    config = parse_config(overrides={"experiment.name": "example2", "scale": "desk", "t_final": 1.0})
    spec = config.experiment_spec()
    assert spec.scale == "desk"
    assert spec.resolutions == [Fraction(1, 400)]
    assert spec.etas == [0.1, 0.02, 0.01]
    assert spec.t_final == 1.0
