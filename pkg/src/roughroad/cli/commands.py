import json
import logging
from contextlib import contextmanager
from typing import Any, Dict, Iterator, Optional, Sequence

import click

from roughroad import rr
from roughroad.errors import RoughRoadError
from roughroad.experiments import (
    CustomResult,
    Example1Result,
    Example2Result,
    RunOptions,
    prepare_output,
    run_experiment,
    validate_run,
    write_artifacts,
)
from roughroad.model import CFL_MODES
from roughroad.utils.config import format_fraction, parse_config

logger = logging.getLogger(__name__)

LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
STUDY_EXPERIMENTS = ("example1-case1", "example1-case2", "example2-case1", "example2-case2")


def configure_logging(level: str = "WARNING") -> None:
    """Configure the root logger once for the whole process."""
    logging.basicConfig(level=getattr(logging, level.upper()), format=LOG_FORMAT, force=True)


def solver_options(func):
    """Flags shared by ``run``, ``validate`` and ``sweep``; they override the config file."""
    options = [
        click.option("--dx", multiple=True, help='Cell width such as "1/40"; repeatable'),
        click.option("--eta", type=float, multiple=True, help="Kernel support; repeatable for the example2 sweep"),
        click.option("--T", "t_final", type=float, help="Final time"),
        click.option("--cfl-mode", type=click.Choice(CFL_MODES), help="CFL condition used for dt"),
        click.option("--cfl-safety", type=float, help="Fraction of the CFL bound, in (0, 1]"),
        click.option("--g-profile", help='Slowdown factor g: a profile name such as "1-rho", or "psi"'),
        click.option("--entropy-sweep/--no-entropy-sweep", default=None, help="Evaluate the entropy residuals"),
        click.option("--scale", type=click.Choice(["full", "desk"]), help="Full study resolutions or the lighter desk set"),
        click.option("--parallelism", "-j", type=click.IntRange(min=1), help="Worker processes for independent runs"),
        click.option("--config", "config_path", type=click.Path(dir_okay=False), help="YAML configuration file"),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def selection_options(func):
    func = click.option("--case", "-c", type=click.Choice(["I", "II"]), help="Case I (k_l=3, k_r=1) or II")(func)
    func = click.option("--experiment", "-e", help="example1, example2, custom or a full id")(func)
    return func


def _overrides(
    dx: Sequence[str] = (),
    eta: Sequence[float] = (),
    t_final: Optional[float] = None,
    cfl_mode: Optional[str] = None,
    cfl_safety: Optional[float] = None,
    g_profile: Optional[str] = None,
    entropy_sweep: Optional[bool] = None,
    scale: Optional[str] = None,
    parallelism: Optional[int] = None,
    **extra: Any,
) -> Dict[str, Any]:
    overrides: Dict[str, Any] = {
        "mesh.dx": list(dx) or None,
        "t_final": t_final,
        "cfl.mode": cfl_mode,
        "cfl.safety": cfl_safety,
        "model.g": g_profile,
        "observers.entropy_sweep": entropy_sweep,
        "scale": scale,
        "parallelism": parallelism,
    }
    if eta:
        overrides["kernel.eta"] = eta[0]
        overrides["etas"] = list(eta)
    overrides.update(extra)
    return overrides


def _expand(name: str) -> Sequence[str]:
    if name in ("example1", "example2"):
        return (f"{name}-case1", f"{name}-case2")
    return (name,)


@contextmanager
def _errors() -> Iterator[None]:
    try:
        yield
    except RoughRoadError as e:
        raise click.ClickException(str(e)) from e
    except OSError as e:
        raise click.ClickException(f"{e.strerror or e}: {e.filename}" if e.filename else str(e)) from e


def _format(value: float) -> str:
    return f"{value:.3e}"


def _echo_result(result) -> None:
    if isinstance(result, Example1Result):
        click.echo(f"\n{result.spec.id} ({result.spec.scale} scale, {result.table.reference}):")
        click.echo(result.table.to_frame().to_string(index=False, float_format=_format))
        for g, table in result.g_tables.items():
            click.echo(f"\ng = {g}:")
            click.echo(table.to_frame().to_string(index=False, float_format=_format))
    elif isinstance(result, Example2Result):
        click.echo(f"\n{result.spec.id} ({result.spec.scale} scale):")
        click.echo(result.distances.to_string(index=False, float_format=_format))
    elif isinstance(result, CustomResult):
        for key, report in result.reports.items():
            click.echo(f"\n{key}: {report.n_steps} steps, mass {report.summary()['mass_final']:.7e}")
    if result.violations():
        click.echo(f"\n{result.violations()} invariant violations", err=True)


@click.group()
@click.option(
    "--log-level",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False),
    default="WARNING",
    show_default=True,
)
def cli(log_level):
    """roughroad: non-local traffic flow on a road with a change of conditions at x = 0."""
    configure_logging(log_level)


@cli.command(name="list")
@click.argument("item_type", type=click.Choice(["experiments", "profiles", "kernels"]))
def list_items(item_type):
    """List available experiments, profiles or kernels."""
    items = rr.load(item_type)

    if not items:
        click.echo(f"No {item_type} found.")
        return

    click.echo(f"Available {item_type}:")
    for item in items:
        click.echo(f"[{item['id']}] {item['name']}")
        click.echo(f"  {item['description']}")
        click.echo("")


@cli.command()
@selection_options
@solver_options
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Output directory")
@click.option("--compare-g", help="Repeat example1 with this g profile and report both tables")
def run(experiment, case, config_path, out, compare_g, **flags):
    """Run one experiment and write its tables, snapshots and summary.json."""
    with _errors():
        config = parse_config(
            config_path,
            _overrides(
                **flags,
                **{
                    "experiment.name": experiment,
                    "experiment.case": case,
                    "output.directory": out,
                    "compare_g": compare_g,
                },
            ),
        )
        spec = config.experiment_spec()
        out_dir = prepare_output(config.output.directory)
        result = run_experiment(spec, RunOptions.from_config(config))
        paths = write_artifacts([result], out_dir)

    for path in paths:
        click.echo(f"Wrote {path}")
    _echo_result(result)
    if result.violations():
        click.get_current_context().exit(1)


@cli.command()
@selection_options
@solver_options
@click.option("--entropy", is_flag=True, help="Check the discrete entropy inequality")
@click.option("--bounds", is_flag=True, help="Check the maximum principle")
@click.option("--conservation", is_flag=True, help="Check the mass balance step by step")
def validate(experiment, case, config_path, entropy, bounds, conservation, **flags):
    """Run one resolution with invariant checks; exit status 1 on any violation.

    Without a check flag every check is run.
    """
    if not (entropy or bounds or conservation):
        entropy = bounds = conservation = True
    with _errors():
        config = parse_config(
            config_path,
            _overrides(**flags, **{"experiment.name": experiment, "experiment.case": case}),
        )
        spec = config.experiment_spec()
        dx = spec.resolutions[0]
        base = RunOptions.from_config(config)
        options = RunOptions(
            cfl_mode=base.cfl_mode,
            cfl_safety=base.cfl_safety,
            entropy_sweep=entropy,
            entropy_values=base.entropy_values,
            check_bounds=bounds,
            check_conservation=conservation,
        )
        report = validate_run(spec, dx, options)

    click.echo(f"{spec.id} dx={format_fraction(dx)}: {report.n_steps} steps to T={report.final.time:g}")
    click.echo(json.dumps(report.observers, indent=2, sort_keys=True))
    if report.violations():
        click.echo(f"{report.violations()} invariant violations", err=True)
        click.get_current_context().exit(1)


@cli.command()
@click.argument("experiments", nargs=-1)
@solver_options
@click.option("--out", "-o", type=click.Path(file_okay=False), help="Output directory")
def sweep(experiments, config_path, out, **flags):
    """Run several experiments (default: both examples, both cases) into one output directory."""
    names = [expanded for name in (experiments or STUDY_EXPERIMENTS) for expanded in _expand(name)]
    with _errors():
        configs = [
            parse_config(
                config_path,
                _overrides(**flags, **{"experiment.name": name, "output.directory": out}),
            )
            for name in names
        ]
        out_dir = prepare_output(configs[0].output.directory)
        results = [run_experiment(config.experiment_spec(), RunOptions.from_config(config)) for config in configs]
        paths = write_artifacts(results, out_dir)

    for path in paths:
        click.echo(f"Wrote {path}")
    for result in results:
        _echo_result(result)
    if any(result.violations() for result in results):
        click.get_current_context().exit(1)


if __name__ == "__main__":
    cli()
