import logging
import sys
from typing import NoReturn

import click
import orjson
from dotenv import load_dotenv

from . import __version__
from .config import Config
from .core.constants import EXIT_CHAIN, EXIT_CONFIG, EXIT_NUMERICAL
from .core.exceptions import (
    ArgumentError,
    ConfigError,
    DomainError,
    EvaluationError,
    NumericalFailure,
    SemiscaleError,
)
from .core.library import LIBRARY
from .core.runner import ExperimentConfig, run_experiment
from .utils.logging import setup_logging

# Load .env before the first Config read
load_dotenv()

# Set up logging
setup_logging()
logger = logging.getLogger(__name__)


def _fail(message: str, code: int) -> NoReturn:
    click.echo(f"Error: {message}", err=True)
    sys.exit(code)


@click.group()
def cli():
    """semiscale - Favard and Hölder scales of operator semigroups"""
    pass


@cli.command()
@click.option("--config", "config_path", required=True, type=click.Path(dir_okay=False), help="Experiment config (JSON)")
@click.option("--out", "out_dir", default=".", type=click.Path(file_okay=False), help="Output directory")
@click.option("--gnuplot", is_flag=True, help="Also write a gnuplot script for the sweeps")
@click.option("--log-level", type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"], case_sensitive=False))
def run(config_path, out_dir, gnuplot, log_level):
    """Run an experiment and write CSV sweeps plus a JSON report"""
    if log_level:
        setup_logging(log_level)

    try:
        experiment = ExperimentConfig.from_file(config_path)
    except ConfigError as e:
        _fail(f"invalid config {config_path}: {e}", EXIT_CONFIG)

    try:
        result, written = run_experiment(experiment, out_dir, gnuplot)
    except (EvaluationError, NumericalFailure) as e:
        _fail(f"numerical failure: {e}", EXIT_NUMERICAL)
    except (ArgumentError, DomainError) as e:
        _fail(str(e), EXIT_CONFIG)
    except SemiscaleError as e:
        _fail(str(e), EXIT_NUMERICAL)

    for path in written:
        click.echo(f"✅ Wrote {path}")

    if result.failures:
        for failure in result.failures:
            click.echo(f"Error: inconsistent chain: {failure}", err=True)
        sys.exit(EXIT_CHAIN)


@cli.command("list-functions")
def list_functions():
    """List the built-in function library"""
    for name, entry in sorted(LIBRARY.items()):
        label = f"{name}:<{entry.param}>" if entry.param else name
        click.echo(f"  {label:<22} {entry.description}")


@cli.command("list-semigroups")
def list_semigroups():
    """List the available semigroups"""
    click.echo("  translation              (T(t)f)(x) = f(x + t), sigma defaults to 1")
    click.echo("  heat                     Gaussian convolution, sigma defaults to 1")
    click.echo("  multiplication:<q>       exp(t q(x)) f(x) for a strictly negative library q, e.g. const:-1")


@cli.command()
def version():
    """Show version information"""
    click.echo(f"semiscale v{__version__}")


@cli.group()
def config():
    """Manage configuration settings"""
    pass


@config.command("show")
@click.option("--json", "as_json", is_flag=True, help="Output in JSON format")
def show_config(as_json):
    """Show current configuration"""
    cfg = Config()
    config_data = cfg.get_all()

    if as_json:
        click.echo(orjson.dumps(config_data, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS).decode())
    else:
        click.echo("Current configuration:")
        for key, value in sorted(config_data.items()):
            source = cfg.source(key)
            label = "default" if source == "default" else f"from {source}"
            click.echo(f"  {key}: {value} ({label})")


@config.command("set")
@click.argument("key")
@click.argument("value")
def set_config(key, value):
    """Set a configuration value"""
    cfg = Config()

    if key not in Config.DEFAULTS:
        click.echo(f"Error: Unknown configuration key '{key}'")
        click.echo(f"Valid keys: {', '.join(sorted(Config.DEFAULTS.keys()))}")
        return

    try:
        value = Config.coerce(key, value)
    except ValueError as e:
        click.echo(f"Error: {e}")
        return

    cfg.set(key, value)
    click.echo(f"✅ Set {key} = {value}")


@config.command("unset")
@click.argument("key")
def unset_config(key):
    """Remove a configuration value"""
    cfg = Config()
    cfg.unset(key)
    click.echo(f"✅ Removed {key} from config file")


@cli.command(name="help")
def show_help():
    """Show detailed help and usage examples"""
    click.echo(
        """semiscale - Favard and Hölder scales of operator semigroups

Usage Examples:

  # Run an experiment
  semiscale run --config configs/translation_sin_favard.json --out results

  # Also write a gnuplot script
  semiscale run --config configs/classify.json --out results --gnuplot

  # List built-in functions and semigroups
  semiscale list-functions
  semiscale list-semigroups

  # Show configuration
  semiscale config show

  # Use a coarser estimation grid
  semiscale config set grid_n 4001
  SEMISCALE_GRID_N=4001 semiscale run --config configs/heat_exponent.json

Exit Codes:
  0  success
  2  invalid config
  3  inconsistent classification chain
  4  numerical failure (non-finite values)

Configuration Keys:
  grid_a, grid_b, grid_n    - Estimation grid (default: [-40, 40], 16001 points)
  t_min, t_max, t_points    - t-grid of the sweeps (default: 1e-6 .. 1e2, 81 points)
  lambda_min, lambda_max, lambda_points
                            - lambda-grid of the sweeps (default: 1e-2 .. 1e6, 81 points)
  quad_panels, quad_tol     - Laplace quadrature panels and tail tolerance (default: 256, 1e-6)
  quad_max_step, quad_max_intervals, kernel_max_nodes
                            - Quadrature step and node caps (default: 0.1, 4096, 8193)
  compact_density           - Points per compact set (default: 2001)
  workers                   - Runner threads (default: 4)
  cache_max_entries, cache_max_mb
                            - Sweep cache limits (default: 32, 512)
  log_level                 - Logging level (default: INFO)
"""
    )


if __name__ == "__main__":
    cli()
