"""
Command line entry point.

    python -m src.cli run --config src/configs/experiments/stationary.json --out results/stationary --threads 8
    python -m src.cli sweep --config src/configs/experiments/stationary.json --strategy e-greedy --grid 0.01:0.25:0.01
    python -m src.cli verify-sim --steps 500000 --out results/verify
    python -m src.cli hist --simulator stationary --samples 500000 --bin-width 1000 --out results/hist

On failure a single line "error: <code>: <message>" is printed on stderr and the exit code is 1.
"""
import sys
from dataclasses import replace
from functools import wraps

import click

import src.log as log
from src.config import (DEFAULT_ALPHA, DEFAULT_BIN_WIDTH, DEFAULT_SEED, DEFAULT_VERIFY_STEPS, HISTOGRAM_FILE)
from src.harness.sweep import parse_grid, sweep_parameter
from src.harness.experiment import run_experiment
from src.harness.verification import verify_pattern_simulator
from src.reporting.experiment_config import parse_config
from src.reporting.writers import emit_histogram, emit_results, emit_sweep, emit_verification, run_notes
from src.simulators.steps import DEFAULT_PATTERN, STATIONARY_GAMMA, generate_pattern_series
from src.utils.errors import BanditSimError
from src.utils.rngdist import derive_stream, sample_gamma

app_logger = log.AppLogHandler()


def handle_errors(command):
    @wraps(command)
    def wrapper(*args, **kwargs):
        try:
            return command(*args, **kwargs)
        except BanditSimError as e:
            app_logger.add_error_log(f"{command.__name__} failed: {e}")
            click.echo(f"error: {e.code}: {e}", err=True)
            sys.exit(1)
        except OSError as e:
            app_logger.add_error_log(f"{command.__name__} failed: {e}")
            click.echo(f"error: io: {e}", err=True)
            sys.exit(1)
    return wrapper


def load_experiment(config_path, seed, runs, threads):
    config = parse_config(config_path)
    overrides = {
        key: value for key, value in (("master_seed", seed), ("runs", runs), ("threads", threads)) if value is not None
    }
    return replace(config, **overrides) if overrides else config


config_option = click.option("--config", "config_path", type=click.Path(dir_okay=False), default=None,
                             help="Experiment config (JSON). Default experiment when omitted.")
seed_option = click.option("--seed", type=int, default=None, help="Master seed.")
runs_option = click.option("--runs", type=int, default=None, help="Episodes per strategy.")
threads_option = click.option("--threads", type=int, default=None, help="Worker processes.")
out_option = click.option("--out", "out_dir", type=click.Path(file_okay=False), default="results",
                          show_default=True, help="Output directory.")
progress_option = click.option("--progress", is_flag=True, help="Show progress bars.")


@click.group()
def main():
    """Short-horizon multi-armed bandit simulations."""


@main.command()
@config_option
@seed_option
@runs_option
@out_option
@threads_option
@progress_option
@handle_errors
def run(config_path, seed, runs, out_dir, threads, progress):
    """Run every strategy of the experiment and write the CSVs."""
    config = load_experiment(config_path, seed, runs, threads)
    for note in run_notes(config):
        app_logger.add_warning_log(note)
    summaries = run_experiment(config, progress=progress)
    written = emit_results(summaries, out_dir, config)
    app_logger.add_info_log(f"run: wrote {', '.join(path.name for path in written)} to {out_dir}")
    for summary in summaries:
        click.echo(f"{summary.strategy:<16} overall {summary.overall_mean:9.1f}   last7 {summary.last7_mean:9.1f}")


@main.command()
@config_option
@seed_option
@runs_option
@out_option
@threads_option
@progress_option
@click.option("--strategy", "label", required=True, help="Label of the strategy to sweep.")
@click.option("--grid", required=True, help='"start:stop:step" or comma separated values.')
@click.option("--parameter", type=click.Choice(["epsilon", "ucb_c"]), default=None,
              help="Swept parameter, inferred from the policy when omitted.")
@click.option("--seed-offset", type=int, default=0, show_default=True, help="Seed increment between grid points.")
@handle_errors
def sweep(config_path, seed, runs, out_dir, threads, progress, label, grid, parameter, seed_offset):
    """Sweep a strategy parameter over a grid."""
    config = load_experiment(config_path, seed, runs, threads)
    result = sweep_parameter(config, config.strategy(label), parse_grid(grid), parameter, seed_offset, progress)
    emit_sweep(result, out_dir)
    for value, overall in result.table:
        click.echo(f"{result.parameter}={value:<10g} overall {overall:9.1f}")
    click.echo(f"best {result.parameter}={result.best_value:g}")


@main.command("verify-sim")
@seed_option
@out_option
@click.option("--steps", type=click.IntRange(min=0), default=DEFAULT_VERIFY_STEPS, show_default=True, help="Simulated days.")
@click.option("--alpha", type=float, default=DEFAULT_ALPHA, show_default=True, help="Elimination threshold.")
@click.option("--bin-width", type=float, default=DEFAULT_BIN_WIDTH, show_default=True)
@handle_errors
def verify_sim(seed, out_dir, steps, alpha, bin_width):
    """Regress the pattern simulator on its own lags and report the surviving features."""
    seed = DEFAULT_SEED if seed is None else seed
    report = verify_pattern_simulator(steps, seed, DEFAULT_PATTERN, alpha, bin_width)
    emit_verification(report, out_dir)
    click.echo(f"survivors: {', '.join(report.survivors)}")
    for name in report.survivors:
        click.echo(f"{name:<6} {report.fit.coefficient(name):.4f}")


@main.command()
@seed_option
@out_option
@click.option("--simulator", type=click.Choice(["stationary", "pattern"]), default="stationary", show_default=True)
@click.option("--samples", type=click.IntRange(min=0), default=DEFAULT_VERIFY_STEPS, show_default=True)
@click.option("--bin-width", type=float, default=DEFAULT_BIN_WIDTH, show_default=True)
@handle_errors
def hist(seed, out_dir, simulator, samples, bin_width):
    """Histogram of baseline steps (with the Gamma density for the stationary simulator)."""
    stream = derive_stream(DEFAULT_SEED if seed is None else seed, 0)
    if simulator == "stationary":
        path = emit_histogram(sample_gamma(stream, STATIONARY_GAMMA, samples), bin_width, f"{out_dir}/{HISTOGRAM_FILE}",
                              STATIONARY_GAMMA)
    else:
        path = emit_histogram(generate_pattern_series(samples, stream), bin_width, f"{out_dir}/{HISTOGRAM_FILE}")
    click.echo(str(path))


if __name__ == "__main__":
    main()
