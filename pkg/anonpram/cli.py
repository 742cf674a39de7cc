# anonpram/cli.py

import sys
from typing import Optional, Sequence

import click
from rich.console import Console
from rich.table import Table

from .acceptance import CRITERIA, run_suite
from .config import HARNESS_DEFAULTS
from .errors import AnonPramError, ConfigError
from .harness import run_trials
from .logging_utils import configure_logging, get_logger
from .memory import WriteSelector
from .models import ExperimentConfig, GrowthFunction
from .panel_layout import TableLayoutStrategy
from .registry import ALGORITHMS
from .reporting import ReportingEngine
from .statistics import ScalingModel, fit_scaling

logger = get_logger(__name__)

_ALGO_CHOICE = click.Choice(list(ALGORITHMS), case_sensitive=True)
_GROWTH_CHOICE = click.Choice([g.value for g in GrowthFunction], case_sensitive=False)
_SELECTOR_CHOICE = click.Choice([s.value for s in WriteSelector], case_sensitive=False)
_SEED_TYPE = click.IntRange(0, (1 << 64) - 1)


def _experiment_options(func):
    """Options shared by ``run`` and ``sweep``."""
    options = [
        click.option("--algo", "algo_id", type=_ALGO_CHOICE, required=True,
                     help="Algorithm id (see `anonpram list`)."),
        click.option("--n", "n_values", type=click.IntRange(min=1), multiple=True, required=True,
                     help="Number of processors; repeat for several sizes."),
        click.option("--trials", type=click.IntRange(min=1), required=True,
                     help="Trials per processor count."),
        click.option("--seed", type=_SEED_TYPE, required=True,
                     help="Master seed (unsigned 64-bit); trial i uses a seed derived from it."),
        click.option("--beta", type=float, default=None,
                     help="Override the algorithm's analysis parameter beta."),
        click.option("--growth", type=_GROWTH_CHOICE, default=None,
                     help="Growth of k for arb-unb-mc / com-unb-mc (default doubling)."),
        click.option("--selector", type=_SELECTOR_CHOICE, default=None,
                     help="Arbitrary-write selector; Arbitrary-model algorithms only (default first)."),
        click.option("--jobs", type=click.IntRange(min=1),
                     default=HARNESS_DEFAULTS["jobs"], show_default=True,
                     envvar="ANONPRAM_JOBS", show_envvar=True,
                     help="Worker processes running trials concurrently."),
        click.option("--cap-multiplier", type=click.FloatRange(min=0, min_open=True),
                     default=HARNESS_DEFAULTS["round_cap_multiplier"], show_default=True,
                     help="Round cap as a multiple of the expected rounds."),
        click.option("--no-strict", is_flag=True, default=False,
                     help="Allow a cell to be read and written in the same round."),
    ]
    for option in reversed(options):
        func = option(func)
    return func


def _build_config(
    algo_id: str,
    n_values: Sequence[int],
    trials: int,
    seed: int,
    beta: Optional[float],
    growth: Optional[str],
    selector: Optional[str],
    cap_multiplier: float,
    no_strict: bool,
) -> ExperimentConfig:
    return ExperimentConfig(
        algorithm_id=algo_id,
        n_values=tuple(n_values),
        trials=trials,
        seed=seed,
        beta=beta,
        growth=GrowthFunction(growth.lower()) if growth else None,
        selector=WriteSelector(selector.lower()) if selector else None,
        cap_multiplier=cap_multiplier,
        strict=not no_strict,
    )


def _run_experiment(config: ExperimentConfig, jobs: int):
    try:
        return run_trials(config, jobs=jobs)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    except AnonPramError as exc:
        logger.error(str(exc))
        sys.exit(1)


@click.group()
@click.option(
    "--log-level",
    "-l",
    type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"], case_sensitive=False),
    default="INFO",
    help="Set the console logging level. Defaults to INFO.",
)
@click.option(
    "--debug",
    is_flag=True,
    default=False,
    help="Shortcut for --log-level=DEBUG (overrides --log-level).",
)
@click.option(
    "--suppress-logs",
    is_flag=True,
    default=False,
    help="Only warnings and errors reach the console.",
)
def main(log_level, debug, suppress_logs):
    """
    Simulate randomized naming algorithms on an anonymous synchronous PRAM.

        anonpram list
        anonpram run --algo arb-bnd-lv --n 8 --trials 10 --seed 7
        anonpram sweep --algo com-unb-lv --n 16 --n 64 --n 256 --trials 20 --seed 1 --model log
        anonpram suite --trial-scale 0.1

    Logs and summaries go to standard error; CSV goes to standard output
    unless --out is given.
    """
    effective_level = "DEBUG" if debug else log_level
    configure_logging(effective_level, suppress_logs=suppress_logs, enable_file_logging=True)


@main.command("list")
def list_algorithms():
    """Print the algorithm registry."""
    console = Console()
    table = Table(title="Naming algorithms")
    table.add_column("id", style="cyan", no_wrap=True)
    table.add_column("algorithm")
    table.add_column("PRAM")
    table.add_column("kind")
    table.add_column("memory")
    table.add_column("default beta", justify="right")
    for spec in ALGORITHMS.values():
        memory = f"{spec.window} cells" if spec.bounded else "unbounded"
        table.add_row(
            spec.algo_id, spec.title, spec.variant.value, spec.kind.value,
            memory, f"{spec.default_beta:g}",
        )
    console.print(table)


@main.command("run")
@_experiment_options
@click.option("--out", type=click.Path(dir_okay=False, writable=True), default=None,
              help="Trial CSV path (not .json); the aggregate JSON is written next to it.")
@click.option("--summary/--no-summary", default=True, show_default=True,
              help="Print the per-n summary to standard error.")
def run_command(algo_id, n_values, trials, seed, beta, growth, selector,
                jobs, cap_multiplier, no_strict, out, summary):
    """Run trials of one algorithm and write the per-trial CSV and the aggregate JSON."""
    config = _build_config(
        algo_id, n_values, trials, seed, beta, growth, selector, cap_multiplier, no_strict,
    )
    result = _run_experiment(config, jobs)
    engine = ReportingEngine()
    try:
        engine.write_reports(result, out)
    except ConfigError as exc:
        raise click.UsageError(str(exc)) from exc
    if summary:
        engine.render_summary(result)


@main.command("sweep")
@_experiment_options
@click.option("--metric", type=click.Choice(["rounds", "bits_total", "cells_touched"]),
              default="rounds", show_default=True, help="Per-trial metric to average and fit.")
@click.option("--model", type=click.Choice([m.value for m in ScalingModel]),
              default=ScalingModel.LOG.value, show_default=True,
              help="Shape f(n) of the fit metric = a + b * f(n).")
def sweep_command(algo_id, n_values, trials, seed, beta, growth, selector,
                  jobs, cap_multiplier, no_strict, metric, model):
    """Run several processor counts and fit the mean of a metric against n."""
    n_values = sorted(set(n_values))
    if len(n_values) < 3:
        raise click.UsageError("a scaling fit needs at least three distinct --n values")
    config = _build_config(
        algo_id, n_values, trials, seed, beta, growth, selector, cap_multiplier, no_strict,
    )
    result = _run_experiment(config, jobs)
    console = Console(stderr=True)
    engine = ReportingEngine(TableLayoutStrategy(console), console=console)
    engine.render_summary(result)

    frame = result.to_frame()
    means = frame.groupby("n", sort=True)[metric].mean()
    points = [(int(n), float(v)) for n, v in means.items()]
    try:
        fit = fit_scaling(points, ScalingModel(model))
    except ValueError as exc:
        logger.error("Cannot fit %s: %s", metric, exc)
        sys.exit(1)
    engine.render_fit(fit, metric)
    click.echo("n,mean_" + metric)
    for n, value in points:
        click.echo(f"{n},{value:.6g}")


@main.command("suite")
@click.option("--trial-scale", type=click.FloatRange(min=0, min_open=True), default=1.0,
              show_default=True, help="Multiply every criterion's trial count.")
@click.option("--jobs", type=click.IntRange(min=1),
              default=HARNESS_DEFAULTS["jobs"], show_default=True,
              envvar="ANONPRAM_JOBS", show_envvar=True,
              help="Worker processes running trials concurrently.")
@click.option("--only", multiple=True,
              help=f"Criterion number or key to run; repeatable. Keys: "
                   f"{', '.join(c.key for c in CRITERIA)}.")
def suite_command(trial_scale, jobs, only):
    """Run the acceptance criteria and print pass/fail per criterion."""
    try:
        outcomes = run_suite(trial_scale=trial_scale, jobs=jobs, only=only)
    except KeyError as exc:
        raise click.UsageError(str(exc.args[0])) from exc
    ReportingEngine().render_criteria(outcomes)
    for outcome in outcomes:
        click.echo(f"{outcome.number},{outcome.key},{'pass' if outcome.passed else 'fail'}")
    if not all(o.passed for o in outcomes):
        sys.exit(1)


if __name__ == "__main__":
    main()
