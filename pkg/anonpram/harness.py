"""
harness.py

Seeded trial ensembles: runs one registered algorithm for every (n, trial)
pair of an ExperimentConfig, classifies each run and aggregates per n.

Trial i runs with seed ``derive_seed(master seed, i)`` whatever n is, and every
trial is independent of the others, so results do not depend on ``jobs``.
"""

from concurrent.futures import ProcessPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Dict, Iterable, List, Optional, Sequence, Tuple

import pandas as pd

from .config import get_harness_config
from .errors import ConfigError, ModelViolation, RoundCapExceeded
from .logging_utils import get_logger, trial_context
from .machine import SimulationLimits, run_program
from .models import (
    AggregateStats,
    AlgorithmKind,
    ExecutionMetrics,
    ExperimentConfig,
    NameAssignment,
    Outcome,
    TrialReport,
)
from .registry import AlgorithmSpec, get_algorithm
from .rng import derive_seed
from .statistics import estimate_probability

logger = get_logger(__name__)

ERROR_OUTCOMES = frozenset({Outcome.DUPLICATE_NAMES, Outcome.INVALID_NAMES})


def trial_seed(master_seed: int, trial: int) -> int:
    return derive_seed(master_seed, trial)


def classify_outcome(
    names: Sequence[int],
    n: int,
    kind: Optional[AlgorithmKind] = None,
) -> Outcome:
    """Label the names a terminated run produced.

    CorrectPermutation iff ``names`` is a permutation of [1..n]; DuplicateNames
    iff some name repeats; InvalidNames covers the remaining case of distinct
    names outside [1..n].
    """
    assignment = NameAssignment(tuple(names))
    if len(assignment.names) == n and assignment.is_permutation():
        return Outcome.CORRECT_PERMUTATION
    if assignment.has_duplicates():
        if kind is AlgorithmKind.LAS_VEGAS:
            logger.error("Las Vegas run terminated with duplicate names: %s", list(names))
        return Outcome.DUPLICATE_NAMES
    return Outcome.INVALID_NAMES


def validate_config(config: ExperimentConfig) -> AlgorithmSpec:
    """Reject invalid experiment configurations before any trial runs.

    Raises:
        ConfigError: unknown id, bad counts, selector on Common, growth on an
            algorithm without one, beta out of range.
    """
    spec = get_algorithm(config.algorithm_id)
    if config.trials < 1:
        raise ConfigError(f"trials must be >= 1, got {config.trials}")
    if not config.n_values:
        raise ConfigError("at least one n is required")
    if config.cap_multiplier is not None and config.cap_multiplier <= 0:
        raise ConfigError(f"cap multiplier must be > 0, got {config.cap_multiplier}")
    spec.policy(config.selector)
    for n in config.n_values:
        spec.build_config(n, config.beta, config.growth)
    return spec


def run_trial(config: ExperimentConfig, n: int, trial: int) -> TrialReport:
    """Run trial ``trial`` of ``config`` on ``n`` processors.

    Cap hits and model violations become outcome labels; anything else raises.
    """
    spec = get_algorithm(config.algorithm_id)
    cfg = spec.build_config(n, config.beta, config.growth)
    policy = spec.policy(config.selector)
    seed = trial_seed(config.seed, trial)
    limits = SimulationLimits(
        round_cap=spec.round_cap(n, cfg.beta, config.cap_multiplier),
        strict=config.strict,
        window=spec.window,
    )
    report = TrialReport(
        algorithm_id=spec.algo_id,
        n=n,
        trial=trial,
        seed=seed,
        outcome=Outcome.CORRECT_PERMUTATION,
        metrics=ExecutionMetrics(),
    )
    try:
        states, metrics = run_program(n, spec.program(cfg), policy, seed, limits)
    except RoundCapExceeded as exc:
        logger.warning(
            "%s n=%d trial %d: %s", spec.algo_id, n, trial, exc,
            extra=trial_context(spec.algo_id, n, trial, seed),
        )
        report.outcome = Outcome.CAP_EXCEEDED
        report.metrics = exc.metrics or ExecutionMetrics(rounds=exc.cap)
        report.detail = str(exc)
        return report
    except ModelViolation as exc:
        logger.warning(
            "%s n=%d trial %d: %s: %s", spec.algo_id, n, trial, exc.kind, exc,
            extra=trial_context(spec.algo_id, n, trial, seed),
        )
        report.outcome = Outcome.MODEL_VIOLATION
        report.detail = f"{exc.kind}: {exc}"
        return report

    names = NameAssignment.from_states(states)
    report.outcome = classify_outcome(names.names, n, spec.kind)
    report.metrics = metrics
    report.digest = names.digest()
    report.duplicate_count = names.duplicate_count()
    return report


def _run_job(job: Tuple[ExperimentConfig, int, int]) -> TrialReport:
    return run_trial(*job)


def aggregate(
    reports: Iterable[TrialReport],
    confidence: float = 0.99,
) -> Dict[int, AggregateStats]:
    """Per-n statistics; the error rate counts DuplicateNames and InvalidNames over all trials."""
    reports = list(reports)
    if not reports:
        return {}
    frame = pd.DataFrame([
        {
            **r.to_row(),
            "nominal_bits": r.metrics.nominal_bits,
            "duplicate_count": r.duplicate_count,
            "is_error": r.outcome in ERROR_OUTCOMES,
        }
        for r in reports
    ])
    observations: Dict[int, Dict[str, int]] = {}
    for r in reports:
        merged = observations.setdefault(r.n, {})
        for key, value in r.metrics.observations.items():
            if value > merged.get(key, value - 1):
                merged[key] = value

    stats: Dict[int, AggregateStats] = {}
    for n, group in frame.groupby("n", sort=True):
        n = int(n)
        trials = len(group)
        errors = int(group["is_error"].sum())
        stats[n] = AggregateStats(
            n=n,
            trials=trials,
            mean_rounds=float(group["rounds"].mean()),
            max_rounds=int(group["rounds"].max()),
            mean_bits=float(group["bits_total"].mean()),
            max_bits=int(group["bits_total"].max()),
            total_bits=int(group["bits_total"].sum()),
            max_cells_touched=int(group["cells_touched"].max()),
            error_rate=estimate_probability(errors, trials, confidence),
            outcome_counts={str(k): int(v) for k, v in group["outcome"].value_counts().items()},
            retry_distribution={
                int(k): int(v) for k, v in group["outer_iterations"].value_counts().items()
            },
            mean_duplicates=float(group["duplicate_count"].mean()),
            mean_nominal_bits=float(group["nominal_bits"].mean()),
            observations=observations.get(n, {}),
        )
    return stats


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    reports: List[TrialReport] = field(default_factory=list)
    stats: Dict[int, AggregateStats] = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        """One row per trial, in the report CSV schema."""
        columns = list(TrialReport.csv_columns())
        return pd.DataFrame([r.to_row() for r in self.reports], columns=columns)

    def totals(self) -> Dict[str, int]:
        counts: Dict[str, int] = {}
        for r in self.reports:
            counts[r.outcome.value] = counts.get(r.outcome.value, 0) + 1
        return {
            "trials": len(self.reports),
            "bits_total": sum(r.metrics.random_bits for r in self.reports),
            "rounds_total": sum(r.metrics.rounds for r in self.reports),
            "errors": sum(1 for r in self.reports if r.outcome in ERROR_OUTCOMES),
            "outcomes": dict(sorted(counts.items())),
        }

    def to_dict(self) -> Dict[str, Any]:
        return {
            "config": self.config.to_dict(),
            "stats": {str(n): s.to_dict() for n, s in sorted(self.stats.items())},
            "totals": self.totals(),
        }


def run_trials(
    config: ExperimentConfig,
    jobs: Optional[int] = None,
    confidence: Optional[float] = None,
) -> ExperimentResult:
    """Run every (n, trial) pair of ``config`` and aggregate per n.

    ``jobs`` > 1 spreads trials over worker processes; reports are sorted by
    (n, trial) either way.

    Raises:
        ConfigError: for an invalid configuration, before any trial runs.
    """
    harness_cfg = get_harness_config({
        k: v for k, v in {"jobs": jobs, "confidence": confidence}.items() if v is not None
    })
    spec = validate_config(config)
    jobs = max(1, int(harness_cfg["jobs"]))
    work = [(config, n, t) for n in config.n_values for t in range(config.trials)]
    logger.info(
        "Running %s (%s) for n=%s, %d trials each, seed=%d, jobs=%d",
        spec.algo_id, spec.title, list(config.n_values), config.trials, config.seed, jobs,
    )

    reports: List[TrialReport] = []
    if jobs == 1 or len(work) == 1:
        reports = [_run_job(job) for job in work]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            futures = {pool.submit(_run_job, job): job for job in work}
            for future in as_completed(futures):
                reports.append(future.result())
    reports.sort(key=lambda r: (r.n, r.trial))

    result = ExperimentResult(config, reports, aggregate(reports, harness_cfg["confidence"]))
    for n, s in result.stats.items():
        logger.info(
            "%s n=%d: mean rounds %.1f, mean bits %.1f, errors %d/%d, outcomes %s",
            spec.algo_id, n, s.mean_rounds, s.mean_bits,
            s.error_rate.successes, s.trials, s.outcome_counts,
        )
    logger.info("Finished %s: %d trials", spec.algo_id, len(reports))
    return result
