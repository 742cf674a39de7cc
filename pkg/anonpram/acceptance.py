"""
acceptance.py

The acceptance suite: fourteen criteria, each a seeded batch of simulations
checked against correctness, statistical and scaling thresholds.

Trial counts are given at full scale; ``SuiteOptions.trial_scale`` shrinks or
grows them uniformly.  A few large cells run fewer trials than their
neighbours because a single trial there costs millions of simulated steps; the
properties they check hold on every run, not only in aggregate.
"""

import functools
import math
import random
from dataclasses import dataclass
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .collectives import position_rank_probe, rank_probe
from .config import ACCEPTANCE_CONSTANTS, get_harness_config
from .harness import ExperimentResult, run_trials
from .logging_utils import get_logger
from .machine import ProcessorProgram, run_program
from .memory import PramVariant, WritePolicy, WriteSelector
from .models import AlgorithmKind, ExperimentConfig, GrowthFunction, Outcome
from .monte_carlo import estimate_size_probe, gauge_size_probe, labelled_bin_bits
from .primitives import verify_collision_probe
from .registry import ALGORITHMS
from .rng import ScriptedBits, derive_seed
from .statistics import ScalingModel, fit_scaling

logger = get_logger(__name__)

SUITE_SEED = 0x5EED_2024

LV_SIZES = (1, 2, 3, 4, 8, 16, 64, 256)
ESTIMATE_SIZES = (20, 24, 32, 48, 64, 96, 128, 192, 256)
GAUGE_SIZES = (1, 2, 3, 5, 8, 13, 20, 32, 50, 64, 100, 128, 200, 256)
# Largest n of the bit-scaling sweep for algorithms whose steps grow as n^2.
BITS_MAX_N = {"com-bnd-lv": 256, "com-bnd-mc": 256, "arb-bnd-mc": 512}

_OK = Outcome.CORRECT_PERMUTATION.value
_CAP = Outcome.CAP_EXCEEDED.value


@dataclass(frozen=True)
class SuiteOptions:
    trial_scale: float = 1.0
    jobs: int = 1
    seed: int = SUITE_SEED

    def trials(self, base: int) -> int:
        return max(1, int(round(base * self.trial_scale)))

    def seed_for(self, number: int) -> int:
        return derive_seed(self.seed, number)


@dataclass(frozen=True)
class CriterionOutcome:
    number: int
    key: str
    title: str
    passed: bool
    detail: str


@dataclass(frozen=True)
class Criterion:
    number: int
    key: str
    title: str
    check: Callable[[SuiteOptions], Tuple[bool, str]]

    def run(self, opts: SuiteOptions) -> CriterionOutcome:
        logger.info("Criterion %d (%s) started", self.number, self.key)
        passed, detail = self.check(opts)
        log = logger.info if passed else logger.warning
        log("Criterion %d (%s): %s. %s", self.number, self.key, "pass" if passed else "FAIL", detail)
        return CriterionOutcome(self.number, self.key, self.title, passed, detail)


def _experiment(
    opts: SuiteOptions,
    number: int,
    algo_id: str,
    n_values: Sequence[int],
    trials: int,
    **overrides,
) -> ExperimentResult:
    config = ExperimentConfig(
        algorithm_id=algo_id,
        n_values=tuple(n_values),
        trials=trials,
        seed=opts.seed_for(number),
        **overrides,
    )
    return run_trials(config, jobs=opts.jobs)


def _probe_states(
    program: ProcessorProgram,
    n: int,
    trials: int,
    seed: int,
) -> Iterable[object]:
    """First processor's final state of each seeded probe run on a Common PRAM."""
    policy = WritePolicy.common()
    for t in range(trials):
        states, _ = run_program(n, program, policy, derive_seed(seed, n, t))
        yield states[0]


def _ratios(values: Dict[int, float]) -> List[Tuple[int, float]]:
    ns = sorted(values)
    return [(n, values[2 * n] / values[n]) for n in ns if 2 * n in values and values[n] > 0]


def _summarize(problems: List[str], ok_detail: str) -> Tuple[bool, str]:
    if problems:
        shown = "; ".join(problems[:5])
        if len(problems) > 5:
            shown += f"; ... {len(problems) - 5} more"
        return False, shown
    return True, ok_detail


def check_lv_correctness(opts: SuiteOptions) -> Tuple[bool, str]:
    trials = opts.trials(200)
    max_cap = ACCEPTANCE_CONSTANTS["MAX_CAP_FRACTION"]
    rounds_c = ACCEPTANCE_CONSTANTS["COM_BND_LV_ROUNDS_C"]
    problems: List[str] = []
    cells = 0
    for algo_id, spec in ALGORITHMS.items():
        if spec.kind is not AlgorithmKind.LAS_VEGAS:
            continue
        selectors: List[Optional[WriteSelector]] = [None]
        if spec.variant is PramVariant.ARBITRARY:
            selectors = list(WriteSelector)
        for selector in selectors:
            result = _experiment(opts, 1, algo_id, LV_SIZES, trials, selector=selector)
            label = algo_id if selector is None else f"{algo_id}/{selector.value}"
            for n, s in result.stats.items():
                cells += 1
                bad = {k: v for k, v in s.outcome_counts.items() if k not in (_OK, _CAP)}
                if bad:
                    problems.append(f"{label} n={n}: {bad}")
                capped = s.outcome_counts.get(_CAP, 0)
                if capped > max_cap * s.trials:
                    problems.append(f"{label} n={n}: {capped}/{s.trials} capped")
                if algo_id == "com-bnd-lv" and n > 1 and s.mean_rounds > rounds_c * n * math.log2(n):
                    problems.append(f"{label} n={n}: mean rounds {s.mean_rounds:.0f} > {rounds_c:g} n lg n")
    return _summarize(problems, f"{cells} cells, {trials} trials each, all permutations")


def check_verify_collision_exact(opts: SuiteOptions) -> Tuple[bool, str]:
    policy = WritePolicy.common()
    problems: List[str] = []
    for m in range(1, 11):
        detections = 0
        for vector in range(1 << m):
            states, _ = run_program(
                m, verify_collision_probe, policy, seed=0,
                bit_sources=lambda idx, v=vector: ScriptedBits([(v >> idx) & 1]),
            )
            if len(set(states)) != 1:
                problems.append(f"m={m} coins={vector:b}: processors disagree")
            detections += bool(states[0])
        expected = 0 if m == 1 else (1 << m) - 2
        if detections != expected:
            problems.append(f"m={m}: {detections} detections, expected {expected}")
    return _summarize(problems, "all coin vectors for m = 1..10 match 2^m - 2")


def check_verify_collision_frequency(opts: SuiteOptions) -> Tuple[bool, str]:
    trials = opts.trials(10_000)
    detected = sum(
        bool(state) for state in _probe_states(verify_collision_probe, 2, trials, opts.seed_for(3))
    )
    frequency = detected / trials
    detail = f"{detected}/{trials} detections, frequency {frequency:.4f}"
    return abs(frequency - 0.5) <= 0.02, detail


def check_arb_bnd_lv_retries(opts: SuiteOptions) -> Tuple[bool, str]:
    result = _experiment(opts, 4, "arb-bnd-lv", (64,), opts.trials(2000), beta=4.0)
    s = result.stats[64]
    retried = sum(count for iters, count in s.retry_distribution.items() if iters > 1)
    fraction = retried / s.trials
    limit = ACCEPTANCE_CONSTANTS["MAX_RETRY_FRACTION"]
    return fraction <= limit, f"{retried}/{s.trials} trials retried ({fraction:.4f} <= {limit})"


def check_mc_termination(opts: SuiteOptions) -> Tuple[bool, str]:
    beta = 6.0
    problems: List[str] = []
    worst = 0.0
    for exponent in range(0, 11):
        n = 1 << exponent
        trials = opts.trials(200 if n <= 256 else 20)
        result = _experiment(opts, 5, "arb-bnd-mc", (n,), trials, beta=beta, cap_multiplier=None)
        bound = math.log2(beta * max(1, exponent)) + 2
        s = result.stats[n]
        most = max(s.retry_distribution)
        worst = max(worst, most / bound)
        if most > bound:
            problems.append(f"n={n}: {most} iterations > {bound:.2f}")
        named = s.outcome_counts.get(_OK, 0) + s.outcome_counts.get(Outcome.DUPLICATE_NAMES.value, 0)
        failed = s.trials - named
        if failed:
            problems.append(f"n={n}: {failed} trials ended without names")
    return _summarize(problems, f"max iterations / bound = {worst:.2f}")


def check_mc_error_rates(opts: SuiteOptions) -> Tuple[bool, str]:
    limit = ACCEPTANCE_CONSTANTS["MAX_ERROR_UPPER"]
    problems: List[str] = []
    uppers: List[str] = []
    for algo_id, spec in ALGORITHMS.items():
        if spec.kind is not AlgorithmKind.MONTE_CARLO:
            continue
        result = _experiment(opts, 6, algo_id, (64,), opts.trials(2000))
        rate = result.stats[64].error_rate
        uppers.append(f"{algo_id} {rate.successes}/{rate.trials} (upper {rate.upper:.4f})")
        if rate.upper > limit:
            problems.append(f"{algo_id}: Wilson upper {rate.upper:.4f} > {limit}")
    return _summarize(problems, ", ".join(uppers))


def check_estimate_size(opts: SuiteOptions) -> Tuple[bool, str]:
    trials = opts.trials(500)
    coverage_min = ACCEPTANCE_CONSTANTS["MIN_SIZE_COVERAGE"]
    problems: List[str] = []
    for n in ESTIMATE_SIZES:
        sizes = [e.size for e in _probe_states(estimate_size_probe, n, trials, opts.seed_for(7))]
        if max(sizes) >= 6 * n:
            problems.append(f"n={n}: size {max(sizes)} >= 6n")
        covered = sum(size >= n for size in sizes) / trials
        if n >= 32 and covered < coverage_min:
            problems.append(f"n={n}: size >= n in only {covered:.3f} of trials")
    return _summarize(problems, f"{len(ESTIMATE_SIZES)} sizes, {trials} trials each")


def check_gauge_size(opts: SuiteOptions) -> Tuple[bool, str]:
    beta = 3.0
    trials = opts.trials(500)
    coverage_min = ACCEPTANCE_CONSTANTS["MIN_SIZE_COVERAGE"]
    program = functools.partial(gauge_size_probe, beta=beta, growth=GrowthFunction.SUCCESSOR)
    problems: List[str] = []
    for n in GAUGE_SIZES:
        sizes = list(_probe_states(program, n, trials, opts.seed_for(8)))
        bound = max(4 * n, math.ceil(8 / beta))
        if max(sizes) > bound:
            problems.append(f"n={n}: size {max(sizes)} > {bound}")
        covered = sum(size >= n for size in sizes) / trials
        if n >= 32 and covered < coverage_min:
            problems.append(f"n={n}: size >= n in only {covered:.3f} of trials")
    return _summarize(problems, f"{len(GAUGE_SIZES)} sizes, {trials} trials each")


def check_log_time(opts: SuiteOptions) -> Tuple[bool, str]:
    sizes = tuple(1 << e for e in range(4, 13))
    result = _experiment(opts, 9, "com-unb-lv", sizes, opts.trials(100), beta=2.0)
    means = {n: s.mean_rounds for n, s in result.stats.items()}
    fit = fit_scaling(sorted(means.items()), ScalingModel.LOG)
    growth = means[4096] / means[256]
    ok = (
        fit.r_squared >= ACCEPTANCE_CONSTANTS["MIN_LOG_R_SQUARED"]
        and growth <= ACCEPTANCE_CONSTANTS["MAX_LOG_GROWTH_4096_256"]
    )
    return ok, f"R^2 = {fit.r_squared:.4f}, rounds(4096)/rounds(256) = {growth:.3f}"


def check_linear_time(opts: SuiteOptions) -> Tuple[bool, str]:
    sizes = tuple(1 << e for e in range(4, 11))
    result = _experiment(opts, 10, "arb-bnd-lv", sizes, opts.trials(30))
    low, high = ACCEPTANCE_CONSTANTS["LINEAR_RATIO_RANGE"]
    means = {n: s.mean_rounds for n, s in result.stats.items()}
    problems: List[str] = []
    shown: List[str] = []
    for n, ratio in _ratios(means):
        if n < 64:
            continue
        shown.append(f"{2 * n}/{n}: {ratio:.3f}")
        if not low <= ratio <= high:
            problems.append(f"rounds({2 * n})/rounds({n}) = {ratio:.3f}")
    return _summarize(problems, ", ".join(shown))


def _bits_shape(model: str, n: int) -> float:
    return float(ScalingModel(model).shape([n])[0])


def _staged_bits(algo_id: str, growth: GrowthFunction) -> Optional[Callable[[int], int]]:
    """Per-processor stage model of an algorithm whose bit cost steps with n, if it has one."""
    if algo_id != "arb-unb-mc":
        return None
    beta = ALGORITHMS[algo_id].default_beta
    return lambda n: labelled_bin_bits(n, beta, growth)


def check_bit_scaling(opts: SuiteOptions, algo_ids: Optional[Sequence[str]] = None) -> Tuple[bool, str]:
    constants = ACCEPTANCE_CONSTANTS["BITS_C"]
    models = ACCEPTANCE_CONSTANTS["BITS_MODEL"]
    max_ratio = ACCEPTANCE_CONSTANTS["MAX_BITS_DOUBLING_RATIO"]
    growth = GrowthFunction(ACCEPTANCE_CONSTANTS["BITS_GROWTH"])
    problems: List[str] = []
    worst: List[str] = []
    for algo_id, spec in ALGORITHMS.items():
        if algo_ids and algo_id not in algo_ids:
            continue
        top = BITS_MAX_N.get(algo_id, 1024)
        sizes = tuple(1 << e for e in range(6, 11) if 1 << e <= top)
        overrides = {"growth": growth} if spec.uses_growth else {}
        result = _experiment(opts, 11, algo_id, sizes, opts.trials(20), **overrides)
        model = models.get(algo_id, ScalingModel.NLOG.value)
        means = {n: s.mean_bits for n, s in result.stats.items()}
        c_seen = max(means[n] / _bits_shape(model, n) for n in sizes)
        worst.append(f"{algo_id} C={c_seen:.1f}")
        if c_seen > constants[algo_id]:
            problems.append(f"{algo_id}: bits/{model} reaches {c_seen:.2f} > {constants[algo_id]}")
        stages = _staged_bits(algo_id, growth)
        for n, ratio in _ratios(means):
            # Staged costs jump with the last stage; scale by the model's own ratio.
            limit = max_ratio if stages is None else max_ratio * stages(2 * n) / stages(n)
            if ratio > limit:
                problems.append(f"{algo_id}: bits({2 * n})/bits({n}) = {ratio:.3f} > {limit:.3f}")
    return _summarize(problems, ", ".join(worst))


def check_memory(opts: SuiteOptions) -> Tuple[bool, str]:
    sizes = (16, 64, 256)
    trials = opts.trials(50)
    problems: List[str] = []

    lv_c = ACCEPTANCE_CONSTANTS["ARB_UNB_LV_CELLS_C"]
    load_c = ACCEPTANCE_CONSTANTS["BIN_LOAD_C"]
    result = _experiment(opts, 12, "arb-unb-lv", sizes, trials)
    for r in result.reports:
        per_attempt = r.metrics.cells_touched / max(1, r.metrics.outer_iterations)
        bound = lv_c * math.ceil(r.n / math.log(r.n))
        if per_attempt > bound:
            problems.append(f"arb-unb-lv n={r.n} trial {r.trial}: {per_attempt:.0f} cells > {bound:.0f}")
        load = r.metrics.observations.get("max_bin_load", 0)
        if load > load_c * math.log(r.n):
            problems.append(f"arb-unb-lv n={r.n} trial {r.trial}: {load} balls in one bin")

    mc_c = ACCEPTANCE_CONSTANTS["COM_UNB_MC_CELLS_C"]
    result = _experiment(opts, 12, "com-unb-mc", sizes, trials, growth=GrowthFunction.SUCCESSOR)
    for r in result.reports:
        if r.metrics.cells_touched > mc_c * r.n:
            problems.append(f"com-unb-mc n={r.n} trial {r.trial}: {r.metrics.cells_touched} cells")

    for algo_id, spec in ALGORITHMS.items():
        if not spec.bounded:
            continue
        result = _experiment(opts, 12, algo_id, (4, 16, 64), opts.trials(20))
        for r in result.reports:
            if r.outcome is Outcome.MODEL_VIOLATION or r.metrics.cells_touched > spec.window:
                problems.append(
                    f"{algo_id} n={r.n} trial {r.trial}: {r.metrics.cells_touched} cells, {r.detail}"
                )
    return _summarize(problems, "all trials within their memory bounds")


def check_determinism(opts: SuiteOptions) -> Tuple[bool, str]:
    from .reporting import ReportingEngine

    engine = ReportingEngine()
    configs = (
        ("arb-bnd-lv", (8, 16), {"selector": WriteSelector.RANDOM}),
        ("com-unb-mc", (16, 32), {}),
        ("arb-unb-mc", (16,), {"growth": GrowthFunction.SUCCESSOR}),
    )
    problems: List[str] = []
    for algo_id, sizes, overrides in configs:
        first = _experiment(opts, 13, algo_id, sizes, opts.trials(20), **overrides)
        second = _experiment(opts, 13, algo_id, sizes, opts.trials(20), **overrides)
        if engine.csv_text(first) != engine.csv_text(second):
            problems.append(f"{algo_id}: CSV differs")
        if engine.json_text(first) != engine.json_text(second):
            problems.append(f"{algo_id}: JSON differs")
    return _summarize(problems, f"{len(configs)} configurations reproduced byte for byte")


def _rank_oracle_case(rng: random.Random) -> Tuple[int, List[int]]:
    m = rng.randint(1, 64)
    processors = rng.randint(1, 64)
    return m, [rng.randint(1, m) for _ in range(processors)]


def check_collectives_oracle(opts: SuiteOptions) -> Tuple[bool, str]:
    rng = random.Random(opts.seed_for(14))
    policy = WritePolicy.common()
    max_counter = 64
    problems: List[str] = []
    cases = opts.trials(1000)
    for case in range(cases):
        m, bins = _rank_oracle_case(rng)
        occupied = sorted(set(bins))

        states, _ = run_program(
            len(bins), functools.partial(rank_probe, m=m), policy, seed=case,
            bit_sources=lambda idx: ScriptedBits([bins[idx] - 1]),
        )
        for idx, (my_bin, count, rank, total) in enumerate(states):
            if count != len(occupied) or total != len(occupied):
                problems.append(f"case {case}: counted {count}/{total}, expected {len(occupied)}")
            if rank != occupied.index(my_bin) + 1:
                problems.append(f"case {case}: processor {idx} bin rank {rank}")

        counters: List[int] = []
        seen: Dict[int, int] = {}
        for b in bins:
            seen[b] = seen.get(b, 0) + 1
            counters.append(seen[b])
        tops = [int(counters[i] == seen[b]) for i, b in enumerate(bins)]
        positions = sorted(zip(bins, counters))
        states, _ = run_program(
            len(bins),
            functools.partial(position_rank_probe, m=m, max_counter=max_counter),
            policy, seed=case,
            bit_sources=lambda idx: ScriptedBits(
                ([bins[idx] - 1] if m > 1 else []) + [counters[idx] - 1, tops[idx]]
            ),
        )
        for idx, (position, rank, total) in enumerate(states):
            expected = positions.index((position.bin, position.counter)) + 1
            if rank != expected or total != len(bins):
                problems.append(f"case {case}: processor {idx} position rank {rank}, expected {expected}")
    return _summarize(problems, f"{cases} occupancy vectors agree with sequential scans")


CRITERIA: Tuple[Criterion, ...] = (
    Criterion(1, "lv-correctness", "Las Vegas algorithms always output permutations", check_lv_correctness),
    Criterion(2, "verify-exact", "Verify-Collision exhaustive detection count", check_verify_collision_exact),
    Criterion(3, "verify-frequency", "Verify-Collision detection frequency, m = 2", check_verify_collision_frequency),
    Criterion(4, "arb-bnd-lv-retries", "Arbitrary-Bounded-LV retry fraction", check_arb_bnd_lv_retries),
    Criterion(5, "mc-termination", "Arbitrary-Bounded-MC iteration bound", check_mc_termination),
    Criterion(6, "mc-error-rates", "Monte Carlo duplicate-name rates", check_mc_error_rates),
    Criterion(7, "estimate-size", "Estimate-Size bounds", check_estimate_size),
    Criterion(8, "gauge-size", "Gauge-Size-MC bounds", check_gauge_size),
    Criterion(9, "log-time", "Common-Unbounded-LV logarithmic time", check_log_time),
    Criterion(10, "linear-time", "Arbitrary-Bounded-LV linear time", check_linear_time),
    Criterion(11, "bit-scaling", "Random bits per algorithm", check_bit_scaling),
    Criterion(12, "memory", "Shared memory footprints", check_memory),
    Criterion(13, "determinism", "Byte-identical reports", check_determinism),
    Criterion(14, "collectives-oracle", "Counting and ranking against sequential scans", check_collectives_oracle),
)


def select_criteria(only: Optional[Sequence[str]] = None) -> List[Criterion]:
    """Criteria matching ``only`` (numbers or keys); all of them when empty.

    Raises:
        KeyError: for a selector that names no criterion.
    """
    if not only:
        return list(CRITERIA)
    chosen: List[Criterion] = []
    for token in only:
        token = str(token).strip()
        match = [c for c in CRITERIA if token in (str(c.number), c.key)]
        if not match:
            raise KeyError(f"unknown criterion {token!r}")
        if match[0] not in chosen:
            chosen.append(match[0])
    return sorted(chosen, key=lambda c: c.number)


def run_suite(
    trial_scale: float = 1.0,
    jobs: Optional[int] = None,
    only: Optional[Sequence[str]] = None,
    seed: int = SUITE_SEED,
) -> List[CriterionOutcome]:
    if trial_scale <= 0:
        raise ValueError(f"trial scale must be > 0, got {trial_scale}")
    jobs = jobs if jobs is not None else get_harness_config()["jobs"]
    opts = SuiteOptions(trial_scale=trial_scale, jobs=jobs, seed=seed)
    return [criterion.run(opts) for criterion in select_criteria(only)]
