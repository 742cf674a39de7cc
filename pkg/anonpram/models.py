"""Typed data models shared by the simulator, the algorithms and the harness.

Results are plain dataclasses with ``to_dict``/``from_dict`` so they can travel
through JSON reports and process pools unchanged.
"""

from __future__ import annotations

import hashlib
import math
from collections import Counter
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, Optional, Sequence, Tuple

from .config import HARNESS_DEFAULTS
from .memory import WriteSelector


def _sanitize_for_json(obj: Any) -> Any:
    """Recursively convert NaN/Inf floats to None and enums to their values."""
    if isinstance(obj, float) and (math.isnan(obj) or math.isinf(obj)):
        return None
    if isinstance(obj, Enum):
        return obj.value
    if isinstance(obj, dict):
        return {str(k): _sanitize_for_json(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_sanitize_for_json(v) for v in obj]
    return obj


class GrowthFunction(str, Enum):
    """How the unbounded Monte Carlo algorithms grow k between iterations."""

    SUCCESSOR = "successor"
    DOUBLING = "doubling"

    def apply(self, k: int) -> int:
        return k + 1 if self is GrowthFunction.SUCCESSOR else 2 * k


class AlgorithmKind(str, Enum):
    LAS_VEGAS = "las-vegas"
    MONTE_CARLO = "monte-carlo"


class Outcome(str, Enum):
    CORRECT_PERMUTATION = "CorrectPermutation"
    DUPLICATE_NAMES = "DuplicateNames"
    INVALID_NAMES = "InvalidNames"
    CAP_EXCEEDED = "CapExceeded"
    MODEL_VIOLATION = "ModelViolation"


@dataclass
class ExecutionMetrics:
    """Costs of one execution of the simulator."""

    rounds: int = 0
    random_bits: int = 0
    nominal_bits: int = 0
    per_processor_bits: Tuple[int, ...] = ()
    cells_touched: int = 0
    cells_allocated: int = 0
    outer_iterations: int = 0
    observations: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "rounds": self.rounds,
            "random_bits": self.random_bits,
            "nominal_bits": self.nominal_bits,
            "per_processor_bits": list(self.per_processor_bits),
            "cells_touched": self.cells_touched,
            "cells_allocated": self.cells_allocated,
            "outer_iterations": self.outer_iterations,
            "observations": dict(sorted(self.observations.items())),
        }

    @classmethod
    def from_dict(cls, d: dict) -> ExecutionMetrics:
        return cls(
            rounds=d.get("rounds", 0),
            random_bits=d.get("random_bits", 0),
            nominal_bits=d.get("nominal_bits", 0),
            per_processor_bits=tuple(d.get("per_processor_bits", ())),
            cells_touched=d.get("cells_touched", 0),
            cells_allocated=d.get("cells_allocated", 0),
            outer_iterations=d.get("outer_iterations", 0),
            observations=dict(d.get("observations", {})),
        )


@dataclass(frozen=True)
class NameAssignment:
    """Each processor's final name, collected by the simulator in processor order."""

    names: Tuple[int, ...]

    @classmethod
    def from_states(cls, states: Sequence[Any]) -> NameAssignment:
        return cls(tuple(int(s) for s in states))

    @property
    def n(self) -> int:
        return len(self.names)

    def is_permutation(self) -> bool:
        return sorted(self.names) == list(range(1, self.n + 1))

    def has_duplicates(self) -> bool:
        return len(set(self.names)) != len(self.names)

    def duplicate_count(self) -> int:
        """Processors whose name is shared with at least one other processor."""
        counts = Counter(self.names)
        return sum(c for c in counts.values() if c > 1)

    def is_contiguous(self) -> bool:
        """Names cover exactly [1..max] with max <= n, duplicates allowed."""
        if not self.names:
            return True
        distinct = set(self.names)
        top = max(distinct)
        return top <= self.n and distinct == set(range(1, top + 1))

    def digest(self) -> str:
        payload = ",".join(str(v) for v in self.names).encode("utf-8")
        return hashlib.sha256(payload).hexdigest()[:16]


@dataclass(frozen=True)
class SizeEstimate:
    size: int
    number_of_bins: int

    def to_dict(self) -> dict:
        return {"size": self.size, "number_of_bins": self.number_of_bins}


@dataclass(frozen=True)
class AlgoConfig:
    """Analysis parameters of one algorithm run.

    ``n_known`` is only handed to Las Vegas programs; Monte Carlo programs
    never see the processor count.
    """

    beta: float
    growth: Optional[GrowthFunction] = None
    n_known: Optional[int] = None

    def to_dict(self) -> dict:
        return _sanitize_for_json({
            "beta": self.beta,
            "growth": self.growth,
            "n_known": self.n_known,
        })


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything needed to reproduce a batch of trials."""

    algorithm_id: str
    n_values: Tuple[int, ...]
    trials: int
    seed: int
    beta: Optional[float] = None
    growth: Optional[GrowthFunction] = None
    selector: Optional[WriteSelector] = None
    cap_multiplier: Optional[float] = HARNESS_DEFAULTS["round_cap_multiplier"]
    strict: bool = HARNESS_DEFAULTS["strict"]

    def to_dict(self) -> dict:
        return _sanitize_for_json({
            "algorithm_id": self.algorithm_id,
            "n_values": list(self.n_values),
            "trials": self.trials,
            "seed": self.seed,
            "beta": self.beta,
            "growth": self.growth,
            "selector": self.selector,
            "cap_multiplier": self.cap_multiplier,
            "strict": self.strict,
        })

    @classmethod
    def from_dict(cls, d: dict) -> ExperimentConfig:
        growth = d.get("growth")
        selector = d.get("selector")
        return cls(
            algorithm_id=d["algorithm_id"],
            n_values=tuple(d["n_values"]),
            trials=d["trials"],
            seed=d["seed"],
            beta=d.get("beta"),
            growth=GrowthFunction(growth) if growth else None,
            selector=WriteSelector(selector) if selector else None,
            cap_multiplier=d.get("cap_multiplier", HARNESS_DEFAULTS["round_cap_multiplier"]),
            strict=d.get("strict", HARNESS_DEFAULTS["strict"]),
        )


@dataclass
class TrialReport:
    algorithm_id: str
    n: int
    trial: int
    seed: int
    outcome: Outcome
    metrics: ExecutionMetrics
    digest: str = ""
    duplicate_count: int = 0
    detail: str = ""

    @staticmethod
    def csv_columns() -> Tuple[str, ...]:
        return (
            "algorithm_id", "n", "trial", "seed", "outcome",
            "rounds", "bits_total", "cells_touched", "outer_iterations",
        )

    def to_row(self) -> dict:
        """One CSV row: the report schema columns in order."""
        return {
            "algorithm_id": self.algorithm_id,
            "n": self.n,
            "trial": self.trial,
            "seed": self.seed,
            "outcome": self.outcome.value,
            "rounds": self.metrics.rounds,
            "bits_total": self.metrics.random_bits,
            "cells_touched": self.metrics.cells_touched,
            "outer_iterations": self.metrics.outer_iterations,
        }

    def to_dict(self) -> dict:
        return {
            **self.to_row(),
            "metrics": self.metrics.to_dict(),
            "digest": self.digest,
            "duplicate_count": self.duplicate_count,
            "detail": self.detail,
        }

    @classmethod
    def from_dict(cls, d: dict) -> TrialReport:
        return cls(
            algorithm_id=d["algorithm_id"],
            n=d["n"],
            trial=d["trial"],
            seed=d["seed"],
            outcome=Outcome(d["outcome"]),
            metrics=ExecutionMetrics.from_dict(d.get("metrics", {})),
            digest=d.get("digest", ""),
            duplicate_count=d.get("duplicate_count", 0),
            detail=d.get("detail", ""),
        )


@dataclass(frozen=True)
class ProportionEstimate:
    successes: int
    trials: int
    point: float
    lower: float
    upper: float

    def to_dict(self) -> dict:
        return {
            "successes": self.successes,
            "trials": self.trials,
            "point": self.point,
            "lower": self.lower,
            "upper": self.upper,
        }


@dataclass
class AggregateStats:
    """Per-n summary of a batch of trials."""

    n: int
    trials: int
    mean_rounds: float
    max_rounds: int
    mean_bits: float
    max_bits: int
    total_bits: int
    max_cells_touched: int
    error_rate: ProportionEstimate
    outcome_counts: Dict[str, int] = field(default_factory=dict)
    retry_distribution: Dict[int, int] = field(default_factory=dict)
    mean_duplicates: float = 0.0
    mean_nominal_bits: float = 0.0
    observations: Dict[str, int] = field(default_factory=dict)

    def to_dict(self) -> dict:
        return _sanitize_for_json({
            "n": self.n,
            "trials": self.trials,
            "mean_rounds": self.mean_rounds,
            "max_rounds": self.max_rounds,
            "mean_bits": self.mean_bits,
            "max_bits": self.max_bits,
            "total_bits": self.total_bits,
            "max_cells_touched": self.max_cells_touched,
            "error_rate": self.error_rate.to_dict(),
            "outcome_counts": dict(sorted(self.outcome_counts.items())),
            "retry_distribution": {
                str(k): v for k, v in sorted(self.retry_distribution.items())
            },
            "mean_duplicates": self.mean_duplicates,
            "mean_nominal_bits": self.mean_nominal_bits,
            "observations": dict(sorted(self.observations.items())),
        })
