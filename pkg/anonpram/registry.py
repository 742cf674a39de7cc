"""
registry.py

Stable algorithm ids mapped onto program bodies, PRAM variants, memory windows
and default parameters.  The CLI, the harness and the report schema address
algorithms only through these ids.
"""

import functools
import math
from dataclasses import dataclass
from typing import Callable, Dict, Optional

from .config import get_algo_config
from .errors import ConfigError
from .las_vegas import (
    arbitrary_bounded_lv,
    arbitrary_unbounded_lv,
    common_bounded_lv,
    common_unbounded_lv,
)
from .machine import ProcessorProgram
from .math_utils import beta_ln, beta_lg, ceil_lg, ceil_positive, int_power_ceil, n_over_ln
from .memory import PramVariant, WritePolicy, WriteSelector
from .models import AlgoConfig, AlgorithmKind, GrowthFunction
from .monte_carlo import (
    arbitrary_bounded_mc,
    arbitrary_unbounded_mc,
    common_bounded_mc,
    common_unbounded_mc,
)

# Largest value a label or Pad cell may have to hold.
MAX_CELL_VALUE = (1 << 63) - 1

RoundEstimate = Callable[[int, float], float]


def _arb_bnd_lv_rounds(n: int, beta: float) -> float:
    return 4 * n + 2


def _arb_unb_lv_rounds(n: int, beta: float) -> float:
    passes = math.ceil(4 * math.log(max(n, 2))) + 1
    return 6 * passes + 2 * ceil_lg(n_over_ln(n)) + 2


def _com_bnd_lv_rounds(n: int, beta: float) -> float:
    verifications = beta_ln(n, beta)
    return 2 * n * (5 * verifications + 5) + 8


def _com_unb_lv_rounds(n: int, beta: float) -> float:
    bins = ceil_positive((beta + 1) * n)
    return 5 * ceil_lg(n) + 2 * ceil_lg(bins) + 2


def _com_bnd_mc_rounds(n: int, beta: float) -> float:
    k = ceil_lg(n) + 1
    estimate = sum(2 * (j << j) + 2 for j in range(3, max(k, 3) + 1))
    bins = max(k, 3) << max(k, 3)
    size = 3 << max(k, 3)
    one_pass = 3 * bins + n * (5 * beta_lg(size, beta) + 2) + 3
    return estimate + 2 * one_pass


def _com_unb_mc_rounds(n: int, beta: float) -> float:
    k = ceil_lg(ceil_positive(beta * n)) + 2
    size = math.ceil((2 << k) / beta)
    return (k + 1) ** 2 + 10 * beta_lg(size, beta) + 2 * ceil_lg(3 * size) + 8


@dataclass(frozen=True)
class AlgorithmSpec:
    """One registered naming algorithm.

    ``window`` is the number of shared cells a bounded-memory algorithm is
    confined to; None means unbounded memory.  ``expected_rounds`` None means
    the algorithm terminates on every random stream and runs without a cap.
    """

    algo_id: str
    title: str
    variant: PramVariant
    kind: AlgorithmKind
    body: Callable
    window: Optional[int] = None
    uses_growth: bool = False
    min_beta: float = 0.0
    expected_rounds: Optional[RoundEstimate] = None

    @property
    def bounded(self) -> bool:
        return self.window is not None

    @property
    def default_beta(self) -> float:
        return get_algo_config(self.algo_id)["beta"]

    def build_config(
        self,
        n: int,
        beta: Optional[float] = None,
        growth: Optional[GrowthFunction] = None,
    ) -> AlgoConfig:
        """Validate the parameters for a run on ``n`` processors and bind them."""
        if n < 1:
            raise ConfigError(f"n must be >= 1, got {n}")
        merged = get_algo_config(self.algo_id, {"beta": beta, "growth": growth})
        beta = float(merged["beta"])
        if beta <= self.min_beta:
            raise ConfigError(f"{self.algo_id} needs beta > {self.min_beta:g}, got {beta:g}")
        growth = merged["growth"]
        if growth is not None and not self.uses_growth:
            raise ConfigError(f"{self.algo_id} takes no growth function")
        if self.uses_growth:
            growth = GrowthFunction(growth) if growth is not None else GrowthFunction.DOUBLING
        if self.kind is AlgorithmKind.LAS_VEGAS and self.algo_id.startswith("arb-"):
            if int_power_ceil(n, beta) > MAX_CELL_VALUE:
                raise ConfigError(
                    f"{self.algo_id}: n**beta = {n}**{beta:g} does not fit a 64-bit cell"
                )
        n_known = n if self.kind is AlgorithmKind.LAS_VEGAS else None
        return AlgoConfig(beta=beta, growth=growth, n_known=n_known)

    def program(self, cfg: AlgoConfig) -> ProcessorProgram:
        """The processor program with its parameters bound."""
        if self.kind is AlgorithmKind.LAS_VEGAS:
            return functools.partial(self.body, n=cfg.n_known, beta=cfg.beta)
        if self.uses_growth:
            return functools.partial(self.body, beta=cfg.beta, growth=cfg.growth)
        return functools.partial(self.body, beta=cfg.beta)

    def policy(self, selector: Optional[WriteSelector] = None) -> WritePolicy:
        if self.variant is PramVariant.COMMON:
            if selector is not None:
                raise ConfigError(
                    f"{self.algo_id} runs on a Common PRAM; --selector applies to Arbitrary only"
                )
            return WritePolicy.common()
        return WritePolicy.arbitrary(selector or WriteSelector.FIRST)

    def round_cap(self, n: int, beta: float, multiplier: Optional[float]) -> Optional[int]:
        if self.expected_rounds is None or multiplier is None:
            return None
        return max(64, math.ceil(multiplier * self.expected_rounds(n, beta)))


ALGORITHMS: Dict[str, AlgorithmSpec] = {
    spec.algo_id: spec
    for spec in (
        AlgorithmSpec(
            "arb-bnd-lv", "Arbitrary-Bounded-LV", PramVariant.ARBITRARY,
            AlgorithmKind.LAS_VEGAS, arbitrary_bounded_lv, window=2,
            expected_rounds=_arb_bnd_lv_rounds,
        ),
        AlgorithmSpec(
            "arb-unb-lv", "Arbitrary-Unbounded-LV", PramVariant.ARBITRARY,
            AlgorithmKind.LAS_VEGAS, arbitrary_unbounded_lv,
            expected_rounds=_arb_unb_lv_rounds,
        ),
        AlgorithmSpec(
            "com-bnd-lv", "Common-Bounded-LV", PramVariant.COMMON,
            AlgorithmKind.LAS_VEGAS, common_bounded_lv, window=5,
            expected_rounds=_com_bnd_lv_rounds,
        ),
        AlgorithmSpec(
            "com-unb-lv", "Common-Unbounded-LV", PramVariant.COMMON,
            AlgorithmKind.LAS_VEGAS, common_unbounded_lv, min_beta=1.0,
            expected_rounds=_com_unb_lv_rounds,
        ),
        AlgorithmSpec(
            "arb-bnd-mc", "Arbitrary-Bounded-MC", PramVariant.ARBITRARY,
            AlgorithmKind.MONTE_CARLO, arbitrary_bounded_mc, window=3,
        ),
        AlgorithmSpec(
            "arb-unb-mc", "Arbitrary-Unbounded-MC", PramVariant.ARBITRARY,
            AlgorithmKind.MONTE_CARLO, arbitrary_unbounded_mc, uses_growth=True,
        ),
        AlgorithmSpec(
            "com-bnd-mc", "Common-Bounded-MC", PramVariant.COMMON,
            AlgorithmKind.MONTE_CARLO, common_bounded_mc, window=6,
            expected_rounds=_com_bnd_mc_rounds,
        ),
        AlgorithmSpec(
            "com-unb-mc", "Common-Unbounded-MC", PramVariant.COMMON,
            AlgorithmKind.MONTE_CARLO, common_unbounded_mc, uses_growth=True,
            expected_rounds=_com_unb_mc_rounds,
        ),
    )
}


def get_algorithm(algo_id: str) -> AlgorithmSpec:
    try:
        return ALGORITHMS[algo_id]
    except KeyError:
        known = ", ".join(ALGORITHMS)
        raise ConfigError(f"Unknown algorithm id {algo_id!r}; known ids: {known}") from None
