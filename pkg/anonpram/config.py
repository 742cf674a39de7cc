# anonpram/config.py

from typing import Any, Dict, Optional

# Default analysis parameter per algorithm id.  Each value is the smallest
# constant the correctness analysis accepts at error exponent a ~ 2:
#   arb-bnd-lv  beta >= a + 2
#   arb-unb-lv  labels from [1, n^beta], same collision bound as arb-bnd-lv
#   com-bnd-lv  beta ln n verifications per bin
#   com-unb-lv  any beta > 1
#   arb-bnd-mc  beta > 2 + a
#   arb-unb-mc  beta > 4a + 7 near a = 1/2, rounded up
#   com-bnd-mc  beta lg size verifications per bin
#   com-unb-mc  2 beta lg size verifications per attempt
DEFAULT_BETAS: Dict[str, float] = {
    "arb-bnd-lv": 4.0,
    "arb-unb-lv": 4.0,
    "com-bnd-lv": 6.0,
    "com-unb-lv": 2.0,
    "arb-bnd-mc": 6.0,
    "arb-unb-mc": 9.0,
    "com-bnd-mc": 6.0,
    "com-unb-mc": 4.0,
}

HARNESS_DEFAULTS: Dict[str, Any] = {
    "round_cap_multiplier": 64.0,
    "confidence": 0.99,
    "strict": True,
    "jobs": 1,
}

# Constants the acceptance suite asserts against.
ACCEPTANCE_CONSTANTS: Dict[str, Any] = {
    "MAX_RETRY_FRACTION": 0.01,
    "MAX_CAP_FRACTION": 0.01,
    "MAX_ERROR_UPPER": 0.01,
    "MIN_SIZE_COVERAGE": 0.99,
    "MIN_LOG_R_SQUARED": 0.9,
    "MAX_LOG_GROWTH_4096_256": 2.0,
    "LINEAR_RATIO_RANGE": (1.6, 2.4),
    "MAX_BITS_DOUBLING_RATIO": 2.6,
    # Per-algorithm C in mean bits <= C * shape(n); the shape is n lg n except
    # where BITS_MODEL says otherwise.
    "BITS_C": {
        "arb-bnd-lv": 8.0,
        "arb-unb-lv": 12.0,
        "com-bnd-lv": 24.0,
        "com-unb-lv": 12.0,
        "arb-bnd-mc": 32.0,
        "arb-unb-mc": 12.0,
        "com-bnd-mc": 24.0,
        "com-unb-mc": 32.0,
    },
    # Successor growth draws Theta(lg^2 n) label bits per processor.
    "BITS_MODEL": {"arb-unb-mc": "nlog2"},
    # Growth used by the bit-scaling criterion; Doubling jumps k by powers of 2.
    "BITS_GROWTH": "successor",
    # arb-unb-lv: cells touched <= C * (n / ln n) per attempt, tree included.
    "ARB_UNB_LV_CELLS_C": 8.0,
    # com-unb-mc (successor): cells touched <= C * n.
    "COM_UNB_MC_CELLS_C": 64.0,
    # arb-unb-lv: max balls per bin <= C * ln n.
    "BIN_LOAD_C": 4.0,
    # com-bnd-lv: mean rounds <= C * n * lg n.
    "COM_BND_LV_ROUNDS_C": 128.0,
}


def get_algo_config(algo_id: str, overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Return the default parameters of ``algo_id`` merged with overrides (None values ignored)."""
    if algo_id not in DEFAULT_BETAS:
        raise KeyError(f"Unknown algorithm id: {algo_id!r}")
    merged: Dict[str, Any] = {"beta": DEFAULT_BETAS[algo_id], "growth": None}
    if overrides:
        merged.update({k: v for k, v in overrides.items() if v is not None})
    return merged


def get_harness_config(overrides: Optional[Dict[str, Any]] = None) -> Dict[str, Any]:
    """Return harness defaults merged with optional overrides."""
    if not overrides:
        return HARNESS_DEFAULTS.copy()
    return {**HARNESS_DEFAULTS, **overrides}
