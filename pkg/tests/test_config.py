"""
tests/test_config.py

Default parameters and override merging.
"""

import pytest

from anonpram.config import (
    ACCEPTANCE_CONSTANTS,
    DEFAULT_BETAS,
    HARNESS_DEFAULTS,
    get_algo_config,
    get_harness_config,
)


def test_algo_defaults():
    assert get_algo_config("arb-bnd-lv") == {"beta": 4.0, "growth": None}


def test_algo_overrides_skip_none():
    merged = get_algo_config("com-unb-mc", {"beta": None, "growth": "successor"})
    assert merged == {"beta": DEFAULT_BETAS["com-unb-mc"], "growth": "successor"}
    assert get_algo_config("com-unb-mc", {"beta": 7.5})["beta"] == 7.5


def test_unknown_algorithm():
    with pytest.raises(KeyError):
        get_algo_config("arb-unb-xx")


def test_harness_defaults_are_copied():
    cfg = get_harness_config()
    cfg["jobs"] = 99
    assert HARNESS_DEFAULTS["jobs"] == 1
    assert get_harness_config({"confidence": 0.95})["confidence"] == 0.95
    assert get_harness_config({"confidence": 0.95})["round_cap_multiplier"] == 64.0


def test_bit_constants_cover_every_algorithm():
    assert set(ACCEPTANCE_CONSTANTS["BITS_C"]) == set(DEFAULT_BETAS)
