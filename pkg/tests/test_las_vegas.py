"""
tests/test_las_vegas.py

Las Vegas naming: every terminated run is a permutation of [1..n], bounded
variants stay inside their windows, and scripted collisions force retries.
"""

import functools
import math

import pytest

from anonpram.config import ACCEPTANCE_CONSTANTS
from anonpram.harness import run_trials
from anonpram.las_vegas import (
    arbitrary_bounded_lv,
    arbitrary_unbounded_lv,
    common_bounded_lv,
    common_unbounded_lv,
    restored_bin_count,
)
from anonpram.machine import SimulationLimits, run_program
from anonpram.memory import WritePolicy, WriteSelector
from anonpram.models import ExperimentConfig, Outcome
from anonpram.registry import ALGORITHMS

LV_IDS = [algo_id for algo_id, spec in ALGORITHMS.items() if spec.kind.value == "las-vegas"]


@pytest.mark.parametrize("algo_id", LV_IDS)
def test_always_a_permutation(algo_id):
    config = ExperimentConfig(algo_id, n_values=(1, 2, 3, 5, 16), trials=6, seed=2024)
    result = run_trials(config)
    for n, stats in result.stats.items():
        assert stats.outcome_counts == {Outcome.CORRECT_PERMUTATION.value: 6}, (algo_id, n)


@pytest.mark.parametrize("selector", list(WriteSelector))
@pytest.mark.parametrize("algo_id", ["arb-bnd-lv", "arb-unb-lv"])
def test_arbitrary_selectors(algo_id, selector):
    config = ExperimentConfig(algo_id, n_values=(7,), trials=4, seed=5, selector=selector)
    result = run_trials(config)
    assert result.stats[7].outcome_counts == {Outcome.CORRECT_PERMUTATION.value: 4}


@pytest.mark.parametrize("algo_id", ["arb-bnd-lv", "com-bnd-lv"])
def test_bounded_window(algo_id):
    spec = ALGORITHMS[algo_id]
    result = run_trials(ExperimentConfig(algo_id, n_values=(4, 12), trials=3, seed=9))
    for report in result.reports:
        assert report.outcome is Outcome.CORRECT_PERMUTATION
        assert report.metrics.cells_touched <= spec.window


def test_arbitrary_bounded_retries_on_equal_values(scripted):
    # Both processors draw 6 from [1, 16] first, then 8 and 10.
    program = functools.partial(arbitrary_bounded_lv, n=2, beta=4.0)
    states, metrics = run_program(
        2, program, WritePolicy.arbitrary(WriteSelector.FIRST), seed=0,
        limits=SimulationLimits(window=2),
        bit_sources=scripted([[5, 7], [5, 9]]),
    )
    assert states == [1, 2]
    assert metrics.outer_iterations == 2
    assert metrics.rounds == 20


def test_arbitrary_bounded_linear_rounds():
    program = functools.partial(arbitrary_bounded_lv, n=32, beta=4.0)
    _, metrics = run_program(32, program, WritePolicy.arbitrary(), seed=77)
    assert metrics.rounds == metrics.outer_iterations * (4 * 32 + 2)


def test_common_unbounded_retries_when_bins_collide(scripted):
    # Both start in bin 1 of 6 and the first re-draw lands them there again;
    # the second attempt moves the second processor to bin 2.
    program = functools.partial(common_unbounded_lv, n=2, beta=2.0)
    states, metrics = run_program(
        2, program, WritePolicy.common(), seed=0,
        bit_sources=scripted([[0, 0, 0, 0, 0], [0, 1, 0, 1, 1]]),
    )
    assert states == [1, 2]
    assert metrics.outer_iterations == 2


def test_arbitrary_unbounded_records_bin_load():
    result = run_trials(ExperimentConfig("arb-unb-lv", n_values=(64,), trials=3, seed=1))
    bound = ACCEPTANCE_CONSTANTS["BIN_LOAD_C"] * math.log(64)
    assert 1 <= result.stats[64].observations["max_bin_load"] <= bound


def test_single_processor_names_itself():
    for algo_id in LV_IDS:
        result = run_trials(ExperimentConfig(algo_id, n_values=(1,), trials=1, seed=0))
        assert result.reports[0].outcome is Outcome.CORRECT_PERMUTATION


def test_arbitrary_unbounded_retries_on_equal_labels(scripted):
    # Same bin and label first: both take position (1, 1), so the largest rank
    # is 1 and the attempt repeats; then bins 1 and 2.
    program = functools.partial(arbitrary_unbounded_lv, n=2, beta=4.0)
    states, metrics = run_program(
        2, program, WritePolicy.arbitrary(WriteSelector.FIRST), seed=0,
        bit_sources=scripted([[0, 5, 0, 0], [0, 5, 1, 1]]),
    )
    assert states == [1, 2]
    assert metrics.outer_iterations == 2


class TestCommonBoundedScripted:
    """n = 2, beta = 6: five verifications per occupied bin, stage one over 2 bins."""

    COINS = [0, 0, 0, 0, 0]

    def _run(self, scripted, words):
        program = functools.partial(common_bounded_lv, n=2, beta=6.0)
        return run_program(
            2, program, WritePolicy.common(), seed=0,
            limits=SimulationLimits(window=5),
            bit_sources=scripted(words),
        )

    def test_detected_collision_moves_to_restored_stage(self, scripted):
        # Both in bin 1 with differing first coins; the restored stage has 5 bins.
        states, metrics = self._run(scripted, [
            [0, 0, 0, 0, 0, 0, 0, *self.COINS],
            [0, 1, 0, 0, 0, 0, 1, *self.COINS],
        ])
        assert states == [1, 2]
        assert metrics.outer_iterations == 1
        assert metrics.observations["restored_stages"] == 1

    def test_missed_collision_repeats_the_attempt(self, scripted):
        # Equal coins hide the collision, both claim name 1 and Last-Name ends at 1.
        states, metrics = self._run(scripted, [
            [0, *self.COINS, 0, *self.COINS],
            [0, *self.COINS, 1, *self.COINS],
        ])
        assert states == [1, 2]
        assert metrics.outer_iterations == 2
        assert "restored_stages" not in metrics.observations


class TestRestoredBinCount:
    def test_floor_binds_for_small_n(self):
        assert restored_bin_count(64, 6.0) == 25

    def test_large_n_uses_n_over_beta_ln_n(self):
        # beta = 1: ceil(ln 64) = 5 verifications, ceil(64 / 5) = 13 bins.
        assert restored_bin_count(64, 1.0) == 13

    def test_unclamped_stages_still_name_everyone(self):
        config = ExperimentConfig("com-bnd-lv", n_values=(64,), trials=3, seed=21, beta=1.0)
        result = run_trials(config)
        assert result.stats[64].outcome_counts == {Outcome.CORRECT_PERMUTATION.value: 3}
        assert result.stats[64].observations["restored_stages"] >= 1


def test_common_bounded_rounds_within_n_lg_n():
    c = ACCEPTANCE_CONSTANTS["COM_BND_LV_ROUNDS_C"]
    result = run_trials(ExperimentConfig("com-bnd-lv", n_values=(16, 32), trials=3, seed=13))
    for n, stats in result.stats.items():
        assert stats.mean_rounds <= c * n * math.log2(n)
