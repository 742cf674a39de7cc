"""
tests/test_acceptance.py

Criterion selection and the cheap criteria; the full-scale suite runs only
with --run-slow.
"""

import pytest

from anonpram.acceptance import (
    CRITERIA,
    SuiteOptions,
    check_bit_scaling,
    check_collectives_oracle,
    check_verify_collision_exact,
    run_suite,
    select_criteria,
)


def test_fourteen_numbered_criteria():
    assert [c.number for c in CRITERIA] == list(range(1, 15))
    assert len({c.key for c in CRITERIA}) == 14


def test_select_by_number_or_key():
    chosen = select_criteria(["log-time", "2", "9"])
    assert [c.number for c in chosen] == [2, 9]
    assert select_criteria(None) == list(CRITERIA)


def test_select_unknown():
    with pytest.raises(KeyError):
        select_criteria(["15"])


def test_trial_scaling():
    opts = SuiteOptions(trial_scale=0.1)
    assert opts.trials(200) == 20
    assert opts.trials(3) == 1
    assert opts.seed_for(4) != opts.seed_for(5)


def test_rejects_non_positive_scale():
    with pytest.raises(ValueError):
        run_suite(trial_scale=0)


def test_verify_collision_exhaustive():
    passed, detail = check_verify_collision_exact(SuiteOptions())
    assert passed, detail


def test_collectives_agree_with_scans():
    passed, detail = check_collectives_oracle(SuiteOptions(trial_scale=0.05))
    assert passed, detail


def test_run_suite_reports_outcomes():
    outcomes = run_suite(only=["verify-exact"])
    assert len(outcomes) == 1
    assert outcomes[0].number == 2
    assert outcomes[0].passed


@pytest.mark.slow
@pytest.mark.parametrize("criterion", CRITERIA, ids=[c.key for c in CRITERIA])
def test_full_scale_criterion(criterion):
    outcome = criterion.run(SuiteOptions(jobs=4))
    assert outcome.passed, outcome.detail


def test_bit_scaling_on_a_small_algorithm():
    passed, detail = check_bit_scaling(SuiteOptions(trial_scale=0.1), algo_ids=["com-unb-lv"])
    assert passed, detail
    assert detail.startswith("com-unb-lv C=")


@pytest.mark.slow
def test_labelled_bin_bits_scale_at_full_size():
    passed, detail = check_bit_scaling(SuiteOptions(jobs=4), algo_ids=["arb-unb-mc"])
    assert passed, detail
