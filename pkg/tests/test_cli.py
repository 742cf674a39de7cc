"""
tests/test_cli.py

Command-line surface: list, run, sweep and suite, their exit codes and
outputs.
"""

import logging
import re
from unittest.mock import patch

from anonpram.acceptance import CriterionOutcome
from anonpram.cli import main
from anonpram.errors import DegenerateFit, RoundCapExceeded
from anonpram.models import TrialReport
from anonpram.panel_layout import TableLayoutStrategy
from anonpram.registry import ALGORITHMS

HEADER = ",".join(TrialReport.csv_columns())


def test_list(runner):
    result = runner.invoke(main, ["list"])
    assert result.exit_code == 0
    for algo_id in ALGORITHMS:
        assert algo_id in result.output


class TestRun:
    def test_csv_on_stdout(self, runner):
        result = runner.invoke(
            main, ["--suppress-logs", "run", "--algo", "arb-bnd-lv", "--n", "4", "--trials", "3", "--seed", "7",
                   "--no-summary"],
        )
        assert result.exit_code == 0, result.output
        assert HEADER in result.output
        assert result.output.count("arb-bnd-lv,4,") == 3

    def test_out_writes_csv_and_json(self, runner, tmp_path):
        out = tmp_path / "result.csv"
        result = runner.invoke(
            main, ["run", "--algo", "com-unb-lv", "--n", "4", "--n", "8", "--trials", "2",
                   "--seed", "1", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert out.read_text(encoding="utf-8").startswith(HEADER)
        assert out.with_suffix(".json").exists()

    def test_selector_on_common_is_usage_error(self, runner):
        result = runner.invoke(
            main, ["run", "--algo", "com-bnd-lv", "--n", "4", "--trials", "1", "--seed", "1",
                   "--selector", "first"],
        )
        assert result.exit_code == 2
        assert "Common" in result.output

    def test_beta_out_of_range_is_usage_error(self, runner):
        result = runner.invoke(
            main, ["run", "--algo", "com-unb-lv", "--n", "4", "--trials", "1", "--seed", "1",
                   "--beta", "0.5"],
        )
        assert result.exit_code == 2

    def test_label_overflow_is_usage_error(self, runner):
        result = runner.invoke(
            main, ["run", "--algo", "arb-unb-lv", "--n", "1000", "--trials", "1", "--seed", "1",
                   "--beta", "40"],
        )
        assert result.exit_code == 2
        assert "64-bit" in result.output

    def test_missing_and_malformed_options(self, runner):
        base = ["run", "--algo", "arb-bnd-lv", "--n", "4", "--trials", "1"]
        assert runner.invoke(main, base).exit_code == 2
        assert runner.invoke(main, base + ["--seed", "-1"]).exit_code == 2
        assert runner.invoke(main, base + ["--seed", str(2 ** 64)]).exit_code == 2
        assert runner.invoke(main, ["run", "--algo", "arb-bnd-lv", "--n", "0", "--trials", "1",
                                    "--seed", "1"]).exit_code == 2
        assert runner.invoke(main, ["run", "--algo", "arb-best-lv", "--n", "4", "--trials", "1",
                                    "--seed", "1"]).exit_code == 2

    def test_runtime_failure_exits_one(self, runner):
        with patch("anonpram.cli.run_trials", side_effect=RoundCapExceeded(10)):
            result = runner.invoke(
                main, ["run", "--algo", "arb-bnd-lv", "--n", "4", "--trials", "1", "--seed", "1"],
            )
        assert result.exit_code == 1

    def test_parent_path_rejected(self, runner):
        result = runner.invoke(
            main, ["run", "--algo", "arb-bnd-lv", "--n", "2", "--trials", "1", "--seed", "1",
                   "--out", "../x.csv"],
        )
        assert result.exit_code == 2

    def test_json_out_path_rejected(self, runner, tmp_path):
        out = tmp_path / "results.json"
        result = runner.invoke(
            main, ["run", "--algo", "arb-bnd-lv", "--n", "2", "--trials", "1", "--seed", "1",
                   "--out", str(out)],
        )
        assert result.exit_code == 2
        assert "JSON" in result.output
        assert not out.exists()

    def test_debug_flag(self, runner):
        runner.invoke(main, ["--debug", "list"])
        assert logging.getLogger("anonpram").level == logging.DEBUG


class TestSweep:
    def test_fit_printed(self, runner):
        result = runner.invoke(
            main, ["sweep", "--algo", "com-unb-lv", "--n", "8", "--n", "16", "--n", "32",
                   "--trials", "2", "--seed", "3", "--model", "log"],
        )
        assert result.exit_code == 0, result.output
        assert "n,mean_rounds" in result.output
        assert "R^2" in result.output

    def test_summary_uses_one_table(self, runner):
        args = ["--suppress-logs", "sweep", "--algo", "com-unb-lv", "--n", "8", "--n", "16", "--n", "32",
                "--trials", "1", "--seed", "3"]
        result = runner.invoke(main, args)
        assert result.exit_code == 0, result.output
        assert "com-unb-lv (seed 3)" in result.output
        assert "n = 8" not in result.output
        with patch.object(TableLayoutStrategy, "render_rows", autospec=True) as mock_rows:
            runner.invoke(main, args)
        mock_rows.assert_called_once()
        assert list(mock_rows.call_args.args[1].index) == [8, 16, 32]

    def test_needs_three_sizes(self, runner):
        with patch("anonpram.cli.run_trials") as mock_run:
            result = runner.invoke(
                main, ["sweep", "--algo", "com-unb-lv", "--n", "8", "--n", "16", "--n", "8",
                       "--trials", "2", "--seed", "3"],
            )
        assert result.exit_code == 2
        assert "three distinct" in result.output
        mock_run.assert_not_called()

    def test_degenerate_fit_exits_one(self, runner):
        with patch("anonpram.cli.fit_scaling", side_effect=DegenerateFit("flat")):
            result = runner.invoke(
                main, ["sweep", "--algo", "arb-bnd-lv", "--n", "2", "--n", "3", "--n", "4",
                       "--trials", "1", "--seed", "3", "--metric", "cells_touched"],
            )
        assert result.exit_code == 1


class TestSuite:
    def test_unknown_criterion(self, runner):
        result = runner.invoke(main, ["suite", "--only", "nonsense"])
        assert result.exit_code == 2

    def test_failures_exit_one(self, runner):
        outcomes = [
            CriterionOutcome(2, "verify-exact", "Verify-Collision", True, "ok"),
            CriterionOutcome(3, "verify-frequency", "Frequency", False, "off"),
        ]
        with patch("anonpram.cli.run_suite", return_value=outcomes) as mock_suite:
            result = runner.invoke(main, ["suite", "--trial-scale", "0.5", "--only", "2", "--only", "3"])
        assert result.exit_code == 1
        assert "2,verify-exact,pass" in result.output
        assert "3,verify-frequency,fail" in result.output
        mock_suite.assert_called_once_with(trial_scale=0.5, jobs=1, only=("2", "3"))

    def test_passing_criterion(self, runner):
        result = runner.invoke(main, ["--suppress-logs", "suite", "--only", "verify-exact"])
        assert result.exit_code == 0, result.output
        assert "2,verify-exact,pass" in result.output


def test_run_ten_trials_all_correct(runner):
    result = runner.invoke(
        main, ["--suppress-logs", "run", "--algo", "arb-bnd-lv", "--n", "8", "--trials", "10", "--seed", "7",
               "--no-summary"],
    )
    assert result.exit_code == 0, result.output
    rows = [line for line in result.stdout.splitlines() if line.startswith("arb-bnd-lv,8,")]
    assert len(rows) == 10
    assert all(",CorrectPermutation," in row for row in rows)


RUN_FLAGS = {
    "--algo", "--n", "--trials", "--seed", "--beta", "--growth", "--selector",
    "--jobs", "--cap-multiplier", "--no-strict", "--out", "--summary", "--no-summary", "--help",
}


def test_run_help_matches_documented_options(runner):
    result = runner.invoke(main, ["run", "--help"])
    assert result.exit_code == 0
    assert set(re.findall(r"(?<![\w-])--[a-z][a-z-]*", result.output)) == RUN_FLAGS


def test_help_lists_exactly_the_documented_commands(runner):
    result = runner.invoke(main, ["--help"])
    assert result.exit_code == 0
    assert set(main.commands) == {"list", "run", "sweep", "suite"}
    for name in main.commands:
        assert name in result.output
