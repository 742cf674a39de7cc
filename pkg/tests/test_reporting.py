"""
tests/test_reporting.py

Report files, byte stability and the console layouts.
"""

import json
import logging

import pandas as pd
import pytest
from rich.console import Console

from anonpram.errors import ConfigError
from anonpram.harness import run_trials
from anonpram.models import ExperimentConfig, TrialReport
from anonpram.panel_layout import PanelLayoutStrategy, TableLayoutStrategy
from anonpram.reporting import ReportingEngine, _normalize_floats


@pytest.fixture(scope="module")
def result():
    return run_trials(ExperimentConfig("arb-bnd-lv", n_values=(4, 8), trials=3, seed=12))


def _recording_engine(layout_cls=PanelLayoutStrategy, width=140):
    console = Console(record=True, width=width)
    return ReportingEngine(layout_strategy=layout_cls(console), console=console), console


class TestReportFiles:
    def test_csv_and_json_written(self, result, tmp_path):
        out = tmp_path / "runs" / "arb.csv"
        json_path = ReportingEngine().write_reports(result, str(out))
        assert json_path == out.with_suffix(".json").resolve()

        frame = pd.read_csv(out)
        assert tuple(frame.columns) == TrialReport.csv_columns()
        assert len(frame) == 6
        assert set(frame["outcome"]) == {"CorrectPermutation"}

        payload = json.loads(json_path.read_text(encoding="utf-8"))
        assert payload["config"]["algorithm_id"] == "arb-bnd-lv"
        assert set(payload["stats"]) == {"4", "8"}
        assert payload["totals"]["trials"] == 6

    def test_stdout_when_no_path(self, result, capsys):
        assert ReportingEngine().write_reports(result, None) is None
        captured = capsys.readouterr()
        assert captured.out.splitlines()[0] == ",".join(TrialReport.csv_columns())
        assert len(captured.out.splitlines()) == 7

    def test_parent_references_rejected(self, result):
        with pytest.raises(ConfigError):
            ReportingEngine().write_reports(result, "../escape.csv")

    def test_json_suffix_rejected(self, result, tmp_path):
        out = tmp_path / "results.JSON"
        with pytest.raises(ConfigError, match="JSON"):
            ReportingEngine().write_reports(result, str(out))
        assert list(tmp_path.iterdir()) == []

    def test_output_is_byte_stable(self, result):
        engine = ReportingEngine()
        again = run_trials(result.config)
        assert engine.csv_text(result) == engine.csv_text(again)
        assert engine.json_text(result) == engine.json_text(again)

    def test_normalize_floats(self):
        assert _normalize_floats({"a": [0.1 + 0.2, float("nan")]}) == {"a": [0.3, None]}


class TestConsoleOutput:
    def test_summary_frame(self, result):
        frame = ReportingEngine().summary_frame(result)
        assert list(frame.index) == [4, 8]
        assert "mean rounds" in frame.columns
        assert frame.loc[4, "trials"] == 3

    def test_panels(self, result):
        engine, console = _recording_engine()
        engine.render_summary(result)
        text = console.export_text()
        assert "arb-bnd-lv" in text
        assert "n = 4" in text
        assert "n = 8" in text
        assert "CorrectPermutation: 3" in text

    def test_table_layout(self, result):
        engine, console = _recording_engine(TableLayoutStrategy, width=300)
        engine.render_summary(result)
        text = console.export_text()
        assert "mean rounds" in text

    def test_empty_summary(self):
        console = Console(record=True)
        PanelLayoutStrategy(console).render(pd.DataFrame())
        assert "No trials" in console.export_text()

    def test_criteria_table(self, caplog):
        from anonpram.acceptance import CriterionOutcome

        engine, console = _recording_engine()
        with caplog.at_level(logging.WARNING, logger="anonpram"):
            engine.render_criteria([
                CriterionOutcome(2, "verify-exact", "Verify-Collision", True, "fine"),
                CriterionOutcome(9, "log-time", "Log time", False, "too slow"),
            ])
        text = console.export_text()
        assert "PASS" in text
        assert "FAIL" in text
        assert "1 acceptance criteria failed" in caplog.text
