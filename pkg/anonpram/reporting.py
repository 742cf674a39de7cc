# anonpram/reporting.py

import json
import math
import sys
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import pandas as pd
from rich.console import Console
from rich.table import Table

from .errors import ConfigError
from .harness import ExperimentResult
from .layout_strategy import LayoutStrategy
from .logging_utils import get_logger
from .statistics import ScalingFit

logger = get_logger(__name__)

_SUMMARY_COLUMNS = {
    "trials": "trials",
    "mean_rounds": "mean rounds",
    "max_rounds": "max rounds",
    "mean_bits": "mean bits",
    "max_bits": "max bits",
    "max_cells_touched": "max cells",
    "error_point": "error rate",
    "error_upper": "error upper (Wilson)",
    "outcome_counts": "outcomes",
    "retry_distribution": "outer iterations",
}


def _normalize_floats(obj: Any) -> Any:
    """Fixed float formatting (12 significant digits) so JSON output is byte-stable."""
    if isinstance(obj, float):
        if math.isnan(obj) or math.isinf(obj):
            return None
        return float(f"{obj:.12g}")
    if isinstance(obj, dict):
        return {k: _normalize_floats(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_normalize_floats(v) for v in obj]
    return obj


def _safe_path(raw: str) -> Path:
    path = Path(raw)
    if ".." in path.parts:
        logger.error("Output path invalid or insecure: %s", raw)
        raise ConfigError(f"output path may not contain '..': {raw}")
    return path.resolve()


class ReportingEngine:
    """
    Turns an ExperimentResult into the per-trial CSV, the aggregate JSON and a
    console summary.  Console output goes to standard error, so CSV written to
    standard output stays machine-readable.
    """

    def __init__(
        self,
        layout_strategy: Optional[LayoutStrategy] = None,
        console: Optional[Console] = None,
    ) -> None:
        self.logger = logger
        self.console = console or Console(stderr=True)

        if layout_strategy is None:
            from .panel_layout import PanelLayoutStrategy
            layout_strategy = PanelLayoutStrategy(self.console)

        self.layout_strategy = layout_strategy

    def csv_text(self, result: ExperimentResult) -> str:
        return result.to_frame().to_csv(index=False, lineterminator="\n")

    def json_text(self, result: ExperimentResult) -> str:
        payload = _normalize_floats(result.to_dict())
        return json.dumps(payload, sort_keys=True, indent=2) + "\n"

    def write_reports(self, result: ExperimentResult, out: Optional[str] = None) -> Optional[Path]:
        """Write the CSV to ``out`` (standard output when None) and the JSON aggregate next to it.

        Returns the JSON path, or None when writing to standard output.

        Raises:
            ConfigError: ``out`` contains '..' or ends in '.json'.
        """
        csv_text = self.csv_text(result)
        if not out:
            sys.stdout.write(csv_text)
            sys.stdout.flush()
            return None

        csv_path = _safe_path(out)
        if csv_path.suffix.lower() == ".json":
            logger.error("Output path collides with the JSON aggregate: %s", out)
            raise ConfigError(f"--out names the trial CSV; the JSON is written next to it, got {out}")
        json_path = csv_path.with_suffix(".json")
        csv_path.parent.mkdir(parents=True, exist_ok=True)
        csv_path.write_text(csv_text, encoding="utf-8")
        json_path.write_text(self.json_text(result), encoding="utf-8")
        self.logger.info("Trial CSV saved to %s, aggregate JSON to %s", csv_path, json_path)
        return json_path

    def summary_frame(self, result: ExperimentResult) -> pd.DataFrame:
        rows: Dict[int, Dict[str, Any]] = {}
        for n, s in sorted(result.stats.items()):
            rows[n] = {
                "trials": s.trials,
                "mean_rounds": s.mean_rounds,
                "max_rounds": s.max_rounds,
                "mean_bits": s.mean_bits,
                "max_bits": s.max_bits,
                "max_cells_touched": s.max_cells_touched,
                "error_point": s.error_rate.point,
                "error_upper": s.error_rate.upper,
                "outcome_counts": dict(sorted(s.outcome_counts.items())),
                "retry_distribution": dict(sorted(s.retry_distribution.items())),
            }
        df = pd.DataFrame.from_dict(rows, orient="index")
        if df.empty:
            return df
        df.index.name = "n"
        return df[list(_SUMMARY_COLUMNS)].rename(columns=_SUMMARY_COLUMNS)

    def render_summary(self, result: ExperimentResult) -> None:
        title = f"{result.config.algorithm_id} (seed {result.config.seed})"
        self.layout_strategy.render(self.summary_frame(result), title=title)

    def render_fit(self, fit: ScalingFit, metric: str) -> None:
        shape = {
            "log": "lg n",
            "linear": "n",
            "nlog": "n lg n",
            "log2": "lg^2 n",
            "nlog2": "n lg^2 n",
        }[fit.model.value]
        self.console.print(
            f"[bold]{metric}[/bold] ~ {fit.intercept:.4g} + {fit.slope:.4g} * {shape}"
            f"   (R^2 = {fit.r_squared:.4f}, {fit.points} points)"
        )

    def render_criteria(self, outcomes: Sequence[Any]) -> None:
        """One row per acceptance criterion: number, title, verdict, detail."""
        table = Table(title="Acceptance suite")
        table.add_column("#", justify="right", style="cyan")
        table.add_column("criterion", style="bold")
        table.add_column("result")
        table.add_column("detail")
        for outcome in outcomes:
            verdict = "[green]PASS[/green]" if outcome.passed else "[red]FAIL[/red]"
            table.add_row(str(outcome.number), outcome.title, verdict, outcome.detail)
        self.console.print(table)
        failed: List[Any] = [o for o in outcomes if not o.passed]
        if failed:
            self.logger.warning("%d acceptance criteria failed", len(failed))
