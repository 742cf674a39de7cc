# anonpram/layout_strategy.py

import abc

import numpy as np
import pandas as pd
from rich.console import Console

from .math_utils import custom_float_format


class LayoutStrategy(abc.ABC):
    """
    How a per-n experiment summary reaches the console.

    ``render`` draws the summary frame (index n, one column per statistic).
    Subclasses only decide the arrangement; the empty case and the cell
    formatting are shared.
    """

    def __init__(self, console: Console) -> None:
        self.console = console

    def render(self, df_summary: pd.DataFrame, title: str = "") -> None:
        if df_summary.empty:
            self.console.print("[yellow]No trials to summarize.[/yellow]")
            return
        self.render_rows(df_summary, title)

    @abc.abstractmethod
    def render_rows(self, df_summary: pd.DataFrame, title: str) -> None:
        """Draw a non-empty summary."""

    @staticmethod
    def format_value(raw_val) -> str:
        """Cell text; dicts and sequences flatten to comma-separated text, NaN to blank."""
        if isinstance(raw_val, dict):
            return ", ".join(f"{k}: {v}" for k, v in raw_val.items())
        if isinstance(raw_val, (np.ndarray, pd.Series)):
            return ", ".join(map(str, raw_val.tolist()))
        if isinstance(raw_val, (list, tuple)):
            return ", ".join(map(str, raw_val))
        if pd.isnull(raw_val):
            return ""
        return custom_float_format(raw_val)
