# anonpram/panel_layout.py

import pandas as pd
from rich.panel import Panel
from rich.table import Table

from .layout_strategy import LayoutStrategy


class PanelLayoutStrategy(LayoutStrategy):
    """Default: one panel per processor count, listing that row's statistics."""

    def render_rows(self, df_summary: pd.DataFrame, title: str) -> None:
        if title:
            self.console.print(f"[bold magenta]==== {title} ====[/bold magenta]")

        for n, row in df_summary.iterrows():
            stats = Table(box=None, show_header=False, expand=False)
            stats.add_column("Statistic", style="bold", no_wrap=True)
            stats.add_column("Value", style="white")
            for col in df_summary.columns:
                stats.add_row(str(col), self.format_value(row[col]))
            self.console.print(
                Panel(stats, title=f"[cyan]n = {n}[/cyan]", border_style="blue", expand=False)
            )


class TableLayoutStrategy(LayoutStrategy):
    """Compact alternative: the whole summary as one table, one row per n."""

    def render_rows(self, df_summary: pd.DataFrame, title: str) -> None:
        table = Table(title=title or None)
        table.add_column("n", justify="right", style="cyan")
        for col in df_summary.columns:
            table.add_column(str(col), justify="right")
        for n, row in df_summary.iterrows():
            table.add_row(str(n), *(self.format_value(v) for v in row.tolist()))
        self.console.print(table)
