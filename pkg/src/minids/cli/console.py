"""Terminal output for the minids commands.

Two channels share one Rich console: decorated messages for people, and
``print_raw`` for DIMACS text, solution listings, JSON and CSV that other
tools read.
"""

from collections.abc import Sequence
from typing import Any

from rich.console import Console
from rich.table import Table

EPSILON = "ε"

AGGREGATE_HEADERS = ("Instance", "n", "p/dens.", "k", "δ", "ν", "Min", "Avg", "Max", "TTB")

_MARKS = {
    "error": ("❌", "bold red"),
    "success": ("✅", "bold green"),
}


def format_ttb(seconds: float) -> str:
    """Time-to-best for tables: ε below 0.1 s, else one decimal."""
    return EPSILON if seconds < 0.1 else f"{seconds:.1f}"


class MinidsConsole:
    """Rich console wrapper used by every minids command."""

    def __init__(self, width: int | None = None):
        self.console = Console(width=width)

    @property
    def is_terminal(self) -> bool:
        return self.console.is_terminal

    def print_message(self, message: str, style: str = "white") -> None:
        self.console.print(message, style=style)

    def print_raw(self, text: str) -> None:
        """
        Print machine-readable text exactly as given

        Markup, highlighting, emoji codes and wrapping are all disabled; a
        trailing newline in ``text`` is not doubled.
        """
        self.console.print(text.rstrip("\n"), markup=False, highlight=False, soft_wrap=True, emoji=False)

    def _marked(self, kind: str, message: str) -> None:
        mark, style = _MARKS[kind]
        self.console.print(f"{mark} {message}", style=style, markup=False)

    def print_error(self, message: str) -> None:
        self._marked("error", message)

    def print_success(self, message: str) -> None:
        self._marked("success", message)

    def print_table(self, columns: Sequence[str], rows: Sequence[Sequence[Any]], title: str | None = None) -> None:
        """
        Print rows under ``columns``

        The first column is left-aligned and the rest right-aligned; None
        cells show as "-".
        """
        table = Table(title=title)
        for index, column in enumerate(columns):
            table.add_column(column, justify="left" if index == 0 else "right")
        for row in rows:
            table.add_row(*("-" if cell is None else str(cell) for cell in row))
        self.console.print(table)

    def print_aggregate_table(self, rows: Sequence[Any], title: str | None = None) -> None:
        """Print per-cell Min/Avg/Max sizes and mean time-to-best."""
        cells = [
            (
                row.instance,
                row.n,
                row.p_or_density,
                row.k,
                row.delta,
                row.nu,
                row.min,
                f"{row.avg:.1f}",
                row.max,
                format_ttb(row.mean_ttb),
            )
            for row in rows
        ]
        self.print_table(AGGREGATE_HEADERS, cells, title=title)
