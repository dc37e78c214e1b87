"""
Per-run records and their CSV/JSON writers.

The CSV schema is fixed; JSON carries the same keys plus ``initial_size``.
"""

from collections.abc import Iterable, Sequence
import csv
from dataclasses import asdict, dataclass, fields
import io
import json
import logging
from pathlib import Path
from typing import Any, TextIO

logger = logging.getLogger(__name__)

CSV_COLUMNS = (
    "instance",
    "n",
    "p_or_density",
    "k",
    "delta",
    "nu",
    "run",
    "seed",
    "best_size",
    "ttb_s",
    "iterations",
)

AGGREGATE_COLUMNS = (
    "instance",
    "n",
    "p_or_density",
    "k",
    "delta",
    "nu",
    "runs",
    "min",
    "avg",
    "max",
    "mean_ttb_s",
    "mean_initial_size",
)

COVER_COLUMNS = (
    "instance",
    "n",
    "k",
    "delta",
    "nu",
    "target",
    "runs",
    "mean_iterations",
    "censored",
)


@dataclass
class RunRecord:
    """
    One run of one configuration on one instance.

    ``delta`` and ``nu`` are None for single local-search runs. ``iterations``
    counts ILPS iterations, or applied moves for a single local search.
    """

    instance: str
    n: int
    p_or_density: float
    k: int
    delta: int | None
    nu: int | None
    run: int
    seed: int
    best_size: int
    ttb_s: float
    iterations: int
    initial_size: int = 0

    def to_row(self) -> dict[str, Any]:
        """CSV row (exactly CSV_COLUMNS)."""
        data = asdict(self)
        return {column: data[column] for column in CSV_COLUMNS}

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "RunRecord":
        names = {f.name for f in fields(cls)}
        return cls(**{key: value for key, value in data.items() if key in names})


def _write_rows(stream: TextIO, columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> None:
    writer = csv.DictWriter(stream, fieldnames=list(columns), lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow({key: "" if value is None else value for key, value in row.items()})


def records_to_csv(records: Iterable[RunRecord]) -> str:
    """Per-run records as CSV text."""
    buffer = io.StringIO()
    _write_rows(buffer, CSV_COLUMNS, (record.to_row() for record in records))
    return buffer.getvalue()


def rows_to_csv(columns: Sequence[str], rows: Iterable[dict[str, Any]]) -> str:
    """Arbitrary dict rows as CSV text with the given columns."""
    buffer = io.StringIO()
    _write_rows(buffer, columns, ({column: row.get(column) for column in columns} for row in rows))
    return buffer.getvalue()


def records_to_json(records: Iterable[RunRecord]) -> str:
    """Per-run records as a JSON array."""
    return json.dumps([record.to_dict() for record in records], indent=2)


def records_from_json(text: str) -> list[RunRecord]:
    """Read records written by records_to_json."""
    return [RunRecord.from_dict(item) for item in json.loads(text)]


def write_text(path: str | Path, text: str) -> None:
    """Write an output file, creating parent directories."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(text, encoding="utf-8")
    logger.info(f"Wrote {path}")
