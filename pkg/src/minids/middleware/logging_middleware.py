"""Logging middleware: per-iteration ILPS trace records"""

from collections.abc import Callable
from datetime import datetime
import json
import logging
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)

TRACE_FIELDS = (
    "iteration",
    "size_after_local_search",
    "size_after_plateau",
    "best_size",
    "elapsed",
    "kick_size",
)


def create_logging_middleware(
    log_file: str | None = None,
    trace_file: str | None = None,
    log_level: int = logging.DEBUG,
    run_label: str | None = None,
) -> Callable[[dict[str, Any]], dict[str, Any]]:
    """
    Create a hook that logs every ILPS iteration

    Args:
        log_file: Optional file receiving the text log of this module
        trace_file: Optional JSON-lines file, one record per iteration
        log_level: Level for the per-iteration log line (default: DEBUG)
        run_label: Optional label (instance/seed) added to every trace record

    Returns:
        Hook taking and returning the iteration record
    """
    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)

        file_handler = logging.FileHandler(log_path)
        file_handler.setLevel(log_level)
        file_handler.setFormatter(
            logging.Formatter("%(asctime)s - %(name)s - %(levelname)s - %(message)s")
        )
        logger.addHandler(file_handler)
        logger.setLevel(log_level)

    if trace_file:
        Path(trace_file).parent.mkdir(parents=True, exist_ok=True)

    def logging_middleware(record: dict[str, Any]) -> dict[str, Any]:
        """
        Log one iteration record

        Args:
            record: ILPS iteration record

        Returns:
            Unmodified record (logging is observational)
        """
        try:
            logger.log(
                log_level,
                f"Iteration {record.get('iteration')}: "
                f"ls={record.get('size_after_local_search')} "
                f"plateau={record.get('size_after_plateau')} best={record.get('best_size')}",
            )
            if record.get("improved"):
                logger.info(
                    f"New best size {record.get('best_size')} at iteration {record.get('iteration')}"
                )
            if trace_file:
                _write_trace_record(trace_file, record, run_label)
        except Exception as e:
            # Tracing must never break a run
            logger.error(f"Error in logging middleware: {e}", exc_info=True)

        return record

    return logging_middleware


def _write_trace_record(trace_file: str, record: dict[str, Any], run_label: str | None) -> None:
    """
    Append one JSON line with the scalar trace fields

    Args:
        trace_file: Path to the JSON-lines file
        record: Iteration record
        run_label: Optional run label
    """
    entry: dict[str, Any] = {"timestamp": datetime.now().isoformat()}
    if run_label:
        entry["run"] = run_label
    entry.update({key: record[key] for key in TRACE_FIELDS if key in record})
    with open(trace_file, "a", encoding="utf-8") as f:
        f.write(json.dumps(entry) + "\n")
