"""Coverage middleware for the penalty-delay study"""

from collections.abc import Callable
from dataclasses import dataclass
from enum import Enum
import logging
from typing import Any

import numpy as np

logger = logging.getLogger(__name__)


class CoverTarget(str, Enum):
    """What a cover-study run waits for."""

    ALL_COVERED = "all_covered"
    OPTIMUM_FOUND = "optimum_found"


@dataclass
class CoverageReport:
    """
    Iteration indices observed by a coverage hook.

    Attributes:
        covered: Number of vertices seen in some initial solution so far
        all_covered_at: First iteration whose initial solutions covered V
        optimum_at: First iteration whose best size reached the optimum
    """

    covered: int = 0
    all_covered_at: int | None = None
    optimum_at: int | None = None


def create_coverage_middleware(
    n: int,
    target: CoverTarget = CoverTarget.ALL_COVERED,
    optimum: int | None = None,
) -> tuple[Callable[[dict[str, Any]], dict[str, Any]], CoverageReport]:
    """
    Create a hook tracking which vertices the initial solutions have covered

    The hook marks the vertices of each iteration's initial solution, records the
    first iteration at which every vertex has been covered (and, with an
    optimum, the first iteration at which the best size reached it), and sets
    ``record["stop"]`` once the target is met.

    Args:
        n: Number of vertices
        target: Event that ends the run
        optimum: Known optimal size, required for OPTIMUM_FOUND

    Returns:
        (hook, report) where report is updated in place
    """
    if target is CoverTarget.OPTIMUM_FOUND and optimum is None:
        raise ValueError("optimum_found target needs the optimal size")
    seen = np.zeros(n, dtype=bool)
    report = CoverageReport()

    def coverage_middleware(record: dict[str, Any]) -> dict[str, Any]:
        """
        Update coverage from one iteration record

        Args:
            record: ILPS iteration record with ``initial_solution``

        Returns:
            Record with ``covered`` set and ``stop`` when the target is met
        """
        iteration = record["iteration"]
        members = np.fromiter(record.get("initial_solution", ()), dtype=np.int64)
        seen[members] = True
        report.covered = int(seen.sum())
        record["covered"] = report.covered

        if report.all_covered_at is None and report.covered == n:
            report.all_covered_at = iteration
            logger.debug(f"All {n} vertices covered at iteration {iteration}")
        if optimum is not None and report.optimum_at is None and record["best_size"] <= optimum:
            report.optimum_at = iteration
            logger.debug(f"Optimum {optimum} reached at iteration {iteration}")

        if target is CoverTarget.ALL_COVERED and report.all_covered_at is not None:
            record["stop"] = True
        elif target is CoverTarget.OPTIMUM_FOUND and report.optimum_at is not None:
            record["stop"] = True
        return record

    return coverage_middleware, report
