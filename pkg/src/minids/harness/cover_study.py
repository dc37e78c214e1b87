"""
Penalty-delay study: how many ILPS iterations until the initial solutions have
covered every vertex, or until the optimum is found, as a function of delta.

Runs that never reach the target within the iteration or time limit are
censored and left out of the mean.
"""

from collections.abc import Sequence
from dataclasses import dataclass, field
import logging

import numpy as np

from minids.core.graph import Graph
from minids.core.rng import derive_seed
from minids.middleware.coverage_middleware import CoverTarget, create_coverage_middleware
from minids.search.ilps import IlpsConfig, ilps

logger = logging.getLogger(__name__)


@dataclass
class CoverStudyResult:
    """
    Attributes:
        target: What each run waited for
        iterations: First iteration reaching the target per run (None if censored)
        mean_iterations: Mean over uncensored runs, None if every run was censored
        censored: Number of runs that missed the target
    """

    target: CoverTarget
    iterations: list[int | None] = field(default_factory=list)
    mean_iterations: float | None = None
    censored: int = 0


@dataclass
class DelayRow:
    delta: int
    runs: int
    mean_iterations: float | None
    censored: int


def cover_study(
    graph: Graph,
    config: IlpsConfig,
    target: CoverTarget = CoverTarget.ALL_COVERED,
    runs: int = 10,
    optimum: int | None = None,
) -> CoverStudyResult:
    """
    Mean first iteration at which ILPS reaches the target

    Run i uses seed ``config.seed + i``. Each run stops as soon as its target is
    met, otherwise at the config's iteration or time limit.

    Args:
        graph: Input graph
        config: ILPS parameters (termination limits bound censored runs)
        target: ALL_COVERED or OPTIMUM_FOUND
        runs: Number of seeded runs
        optimum: Optimal size, required for OPTIMUM_FOUND

    Returns:
        CoverStudyResult
    """
    if runs < 1:
        raise ValueError(f"runs must be positive, got {runs}")
    result = CoverStudyResult(target=target)
    for run in range(runs):
        run_config = config.model_copy(update={"seed": derive_seed(config.seed, run)})
        hook, report = create_coverage_middleware(graph.n, target=target, optimum=optimum)
        ilps(graph, run_config, hooks=[hook])
        reached = report.all_covered_at if target is CoverTarget.ALL_COVERED else report.optimum_at
        result.iterations.append(reached)
        if reached is None:
            result.censored += 1

    reached_runs = [it for it in result.iterations if it is not None]
    if reached_runs:
        result.mean_iterations = float(np.mean(reached_runs))
    logger.info(
        f"Cover study ({target.value}) delta={config.delta}: mean={result.mean_iterations} "
        f"censored={result.censored}/{runs}"
    )
    return result


def delay_study(
    graph: Graph,
    deltas: Sequence[int],
    config: IlpsConfig,
    target: CoverTarget = CoverTarget.ALL_COVERED,
    runs: int = 10,
    optimum: int | None = None,
) -> list[DelayRow]:
    """One cover_study per penalty delay, in the order given."""
    rows = []
    for delta in deltas:
        study = cover_study(
            graph,
            config.model_copy(update={"delta": delta}),
            target=target,
            runs=runs,
            optimum=optimum,
        )
        rows.append(DelayRow(delta, runs, study.mean_iterations, study.censored))
    return rows
