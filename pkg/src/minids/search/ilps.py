"""
Iterated local search with plateau search and penalty-guided kicks.

Each iteration runs local search and plateau search from the current solution,
updates the incumbent S* when the result is no larger, then kicks: a few
low-penalty vertices R outside S* are forced in, their neighbors leave, and the
rest is filled greedily. Penalties count how often each vertex has been in an
initial solution and are halved every ``delta`` iterations, steering kicks
towards vertices that rarely start a local search.

Example:
    config = IlpsConfig(k=2, delta=40, nu=1, time_limit=None, max_iterations=5000, seed=7)
    result = ilps(gen_grid(10, 10), config)
    result.best_size        # 24
"""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import asdict, dataclass
from enum import Enum
import logging
import math
import time
from typing import Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

from minids.core.graph import Graph
from minids.core.rng import MAX_SEED, split_rng
from minids.core.solution import SolutionState
from minids.search.neighborhood import local_search
from minids.search.plateau import plateau_search

logger = logging.getLogger(__name__)

IterationHook = Callable[[dict[str, Any]], dict[str, Any]]


class InitMethod(str, Enum):
    """How the first solution is built."""

    GREEDY = "greedy"
    RANDOM = "random"


class IlpsConfig(BaseModel):
    """
    Parameters of one ILPS run.

    At least one of ``time_limit`` and ``max_iterations`` must be set; when both
    are, whichever is reached first ends the run.
    """

    model_config = ConfigDict(frozen=True)

    k: int = Field(default=2, ge=2, le=3)
    delta: int = Field(default=64, ge=1)
    nu: int = Field(default=3, ge=1)
    time_limit: float | None = Field(default=10.0, gt=0)
    max_iterations: int | None = Field(default=None, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)
    init: InitMethod = InitMethod.GREEDY
    plateau_gate: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _check_termination(self) -> "IlpsConfig":
        if self.time_limit is None and self.max_iterations is None:
            raise ValueError("set time_limit, max_iterations or both")
        return self


@dataclass
class PenaltyState:
    """
    Per-vertex penalties.

    Attributes:
        rho: Penalty per vertex (int64 array)
        delay: Halving period delta
        iteration: Number of update_penalty calls so far
    """

    rho: np.ndarray
    delay: int
    iteration: int = 0

    @classmethod
    def zeros(cls, n: int, delay: int) -> "PenaltyState":
        if delay < 1:
            raise ValueError(f"Penalty delay must be positive, got {delay}")
        return cls(rho=np.zeros(n, dtype=np.int64), delay=delay)


def update_penalty(penalty: PenaltyState, solution: Iterable[int]) -> None:
    """
    Count one more appearance for every vertex of the new initial solution

    Every ``delay``-th call also maps each penalty to floor(min(rho, delay) / 2).

    Args:
        penalty: Penalty state, modified in place
        solution: Vertices of the solution the next local search starts from
    """
    penalty.iteration += 1
    members = np.fromiter(solution, dtype=np.int64)
    penalty.rho[members] += 1
    if penalty.iteration % penalty.delay == 0:
        np.minimum(penalty.rho, penalty.delay, out=penalty.rho)
        penalty.rho //= 2


def select_forced_vertices(
    graph: Graph,
    incumbent: Sequence[int],
    penalty: PenaltyState,
    nu: int,
    rng: np.random.Generator,
) -> list[int]:
    """
    Choose the independent set R a kick forces into the solution

    The first vertex is a uniformly random minimum-penalty vertex outside S*.
    After each pick the trials continue with probability (nu - 1) / nu; a later
    trial samples three vertices (fewer if the pool is smaller) from outside
    S*, R and N(R) and keeps a minimum-penalty one, ties broken uniformly.

    Args:
        graph: Input graph
        incumbent: S*
        penalty: Current penalties
        nu: Expected number of forced vertices
        rng: Random generator

    Returns:
        R, possibly empty when S* is all of V
    """
    blocked = np.zeros(graph.n, dtype=bool)
    blocked[np.fromiter(incumbent, dtype=np.int64)] = True
    outside = np.flatnonzero(~blocked)
    if outside.size == 0:
        return []
    rho = penalty.rho

    lowest = outside[rho[outside] == rho[outside].min()]
    first = int(rng.choice(lowest))
    forced = [first]
    blocked[first] = True
    blocked[list(graph.adjacency[first])] = True

    stop_probability = 1.0 / nu
    while rng.random() >= stop_probability:
        pool = np.flatnonzero(~blocked)
        if pool.size == 0:
            break
        sample = rng.choice(pool, size=min(3, pool.size), replace=False)
        penalties = rho[sample]
        best = sample[penalties == penalties.min()]
        pick = int(best[0]) if best.size == 1 else int(rng.choice(best))
        forced.append(pick)
        blocked[pick] = True
        blocked[list(graph.adjacency[pick])] = True
    return forced


def rebuild_with_forced(graph: Graph, incumbent: Sequence[int], forced: Sequence[int]) -> SolutionState:
    """Solution (S* minus N(R)) plus R, completed by the max-degree greedy."""
    near = np.zeros(graph.n, dtype=bool)
    for r in forced:
        near[list(graph.adjacency[r])] = True
    kept = [s for s in incumbent if not near[s]]
    state = SolutionState.from_vertices(graph, [*kept, *forced])
    state.greedy_max_degree()
    return state


def kick(
    graph: Graph,
    incumbent: Sequence[int],
    penalty: PenaltyState,
    nu: int,
    rng: np.random.Generator,
) -> SolutionState:
    """
    Perturb the incumbent into a new initial solution

    Args:
        graph: Input graph
        incumbent: S*, a maximal independent set
        penalty: Current penalties
        nu: Expected number of forced vertices
        rng: Random generator

    Returns:
        Maximal independent state; S* itself when S* = V
    """
    forced = select_forced_vertices(graph, incumbent, penalty, nu, rng)
    return rebuild_with_forced(graph, incumbent, forced)


@dataclass
class RunResult:
    """
    Outcome of one ILPS run.

    Attributes:
        best_solution: S*, sorted 0-based ids
        best_size: |S*|
        time_to_best: Seconds from start until best_size was first reached
        iterations: Completed ILPS iterations
        seed: Run seed
        elapsed: Total wall-clock seconds
        initial_size: Size of the initial solution
    """

    best_solution: tuple[int, ...]
    best_size: int
    time_to_best: float
    iterations: int
    seed: int
    elapsed: float = 0.0
    initial_size: int = 0

    def to_dict(self) -> dict[str, Any]:
        data = asdict(self)
        data["best_solution"] = list(self.best_solution)
        return data


def initial_state(graph: Graph, method: InitMethod, rng: np.random.Generator) -> SolutionState:
    """Build the first maximal independent set with the greedy or random method."""
    state = SolutionState(graph)
    if method is InitMethod.RANDOM:
        state.random_fill(rng)
    else:
        state.greedy_max_degree()
    return state


def ilps(graph: Graph, config: IlpsConfig, hooks: Sequence[IterationHook] = ()) -> RunResult:
    """
    Run iterated local search with plateau search

    Each iteration: local search, plateau search (when |S| <= |S*| + gate, or
    always without a gate), incumbent update with <=, kick, penalty update. The
    penalties are also updated once for the initial solution before the loop.

    Hooks are called after every iteration with a record dict (iteration,
    initial_solution, size_after_local_search, size_after_plateau, best_size,
    elapsed, kick_size, improved) and must return it; a record with
    ``stop`` set to True ends the run after that iteration.

    Args:
        graph: Input graph
        config: Run parameters
        hooks: Per-iteration callbacks

    Returns:
        RunResult
    """
    start = time.perf_counter()
    deadline = start + config.time_limit if config.time_limit is not None else None

    def should_stop() -> bool:
        return deadline is not None and time.perf_counter() >= deadline

    init_rng, kick_rng = split_rng(config.seed, 2)
    state = initial_state(graph, config.init, init_rng)
    initial_size = state.size
    penalty = PenaltyState.zeros(graph.n, config.delta)
    update_penalty(penalty, state.order[: state.size])

    best_solution: tuple[int, ...] = state.solution()
    best_size = math.inf
    time_to_best = 0.0
    iteration = 0

    while True:
        iteration += 1
        start_solution = state.solution() if hooks else ()
        local_search(state, config.k, should_stop=should_stop)
        size_after_local_search = state.size
        if config.plateau_gate is None or state.size <= best_size + config.plateau_gate:
            plateau_search(state, config.k, should_stop=should_stop)
        size_after_plateau = state.size

        improved = state.size < best_size
        if state.size <= best_size:
            best_solution = state.solution()
            if improved:
                best_size = state.size
                time_to_best = time.perf_counter() - start

        forced = select_forced_vertices(graph, best_solution, penalty, config.nu, kick_rng)
        state = rebuild_with_forced(graph, best_solution, forced)
        update_penalty(penalty, state.order[: state.size])

        elapsed = time.perf_counter() - start
        logger.debug(
            f"Iteration {iteration}: ls={size_after_local_search} plateau={size_after_plateau} "
            f"best={best_size} kick={len(forced)}"
        )

        stop = False
        if hooks:
            record: dict[str, Any] = {
                "iteration": iteration,
                "initial_solution": start_solution,
                "size_after_local_search": size_after_local_search,
                "size_after_plateau": size_after_plateau,
                "best_size": best_size,
                "elapsed": elapsed,
                "kick_size": len(forced),
                "improved": improved,
            }
            for hook in hooks:
                record = hook(record)
            stop = bool(record.get("stop"))

        if stop or should_stop():
            break
        if config.max_iterations is not None and iteration >= config.max_iterations:
            break

    elapsed = time.perf_counter() - start
    logger.info(
        f"ILPS on {graph.name or 'graph'} (n={graph.n}): best={best_size} after "
        f"{iteration} iterations, ttb={time_to_best:.3f}s, seed={config.seed}"
    )
    return RunResult(
        best_solution=best_solution,
        best_size=int(best_size),
        time_to_best=time_to_best,
        iterations=iteration,
        seed=config.seed,
        elapsed=elapsed,
        initial_size=initial_size,
    )
