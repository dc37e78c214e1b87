"""
Plateau search: equal-size exchanges of one solution vertex for one 1-tight vertex.

Exchanging x in S for a 1-tight neighbor v keeps S maximal exactly when v is
adjacent to every other vertex of F({x}). Plateau search tries each such neighbor,
runs local search from it, and keeps the result only when it is strictly smaller;
otherwise the exchange and every move local search made are undone in reverse.
"""

import logging

from minids.core.solution import Section, SolutionState
from minids.search.neighborhood import StopCallback, SwapMove, local_search

logger = logging.getLogger(__name__)

PlateauMove = tuple[int, int]


def is_plateau_move(state: SolutionState, x: int, v: int) -> bool:
    """Return True if exchanging x for v currently yields a same-size solution."""
    if not state.in_solution(x) or state.in_solution(v) or state.tau[v] != 1:
        return False
    if not state.graph.has_edge(x, v):
        return False
    return state.adjacent_to_all_FD(v, (x,))


def enumerate_plateau_moves(state: SolutionState) -> list[PlateauMove]:
    """
    List every (x, v) exchange that keeps S a solution of the same size

    Runs in O(|T1|·Δ): each 1-tight vertex is tested against F of its solution
    neighbor.

    Args:
        state: Current state

    Returns:
        (x, v) pairs in T1 section order
    """
    moves = []
    for v in state.section_vertices(Section.ONE_TIGHT):
        (x,) = state.solution_neighbors(v)
        if state.adjacent_to_all_FD(v, (x,)):
            moves.append((x, v))
    return moves


def _undo(state: SolutionState, journal: list[SwapMove], exchange: PlateauMove) -> None:
    for move in reversed(journal):
        for a in move.add:
            state.drop_vertex(a)
        for d in move.drop:
            state.add_vertex(d)
    x, v = exchange
    state.drop_vertex(v)
    state.add_vertex(x)


def plateau_search(
    state: SolutionState,
    k: int,
    should_stop: StopCallback | None = None,
) -> int:
    """
    Explore the plateau around a k-minimal solution

    For each exchange in enumeration order: apply it, run local search, and keep
    the outcome only if |S| dropped; otherwise restore S exactly. After a strict
    improvement the enumeration restarts on the new solution. Pairs snapshotted
    before an improvement are re-checked before use.

    Args:
        state: k-minimal state, modified in place
        k: Neighborhood size for the inner local search
        should_stop: Optional deadline callback

    Returns:
        Total decrease of |S|
    """
    entry_size = state.size
    improved = True
    while improved:
        improved = False
        for x, v in enumerate_plateau_moves(state):
            if should_stop is not None and should_stop():
                return entry_size - state.size
            if not is_plateau_move(state, x, v):
                continue
            before = state.size
            state.drop_vertex(x)
            state.add_vertex(v)
            journal: list[SwapMove] = []
            local_search(state, k, should_stop=should_stop, journal=journal)
            if state.size < before:
                logger.debug(f"Plateau exchange ({x}, {v}) led to size {state.size}")
                improved = True
                break
            _undo(state, journal, (x, v))
    return entry_size - state.size
