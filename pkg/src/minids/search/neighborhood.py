"""
2- and 3-neighborhood search over a SolutionState, and the LocalSearch driver.

A k-swap drops k solution vertices D and adds a set A of non-solution vertices.
Only vertices of F(D) can enter, so an improving swap needs a small A inside F(D)
that is independent and dominates D and F(D). The searches below restrict the
candidates for A by tightness, which keeps one full scan within O(nΔ) for k=2
and O(nΔ³) for k=3.

Both searches are first-improvement: they return the first qualifying move in
section order and apply nothing themselves.
"""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field
import logging

from minids.core.solution import Section, SolutionState, SolutionStateError

logger = logging.getLogger(__name__)

StopCallback = Callable[[], bool]


@dataclass(frozen=True)
class SwapMove:
    """
    A strictly improving k-swap: drop ``drop`` from S, add ``add``.

    Attributes:
        drop: Solution vertices D (2 or 3 of them)
        add: Non-solution vertices A with 1 <= |A| < |D|
    """

    drop: tuple[int, ...]
    add: tuple[int, ...]

    def __post_init__(self):
        if not 2 <= len(self.drop) <= 3:
            raise ValueError(f"A swap drops 2 or 3 vertices, got {len(self.drop)}")
        if not 1 <= len(self.add) < len(self.drop):
            raise ValueError(f"A swap must add 1..{len(self.drop) - 1} vertices, got {len(self.add)}")
        if len(set(self.drop)) != len(self.drop) or len(set(self.add)) != len(self.add):
            raise ValueError("Swap vertices must be distinct")

    @property
    def gain(self) -> int:
        """Decrease of |S| when applied."""
        return len(self.drop) - len(self.add)


@dataclass
class SearchStats:
    """
    Counters for neighborhood searches.

    Attributes:
        searches_2: search_2 calls
        searches_3: search_3 calls
        anchors_2: 2-tight vertices examined by the last search_2
        anchors_3: Distinct anchor vertices examined by the last search_3
        moves_applied: Moves applied by local_search
        anchor_log: (kind, anchors examined, |T2| or |T3|+|T2| at call time) per search
    """

    searches_2: int = 0
    searches_3: int = 0
    anchors_2: int = 0
    anchors_3: int = 0
    moves_applied: int = 0
    anchor_log: list[tuple[int, int, int]] = field(default_factory=list)


def _require_maximal(state: SolutionState) -> None:
    if not state.is_maximal():
        raise SolutionStateError(
            f"neighborhood search needs a maximal independent set; {state.count(Section.FREE)} free vertices"
        )


def _dominates(state: SolutionState, add: Sequence[int], members: Sequence[int]) -> bool:
    """True if every vertex of ``members`` is in ``add`` or adjacent to one of them."""
    neighbor_sets = state.graph.neighbor_sets
    chosen = [neighbor_sets[a] for a in add]
    for u in members:
        if u in add:
            continue
        if not any(u in neighbors for neighbors in chosen):
            return False
    return True


def search_2(state: SolutionState, stats: SearchStats | None = None) -> SwapMove | None:
    """
    Find an improving 2-swap or conclude that S is 2-minimal

    Only a 2-tight vertex v can replace two solution vertices, and then D must be
    its two solution neighbors; the move exists iff v is adjacent to the rest of
    F(D).

    Args:
        state: Maximal independent state
        stats: Optional counters

    Returns:
        SwapMove(D, (v,)) or None when S is 2-minimal

    Raises:
        SolutionStateError: If S is not maximal
    """
    _require_maximal(state)
    candidates = state.section_vertices(Section.TWO_TIGHT)
    examined = 0
    move = None
    if state.size >= 2:
        for v in candidates:
            examined += 1
            drop = state.solution_neighbors(v)
            if state.adjacent_to_all_FD(v, drop):
                move = SwapMove(drop, (v,))
                break
    if stats is not None:
        stats.searches_2 += 1
        stats.anchors_2 = examined
        stats.anchor_log.append((2, examined, len(candidates)))
    return move


def search_3(state: SolutionState, stats: SearchStats | None = None) -> SwapMove | None:
    """
    Find an improving 3-swap, assuming S is 2-minimal

    An improving 3-swap adds one 3-tight vertex or two vertices. The four phases
    run in this order over the whole current section, each returning the first
    move it finds:

    1. a 3-tight vertex a adjacent to the rest of F(D_a)
    2. a 3-tight vertex a plus a vertex b of F(D_a) dominating what a misses
    3. two nonadjacent 2-tight vertices sharing exactly one solution neighbor
    4. a 2-tight vertex a with D_a = {x, y} plus a 1-tight vertex b whose
       solution neighbor z lies outside D_a; b must dominate every vertex of
       F(D_a) that a misses, so b is searched among the 1-tight neighbors of one
       such vertex w

    On input that is not 2-minimal the result is still a valid improving move,
    but a "None" answer no longer certifies 3-minimality.

    Args:
        state: Maximal independent state (2-minimal for completeness)
        stats: Optional counters

    Returns:
        SwapMove or None when S is 3-minimal

    Raises:
        SolutionStateError: If S is not maximal
    """
    _require_maximal(state)
    anchors: set[int] | None = set() if stats is not None else None
    move = None
    if state.size >= 3:
        three_tight = [a for a in state.section_vertices(Section.THREE_PLUS) if state.tau[a] == 3]
        two_tight = state.section_vertices(Section.TWO_TIGHT)
        move = (
            _one_for_three(state, three_tight, anchors)
            or _two_with_three_tight(state, three_tight, anchors)
            or _two_two_tight(state, two_tight, anchors)
            or _two_tight_and_one_tight(state, two_tight, anchors)
        )
    if stats is not None:
        stats.searches_3 += 1
        stats.anchors_3 = len(anchors)
        bound = state.count(Section.THREE_PLUS) + state.count(Section.TWO_TIGHT)
        stats.anchor_log.append((3, len(anchors), bound))
    return move


def _one_for_three(state: SolutionState, three_tight: list[int], anchors: set[int] | None):
    for a in three_tight:
        if anchors is not None:
            anchors.add(a)
        drop = state.solution_neighbors(a)
        if state.adjacent_to_all_FD(a, drop):
            return SwapMove(drop, (a,))
    return None


def _two_with_three_tight(state: SolutionState, three_tight: list[int], anchors: set[int] | None):
    neighbors_of = state.graph.neighbor_sets
    for a in three_tight:
        if anchors is not None:
            anchors.add(a)
        drop = state.solution_neighbors(a)
        near_a = neighbors_of[a]
        missed = [u for u in state.list_F(drop) if u != a and u not in near_a]
        for b in missed:
            if state.adjacent_to_all_in(b, missed):
                return SwapMove(drop, (a, b))
    return None


def _two_two_tight(state: SolutionState, two_tight: list[int], anchors: set[int] | None):
    graph, tau = state.graph, state.tau
    for a in two_tight:
        if anchors is not None:
            anchors.add(a)
        x, y = state.solution_neighbors(a)
        near_a = graph.neighbor_sets[a]
        seen = {a}
        for b in (*graph.adjacency[x], *graph.adjacency[y]):
            if b in seen or tau[b] != 2 or state.in_solution(b):
                continue
            seen.add(b)
            if b in near_a:
                continue
            drop_b = state.solution_neighbors(b)
            drop = tuple(sorted({x, y, *drop_b}))
            if len(drop) != 3:
                continue
            if _dominates(state, (a, b), state.list_F(drop)):
                return SwapMove(drop, (a, b))
    return None


def _two_tight_and_one_tight(state: SolutionState, two_tight: list[int], anchors: set[int] | None):
    graph, tau = state.graph, state.tau
    for a in two_tight:
        if anchors is not None:
            anchors.add(a)
        pair = state.solution_neighbors(a)
        near_a = graph.neighbor_sets[a]
        missed = [u for u in state.list_F(pair) if u != a and u not in near_a]
        if not missed:
            continue
        w = missed[0]
        for b in graph.adjacency[w]:
            if tau[b] != 1 or state.in_solution(b) or b in near_a:
                continue
            (z,) = state.solution_neighbors(b)
            if z in pair:
                continue
            drop = tuple(sorted((*pair, z)))
            if _dominates(state, (a, b), state.list_F(drop)):
                return SwapMove(drop, (a, b))
    return None


def apply_move(state: SolutionState, move: SwapMove, check: bool = False) -> None:
    """
    Apply a swap: drop D, then add A

    Args:
        state: State the move was found on
        move: Move to apply
        check: Re-validate the state and maximality afterwards

    Raises:
        SolutionStateError: If the move is stale (a dropped vertex left S, or an
            added vertex is already in S), or ``check`` finds a broken state
    """
    for d in move.drop:
        if not state.in_solution(d):
            raise SolutionStateError(f"stale move {move}: {d} is no longer in the solution")
    for a in move.add:
        if state.in_solution(a):
            raise SolutionStateError(f"stale move {move}: {a} is already in the solution")
    before = state.size
    for d in move.drop:
        state.drop_vertex(d)
    for a in move.add:
        state.add_vertex(a)
    if check:
        violations = state.validate()
        if violations or not state.is_maximal() or state.size != before - move.gain:
            raise SolutionStateError(f"move {move} produced an invalid state: {violations[:3]}")


def local_search(
    state: SolutionState,
    k: int,
    should_stop: StopCallback | None = None,
    journal: list[SwapMove] | None = None,
    stats: SearchStats | None = None,
) -> int:
    """
    Apply improving swaps until S is k-minimal

    For k=3 every 3-swap search starts from a 2-minimal solution: after each
    applied move the loop returns to 2-swaps first.

    Args:
        state: Maximal independent state, modified in place
        k: Neighborhood size, 2 or 3
        should_stop: Optional callback checked before each search; True ends early
        journal: Optional list receiving every applied move
        stats: Optional counters

    Returns:
        Number of moves applied

    Raises:
        ValueError: If k is not 2 or 3
        SolutionStateError: If S is not maximal
    """
    if k not in (2, 3):
        raise ValueError(f"k must be 2 or 3, got {k}")
    applied = 0
    while True:
        if should_stop is not None and should_stop():
            break
        move = search_2(state, stats)
        if move is None and k == 3:
            move = search_3(state, stats)
        if move is None:
            break
        apply_move(state, move)
        applied += 1
        if journal is not None:
            journal.append(move)
        if stats is not None:
            stats.moves_applied += 1
    return applied
