"""
Brute-force ground truth for small graphs.

Everything here works from the raw adjacency of a Graph with plain sets and
bitmasks; nothing is shared with SolutionState or the searches, so a bug in the
fast path cannot hide behind the same bug here. Used by the test suite and by the
``oracle`` and ``verify`` commands.
"""

from collections.abc import Iterable, Sequence
from itertools import combinations
import logging

from minids.core.graph import Graph

logger = logging.getLogger(__name__)

EXACT_LIMIT = 26
EXHAUSTIVE_LIMIT = 16
CERTIFY_LIMIT = 20


def _require_small(graph: Graph, limit: int, what: str) -> None:
    if graph.n > limit:
        raise ValueError(f"{what} is limited to n <= {limit}, graph has n={graph.n}")


def _closed_masks(graph: Graph) -> list[int]:
    masks = []
    for v in range(graph.n):
        mask = 1 << v
        for u in graph.adjacency[v]:
            mask |= 1 << u
        masks.append(mask)
    return masks


def exact_min_ids(graph: Graph) -> tuple[int, tuple[int, ...]]:
    """
    Minimum independent dominating set by branch and bound

    Branches on the closed neighborhood of the lowest undominated vertex: one of
    its members must join, and only undominated members keep the set independent.

    Args:
        graph: Graph with n <= 26

    Returns:
        (size, sorted vertices)

    Raises:
        ValueError: If n exceeds the bound
    """
    _require_small(graph, EXACT_LIMIT, "exact_min_ids")
    n = graph.n
    if n == 0:
        return 0, ()
    closed = _closed_masks(graph)
    everything = (1 << n) - 1
    largest = max(mask.bit_count() for mask in closed)
    best: list[int] = list(range(n + 1))
    chosen: list[int] = []

    def branch(dominated: int) -> None:
        if dominated == everything:
            if len(chosen) < len(best):
                best[:] = chosen
            return
        remaining = n - dominated.bit_count()
        if len(chosen) + -(-remaining // largest) >= len(best):
            return
        undominated = ~dominated & everything
        u = (undominated & -undominated).bit_length() - 1
        candidates = closed[u] & undominated
        while candidates:
            low = candidates & -candidates
            w = low.bit_length() - 1
            candidates ^= low
            chosen.append(w)
            branch(dominated | closed[w])
            chosen.pop()

    branch(0)
    return len(best), tuple(sorted(best))


def exact_min_ids_exhaustive(graph: Graph) -> tuple[int, tuple[int, ...]]:
    """
    Minimum independent dominating set by sweeping all subsets in size order

    Args:
        graph: Graph with n <= 16

    Returns:
        (size, first minimum set in lexicographic order)
    """
    _require_small(graph, EXHAUSTIVE_LIMIT, "exact_min_ids_exhaustive")
    for size in range(graph.n + 1):
        for subset in combinations(range(graph.n), size):
            if is_independent_dominating(graph, subset):
                return size, subset
    return 0, ()


def is_independent(graph: Graph, vertices: Iterable[int]) -> bool:
    """True if no two vertices are adjacent."""
    members = set(vertices)
    return all(not (members & set(graph.adjacency[v])) for v in members)


def is_dominating(graph: Graph, vertices: Iterable[int]) -> bool:
    """True if every vertex is in the set or adjacent to a member."""
    members = set(vertices)
    return all(v in members or members & set(graph.adjacency[v]) for v in range(graph.n))


def is_independent_dominating(graph: Graph, vertices: Iterable[int]) -> bool:
    """True if the set is independent and dominating (a maximal independent set)."""
    members = set(vertices)
    return is_independent(graph, members) and is_dominating(graph, members)


def check_solution(graph: Graph, vertices: Sequence[int]) -> list[str]:
    """
    Explain why a vertex list is not an independent dominating set

    Messages use 1-based ids and come in the order: range, duplicates,
    independence, domination.

    Args:
        graph: Input graph
        vertices: 0-based vertex ids

    Returns:
        Violations (empty when valid)
    """
    violations = [f"vertex id {v + 1} outside [1, {graph.n}]" for v in vertices if not 0 <= v < graph.n]
    if violations:
        return violations
    seen: set[int] = set()
    for v in vertices:
        if v in seen:
            violations.append(f"vertex {v + 1} listed twice")
        seen.add(v)
    for v in sorted(seen):
        for u in graph.adjacency[v]:
            if u > v and u in seen:
                violations.append(f"not independent: edge {v + 1}-{u + 1} inside the set")
    for v in range(graph.n):
        if v not in seen and not seen.intersection(graph.adjacency[v]):
            violations.append(f"not dominating: vertex {v + 1} has no neighbor in the set")
    return violations


def naive_F(graph: Graph, solution: Iterable[int], drop: Iterable[int]) -> set[int]:
    """F(D) = {v not in S : N(v) ∩ S ⊆ D}, straight from the definition."""
    members, dropped = set(solution), set(drop)
    return {
        v
        for v in range(graph.n)
        if v not in members and (set(graph.adjacency[v]) & members) <= dropped
    }


def naive_adjacent_to_all(graph: Graph, v: int, members: Iterable[int]) -> bool:
    """True if v is adjacent to every vertex of ``members`` other than v."""
    return all(u == v or graph.has_edge(u, v) for u in members)


def naive_plateau(graph: Graph, solution: Iterable[int]) -> list[tuple[int, int]]:
    """
    Every (x, v) with x in S, v not in S such that S - x + v is again a solution

    Returns:
        Sorted list of pairs
    """
    members = set(solution)
    moves = []
    for x in sorted(members):
        rest = members - {x}
        for v in range(graph.n):
            if v not in members and is_independent_dominating(graph, rest | {v}):
                moves.append((x, v))
    return moves


def _has_small_cover(graph: Graph, drop: set[int], free: list[int], limit: int) -> bool:
    """Is there an independent A ⊆ free with |A| <= limit dominating drop ∪ free?"""
    targets = drop | set(free)
    chosen: list[int] = []

    def extend(start: int) -> bool:
        covered = set(chosen)
        for a in chosen:
            covered.update(graph.adjacency[a])
        if targets <= covered:
            return True
        if len(chosen) == limit:
            return False
        for index in range(start, len(free)):
            w = free[index]
            if any(graph.has_edge(w, a) for a in chosen):
                continue
            chosen.append(w)
            if extend(index + 1):
                return True
            chosen.pop()
        return False

    return extend(0)


def certify_k_minimal(graph: Graph, solution: Iterable[int], k: int) -> bool:
    """
    Decide k-minimality by exhaustive enumeration

    For every k-subset D of S, looks for a maximal independent set A of
    G[D ∪ F(D)] inside F(D) with |A| < k; any such A is an improving k-swap.

    Args:
        graph: Graph with n <= 20
        solution: Maximal independent set S
        k: 2 or 3

    Returns:
        True if no improving k-swap exists
    """
    _require_small(graph, CERTIFY_LIMIT, "certify_k_minimal")
    members = sorted(set(solution))
    for drop in combinations(members, k):
        free = sorted(naive_F(graph, members, drop))
        if _has_small_cover(graph, set(drop), free, k - 1):
            logger.debug(f"Improving {k}-swap found for D={drop}")
            return False
    return True
