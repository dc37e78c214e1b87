"""
Incremental maximal-independent-set data structure.

A SolutionState keeps every vertex in one ordering split into five sections:

    S | T0 | T1 | T2 | T>=3

where S is the current independent set and T_t holds the non-solution vertices
with exactly t solution neighbors (the last section holds tightness 3 and above).
Moving a vertex between sections swaps it across section boundaries, so adding or
dropping a vertex v costs O(deg(v)). The counter array ``c`` and the stamp array
``chi`` (with the global stamp ``gamma``) are scratch space for listing F(D) and
for the "adjacent to all others" tests without allocating.

Example:
    state = SolutionState(graph)
    state.greedy_max_degree()
    free = state.pick_free()          # None: the solution is maximal
    fd = state.list_F(state.solution()[:2])
"""

from collections.abc import Iterable, Sequence
from enum import IntEnum
import logging

import numpy as np

from minids.core.graph import Graph

logger = logging.getLogger(__name__)


class Section(IntEnum):
    """Sections of the vertex ordering, in order."""

    SOLUTION = 0
    FREE = 1
    ONE_TIGHT = 2
    TWO_TIGHT = 3
    THREE_PLUS = 4


class SolutionStateError(ValueError):
    """Raised when an operation would break the solution invariants."""


class SolutionState:
    """
    Current solution S with the five-section ordering and tightness counts.

    Attributes:
        graph: The (immutable) input graph
        position: position[v] is the index of v in ``order``
        order: Vertices arranged section by section
        tau: tau[v] = |N(v) ∩ S|, maintained for every vertex
        counters_c: Scratch counters c(v) for F(D) listing
        stamp_chi: Scratch stamps chi(v) for adjacency tests
        stamp_gamma: Current stamp value (>= 1)
        relocations: Number of section changes performed so far
    """

    # Largest stamp value before chi/gamma are reset (INT_MAX of a 32-bit int).
    STAMP_LIMIT = 2**31 - 1

    def __init__(self, graph: Graph):
        """
        Start from the empty solution: every vertex free, tau = 0, gamma = 1

        Args:
            graph: Input graph
        """
        n = graph.n
        self.graph = graph
        self.position = list(range(n))
        self.order = list(range(n))
        self.tau = [0] * n
        # Exclusive end index of sections S, T0, T1, T2; T>=3 ends at n.
        self.boundaries = [0, n, n, n]
        self.counters_c = [0] * n
        self.stamp_chi = [0] * n
        self.stamp_gamma = 1
        self.relocations = 0

    @classmethod
    def from_vertices(cls, graph: Graph, vertices: Iterable[int]) -> "SolutionState":
        """
        Build a state whose S is the given independent set

        Args:
            graph: Input graph
            vertices: Independent vertex set (0-based)

        Returns:
            SolutionState (not necessarily maximal)

        Raises:
            SolutionStateError: If the vertices are not independent or repeat
        """
        state = cls(graph)
        for v in vertices:
            state.add_vertex(v)
        return state

    # ------------------------------------------------------------------
    # Section bookkeeping

    def _section_of(self, v: int) -> int:
        if self.position[v] < self.boundaries[0]:
            return Section.SOLUTION
        t = self.tau[v]
        return Section.FREE + (t if t < 3 else 3)

    def _section_range(self, section: int) -> tuple[int, int]:
        start = 0 if section == 0 else self.boundaries[section - 1]
        end = self.graph.n if section == Section.THREE_PLUS else self.boundaries[section]
        return start, end

    def _swap(self, i: int, j: int) -> None:
        order, position = self.order, self.position
        a, b = order[i], order[j]
        order[i], order[j] = b, a
        position[b], position[a] = i, j

    def _relocate(self, v: int, src: int, dst: int) -> None:
        bounds = self.boundaries
        while src < dst:
            last = bounds[src] - 1
            self._swap(self.position[v], last)
            bounds[src] = last
            src += 1
        while src > dst:
            first = bounds[src - 1]
            self._swap(self.position[v], first)
            bounds[src - 1] = first + 1
            src -= 1
        self.relocations += 1

    # ------------------------------------------------------------------
    # Queries

    @property
    def size(self) -> int:
        """|S|"""
        return self.boundaries[0]

    def in_solution(self, v: int) -> bool:
        """Return True if v is in S."""
        return self.position[v] < self.boundaries[0]

    def count(self, section: Section) -> int:
        """Number of vertices in a section."""
        start, end = self._section_range(section)
        return end - start

    def section_vertices(self, section: Section) -> list[int]:
        """Snapshot of a section's vertices in current order."""
        start, end = self._section_range(section)
        return self.order[start:end]

    def solution(self) -> tuple[int, ...]:
        """Current S as a sorted tuple."""
        return tuple(sorted(self.order[: self.boundaries[0]]))

    def solution_neighbors(self, v: int) -> tuple[int, ...]:
        """Neighbors of v that are in S, ascending."""
        limit = self.boundaries[0]
        position = self.position
        return tuple(u for u in self.graph.adjacency[v] if position[u] < limit)

    def is_maximal(self) -> bool:
        """True iff T0 is empty, i.e. S is a maximal independent set."""
        return self.boundaries[0] == self.boundaries[1]

    def pick_free(self) -> int | None:
        """First vertex of T0 in the current order, or None when S is maximal."""
        if self.boundaries[0] == self.boundaries[1]:
            return None
        return self.order[self.boundaries[0]]

    # ------------------------------------------------------------------
    # Updates

    def add_vertex(self, v: int) -> None:
        """
        Move v into S and update the tightness of its neighbors

        Args:
            v: Vertex with no neighbor in S

        Raises:
            SolutionStateError: If v is already in S or has a neighbor in S
        """
        if self.position[v] < self.boundaries[0]:
            raise SolutionStateError(f"vertex {v} is already in the solution")
        tau = self.tau
        if tau[v] != 0:
            raise SolutionStateError(
                f"vertex {v} has {tau[v]} solution neighbor(s); adding it breaks independence"
            )
        self._relocate(v, Section.FREE, Section.SOLUTION)
        for u in self.graph.adjacency[v]:
            t = tau[u]
            tau[u] = t + 1
            if t < 3:
                self._relocate(u, Section.FREE + t, Section.FREE + t + 1)

    def drop_vertex(self, x: int) -> None:
        """
        Move x out of S; x and any neighbor left without solution neighbors become free

        Args:
            x: Solution vertex

        Raises:
            SolutionStateError: If x is not in S
        """
        if self.position[x] >= self.boundaries[0]:
            raise SolutionStateError(f"vertex {x} is not in the solution")
        tau = self.tau
        self._relocate(x, Section.SOLUTION, Section.FREE + min(tau[x], 3))
        for u in self.graph.adjacency[x]:
            t = tau[u]
            tau[u] = t - 1
            if t <= 3:
                self._relocate(u, Section.FREE + t, Section.FREE + t - 1)

    def greedy_max_degree(self) -> None:
        """Add free vertices of maximum degree (ties: smallest id) until S is maximal."""
        tau = self.tau
        for v in self.graph.degree_order:
            if self.boundaries[0] == self.boundaries[1]:
                break
            if tau[v] == 0 and not self.in_solution(v):
                self.add_vertex(v)

    def random_fill(self, rng: np.random.Generator) -> None:
        """
        Add uniformly random free vertices until S is maximal

        Args:
            rng: Random generator
        """
        bounds = self.boundaries
        while bounds[0] < bounds[1]:
            index = int(rng.integers(bounds[0], bounds[1]))
            self.add_vertex(self.order[index])

    # ------------------------------------------------------------------
    # F(D) and adjacency primitives

    def _check_drop_set(self, drop: Sequence[int]) -> None:
        limit = self.boundaries[0]
        for d in drop:
            if self.position[d] >= limit:
                raise SolutionStateError(f"dropped vertex {d} is not in the solution")

    def list_F(self, drop: Sequence[int]) -> list[int]:
        """
        List F(D) = {v not in S : N(v) ∩ S ⊆ D} in O(|D|·Δ)

        First pass zeroes c(u) for u in N(D); the second increments c(u) per
        occurrence and emits u when c(u) reaches tau(u).

        Args:
            drop: Solution vertices D

        Returns:
            Members of F(D) in scan order

        Raises:
            SolutionStateError: If some vertex of D is not in S
        """
        self._check_drop_set(drop)
        adjacency, c, tau = self.graph.adjacency, self.counters_c, self.tau
        for x in drop:
            for u in adjacency[x]:
                c[u] = 0
        found = []
        for x in drop:
            for u in adjacency[x]:
                c[u] += 1
                if c[u] == tau[u]:
                    found.append(u)
        return found

    def adjacent_to_all_FD(self, v: int, drop: Sequence[int]) -> bool:
        """
        Decide whether v is adjacent to every other member of F(D) in O(|D|·Δ)

        Args:
            v: Member of F(D)
            drop: Solution vertices D

        Returns:
            True if v is adjacent to all of F(D) minus v

        Raises:
            SolutionStateError: If v is not in F(D)
        """
        adjacency, c, tau = self.graph.adjacency, self.counters_c, self.tau
        for u in adjacency[v]:
            c[u] = 0
        members = self.list_F(drop)
        if v not in members:
            raise SolutionStateError(f"vertex {v} is not in F(D) for D={list(drop)}")
        k = len(drop)
        covered = 0
        for u in adjacency[v]:
            t = tau[u]
            if 1 <= t <= k and c[u] == t:
                covered += 1
        return covered == len(members) - 1

    def adjacent_to_all_in(self, v: int, members: Sequence[int]) -> bool:
        """
        Decide whether v is adjacent to every other vertex of an arbitrary set F

        Stamps chi(u) = gamma for u in F, counts stamped neighbors of v, then
        advances gamma; O(|F| + deg(v)).

        Args:
            v: Member of F
            members: The vertex set F (no repeats)

        Returns:
            True if v is adjacent to all of F minus v

        Raises:
            SolutionStateError: If v is not in F
        """
        chi, gamma = self.stamp_chi, self.stamp_gamma
        for u in members:
            chi[u] = gamma
        if chi[v] != gamma:
            self._advance_stamp()
            raise SolutionStateError(f"vertex {v} is not in the given set")
        covered = 0
        for u in self.graph.adjacency[v]:
            if chi[u] == gamma:
                covered += 1
        self._advance_stamp()
        return covered == len(members) - 1

    def _advance_stamp(self) -> None:
        self.stamp_gamma += 1
        if self.stamp_gamma >= self.STAMP_LIMIT - 1:
            logger.debug("Stamp counter wrapped; resetting chi")
            self.stamp_chi = [0] * self.graph.n
            self.stamp_gamma = 1

    # ------------------------------------------------------------------
    # Consistency

    def validate(self) -> list[str]:
        """
        Recompute tightness, sections and independence from scratch

        Returns:
            List of violation descriptions (empty when consistent)
        """
        violations: list[str] = []
        graph, n = self.graph, self.graph.n
        if sorted(self.order) != list(range(n)):
            return ["order is not a permutation of the vertices"]
        for index, v in enumerate(self.order):
            if self.position[v] != index:
                violations.append(f"position[{v}]={self.position[v]} but order[{index}]={v}")
        bounds = self.boundaries
        if not 0 <= bounds[0] <= bounds[1] <= bounds[2] <= bounds[3] <= n:
            violations.append(f"boundaries {bounds} not monotone within [0, {n}]")
            return violations

        members = set(self.order[: bounds[0]])
        for v in range(n):
            expected_tau = sum(1 for u in graph.adjacency[v] if u in members)
            if self.tau[v] != expected_tau:
                violations.append(f"tau[{v}]={self.tau[v]}, recomputed {expected_tau}")
            if v in members:
                if expected_tau:
                    violations.append(f"solution vertex {v} has a solution neighbor")
                expected_section = Section.SOLUTION
            else:
                expected_section = Section.FREE + min(expected_tau, 3)
            start, end = self._section_range(expected_section)
            if not start <= self.position[v] < end:
                violations.append(
                    f"vertex {v} at position {self.position[v]} outside section "
                    f"{Section(expected_section).name} [{start}, {end})"
                )
        return violations


def format_solution(vertices: Iterable[int]) -> str:
    """Sorted 1-based ids, one per line."""
    return "".join(f"{v + 1}\n" for v in sorted(vertices))


def parse_solution(text: str) -> list[int]:
    """
    Read 1-based vertex ids separated by newlines, commas or whitespace

    Args:
        text: Solution listing

    Returns:
        0-based vertex ids in listed order

    Raises:
        ValueError: On a token that is not a positive integer
    """
    vertices = []
    for token in text.replace(",", " ").split():
        token = token.rstrip(".")
        if not token:
            continue
        if not token.isdigit() or int(token) < 1:
            raise ValueError(f"Invalid vertex id {token!r}")
        vertices.append(int(token) - 1)
    return vertices
