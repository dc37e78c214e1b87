"""
Immutable undirected graphs, DIMACS ASCII reading/writing and instance generators.

Vertices are the integers ``0..n-1``; DIMACS files and everything user-facing use
1-based ids. Neighbor lists are sorted ascending and every "scan the neighbors"
loop in the package iterates them in that order, which fixes tie-breaking.

Example:
    graph = parse_dimacs("p edge 3 2\\ne 1 2\\ne 2 3")
    grid = gen_grid(10, 10)
    params = GenParams.parse("random:100:0.2:seed=5")
    graph = params.build()
"""

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
import logging
from pathlib import Path
import re

import numpy as np
from pydantic import BaseModel, ConfigDict, Field

from minids.core.rng import MAX_SEED, make_rng

logger = logging.getLogger(__name__)


class DimacsFormatError(ValueError):
    """Raised for malformed DIMACS input; carries the offending line number."""

    def __init__(self, message: str, line_number: int | None = None):
        self.line_number = line_number
        if line_number is not None:
            message = f"line {line_number}: {message}"
        super().__init__(message)


@dataclass(frozen=True)
class Graph:
    """
    Immutable simple undirected graph in adjacency-list form.

    Attributes:
        n: Number of vertices
        m: Number of edges
        adjacency: Per-vertex neighbor tuples, each sorted ascending
        degrees: Per-vertex degree
        max_degree: Maximum degree (0 for an edgeless graph)
        name: Optional instance name (file stem or generator spec)
    """

    n: int
    m: int
    adjacency: tuple[tuple[int, ...], ...]
    degrees: tuple[int, ...]
    max_degree: int
    name: str = ""

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]], name: str = "") -> "Graph":
        """
        Build a graph from 0-based edge pairs

        Duplicate pairs (in either orientation) are merged.

        Args:
            n: Number of vertices
            edges: Iterable of (u, v) pairs with u != v
            name: Optional instance name

        Returns:
            Graph

        Raises:
            ValueError: On a self-loop or an endpoint outside 0..n-1
        """
        if n < 0:
            raise ValueError(f"Vertex count must be non-negative, got {n}")
        neighbor_sets: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"Self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"Edge ({u}, {v}) has an endpoint outside 0..{n - 1}")
            neighbor_sets[u].add(v)
            neighbor_sets[v].add(u)
        return cls._from_neighbor_sets(neighbor_sets, name)

    @classmethod
    def _from_neighbor_sets(cls, neighbor_sets: list[set[int]], name: str) -> "Graph":
        adjacency = tuple(tuple(sorted(neighbors)) for neighbors in neighbor_sets)
        degrees = tuple(len(neighbors) for neighbors in adjacency)
        return cls(
            n=len(adjacency),
            m=sum(degrees) // 2,
            adjacency=adjacency,
            degrees=degrees,
            max_degree=max(degrees, default=0),
            name=name,
        )

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        """Per-vertex neighbor sets for O(1) adjacency tests."""
        return tuple(frozenset(neighbors) for neighbors in self.adjacency)

    @cached_property
    def degree_order(self) -> tuple[int, ...]:
        """Vertices by decreasing degree, ties by increasing id."""
        return tuple(sorted(range(self.n), key=lambda v: (-self.degrees[v], v)))

    @property
    def density(self) -> float:
        """Edge density 2m / (n(n-1)); 0 for graphs with fewer than two vertices."""
        if self.n < 2:
            return 0.0
        return 2.0 * self.m / (self.n * (self.n - 1))

    def has_edge(self, u: int, v: int) -> bool:
        """Return True if u and v are adjacent."""
        return v in self.neighbor_sets[u]

    def edges(self) -> list[tuple[int, int]]:
        """All edges as (u, v) with u < v, in ascending order."""
        return [(u, v) for u in range(self.n) for v in self.adjacency[u] if u < v]

    def validate(self) -> list[str]:
        """
        Check the structural invariants from scratch

        Returns:
            List of violation descriptions (empty when consistent)
        """
        violations: list[str] = []
        if len(self.adjacency) != self.n or len(self.degrees) != self.n:
            violations.append(
                f"adjacency/degrees length {len(self.adjacency)}/{len(self.degrees)} != n={self.n}"
            )
            return violations
        for v, neighbors in enumerate(self.adjacency):
            if v in neighbors:
                violations.append(f"self-loop on {v}")
            if any(a >= b for a, b in zip(neighbors, neighbors[1:], strict=False)):
                violations.append(f"neighbor list of {v} not strictly ascending")
            if self.degrees[v] != len(neighbors):
                violations.append(f"degree of {v} is {self.degrees[v]}, list has {len(neighbors)}")
            for u in neighbors:
                if not 0 <= u < self.n:
                    violations.append(f"neighbor {u} of {v} out of range")
                elif v not in self.neighbor_sets[u]:
                    violations.append(f"asymmetric edge {v}->{u}")
        if sum(self.degrees) != 2 * self.m:
            violations.append(f"degree sum {sum(self.degrees)} != 2m={2 * self.m}")
        if self.max_degree != max(self.degrees, default=0):
            violations.append(f"max_degree {self.max_degree} != {max(self.degrees, default=0)}")
        return violations


class DimacsReader:
    """
    Reader for ASCII DIMACS graphs (.clq/.col convention).

    Comment lines start with ``c``; one ``p edge <n> <m>`` (or ``p col``) line
    precedes ``e <u> <v>`` edge lines with 1-based ids. Duplicate edges are merged
    and counted; self-loops and out-of-range endpoints are rejected.

    Attributes:
        duplicate_edges: Number of duplicate edge lines seen by the last parse
        declared_edges: Edge count from the ``p`` line of the last parse
        comments: Comment lines (without the leading ``c``) of the last parse
    """

    def __init__(self):
        self.duplicate_edges = 0
        self.declared_edges = 0
        self.comments: list[str] = []

    def parse(self, text: str | bytes, name: str = "") -> Graph:
        """
        Parse DIMACS text

        Args:
            text: File content as str or bytes
            name: Optional instance name for the resulting graph

        Returns:
            Graph with vertex ids shifted to 0-based

        Raises:
            DimacsFormatError: On a malformed header, a missing ``p`` line, an
                out-of-range endpoint or a self-loop
        """
        if isinstance(text, bytes):
            text = text.decode("ascii", errors="replace")

        self.duplicate_edges = 0
        self.declared_edges = 0
        self.comments = []
        n: int | None = None
        neighbor_sets: list[set[int]] = []

        for line_number, raw in enumerate(text.splitlines(), 1):
            line = raw.strip()
            if not line:
                continue
            tag = line[0]
            if tag == "c":
                self.comments.append(line[1:].strip())
            elif tag == "p":
                if n is not None:
                    raise DimacsFormatError("second 'p' line", line_number)
                n, self.declared_edges = self._parse_header(line, line_number)
                neighbor_sets = [set() for _ in range(n)]
            elif tag == "e":
                if n is None:
                    raise DimacsFormatError("edge line before the 'p' line", line_number)
                u, v = self._parse_edge(line, line_number, n)
                if v in neighbor_sets[u]:
                    self.duplicate_edges += 1
                    continue
                neighbor_sets[u].add(v)
                neighbor_sets[v].add(u)
            else:
                raise DimacsFormatError(f"unrecognized line {line!r}", line_number)

        if n is None:
            raise DimacsFormatError("missing 'p edge <n> <m>' line")

        graph = Graph._from_neighbor_sets(neighbor_sets, name)
        if self.duplicate_edges:
            logger.warning(f"Merged {self.duplicate_edges} duplicate edge line(s) in {name or 'input'}")
        if graph.m + self.duplicate_edges != self.declared_edges:
            logger.info(
                f"Header declares {self.declared_edges} edges, read {graph.m} distinct "
                f"and {self.duplicate_edges} duplicate"
            )
        return graph

    @staticmethod
    def _parse_header(line: str, line_number: int) -> tuple[int, int]:
        parts = line.split()
        if len(parts) != 4 or parts[1] not in ("edge", "col"):
            raise DimacsFormatError(f"malformed header {line!r}, expected 'p edge <n> <m>'", line_number)
        try:
            n, m = int(parts[2]), int(parts[3])
        except ValueError:
            raise DimacsFormatError(f"non-integer counts in header {line!r}", line_number)
        if n < 0 or m < 0:
            raise DimacsFormatError(f"negative counts in header {line!r}", line_number)
        return n, m

    @staticmethod
    def _parse_edge(line: str, line_number: int, n: int) -> tuple[int, int]:
        parts = line.split()
        if len(parts) != 3:
            raise DimacsFormatError(f"malformed edge line {line!r}", line_number)
        try:
            u, v = int(parts[1]), int(parts[2])
        except ValueError:
            raise DimacsFormatError(f"non-integer endpoint in {line!r}", line_number)
        for endpoint in (u, v):
            if not 1 <= endpoint <= n:
                raise DimacsFormatError(f"endpoint {endpoint} outside [1, {n}]", line_number)
        if u == v:
            raise DimacsFormatError(f"self-loop on vertex {u}", line_number)
        return u - 1, v - 1


def parse_dimacs(text: str | bytes, name: str = "") -> Graph:
    """Parse DIMACS ASCII text into a Graph (see DimacsReader)."""
    return DimacsReader().parse(text, name=name)


def serialize_dimacs(graph: Graph, comment: str | None = None) -> str:
    """
    Write a graph as DIMACS ASCII

    Args:
        graph: Graph to write
        comment: Optional comment placed on ``c`` lines before the header

    Returns:
        DIMACS text with 1-based ids, edges ascending with u < v
    """
    lines = []
    if comment:
        lines.extend(f"c {text}" for text in comment.splitlines())
    lines.append(f"p edge {graph.n} {graph.m}")
    lines.extend(f"e {u + 1} {v + 1}" for u, v in graph.edges())
    return "\n".join(lines) + "\n"


def complement(graph: Graph) -> Graph:
    """
    Complement graph (same vertices, exactly the non-edges)

    The clique benchmark files are solved on their complement.

    Args:
        graph: Input graph

    Returns:
        Complement graph named after the input
    """
    everyone = set(range(graph.n))
    neighbor_sets = [everyone - set(graph.adjacency[v]) - {v} for v in range(graph.n)]
    return Graph._from_neighbor_sets(neighbor_sets, graph.name)


def load_graph(path: str | Path, complement_graph: bool | None = None) -> Graph:
    """
    Read a DIMACS file

    Args:
        path: File path
        complement_graph: True/False to force, None to complement ``.clq`` files only

    Returns:
        Graph named after the file stem
    """
    path = Path(path)
    graph = parse_dimacs(path.read_bytes(), name=path.stem)
    if complement_graph is None:
        complement_graph = path.suffix.lower() == ".clq"
    if complement_graph:
        logger.info(f"Using the complement of {path.name}")
        graph = complement(graph)
    return graph


def gen_random(n: int, p: float, seed: int) -> Graph:
    """
    Erdos-Renyi G(n, p) graph

    Each of the n(n-1)/2 unordered pairs is drawn with one uniform variate from the
    package generator, in row-major upper-triangle order, and kept when the variate
    is below p. Deterministic per (n, p, seed).

    Args:
        n: Number of vertices
        p: Edge probability in [0, 1]
        seed: Unsigned 64-bit seed

    Returns:
        Graph named ``random:n:p:seed=seed``
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"Edge probability must be in [0, 1], got {p}")
    if n < 0:
        raise ValueError(f"Vertex count must be non-negative, got {n}")
    rng = make_rng(seed)
    rows, cols = np.triu_indices(n, k=1)
    keep = rng.random(rows.size) < p
    edges = zip(rows[keep].tolist(), cols[keep].tolist(), strict=True)
    return Graph.from_edges(n, edges, name=f"random:{n}:{p}:seed={seed}")


def gen_grid(width: int, height: int) -> Graph:
    """
    Grid graph on {1..width} x {1..height}, adjacent iff Manhattan distance is 1

    Point (i, j) is vertex (j - 1) * width + (i - 1).

    Args:
        width: Number of columns (>= 1)
        height: Number of rows (>= 1)

    Returns:
        Graph with width*height vertices and width(height-1)+height(width-1) edges
    """
    if width < 1 or height < 1:
        raise ValueError(f"Grid dimensions must be positive, got {width}x{height}")
    edges = []
    for j in range(height):
        for i in range(width):
            v = j * width + i
            if i + 1 < width:
                edges.append((v, v + 1))
            if j + 1 < height:
                edges.append((v, v + width))
    return Graph.from_edges(width * height, edges, name=f"grid:{width}x{height}")


class GenKind(str, Enum):
    """Instance generator families."""

    RANDOM = "random"
    GRID = "grid"


_RANDOM_SPEC = re.compile(
    r"^random:(?P<n>\d+):(?P<p>[0-9.eE+-]+)(?::(?:seed=)?(?P<seed>\d+))?$"
)
_GRID_SPEC = re.compile(r"^grid:(?P<width>\d+)[xX](?P<height>\d+)$")


class GenParams(BaseModel):
    """
    Generator parameters for random and grid instances.

    Example:
        GenParams.parse("random:1000:0.3:seed=7").build()
        GenParams.parse("grid:10x10").build()
    """

    model_config = ConfigDict(frozen=True)

    kind: GenKind
    n: int = Field(default=0, ge=0)
    p: float = Field(default=0.0, ge=0.0, le=1.0)
    width: int = Field(default=1, ge=1)
    height: int = Field(default=1, ge=1)
    seed: int = Field(default=0, ge=0, le=MAX_SEED)

    @classmethod
    def parse(cls, text: str) -> "GenParams":
        """
        Parse a CLI generator spec

        Accepted forms: ``random:N:P``, ``random:N:P:S``, ``random:N:P:seed=S``,
        ``grid:WxH``.

        Args:
            text: Generator spec

        Returns:
            GenParams

        Raises:
            ValueError: If the spec matches no form
        """
        text = text.strip()
        match = _RANDOM_SPEC.match(text)
        if match:
            return cls(
                kind=GenKind.RANDOM,
                n=int(match["n"]),
                p=float(match["p"]),
                seed=int(match["seed"] or 0),
            )
        match = _GRID_SPEC.match(text)
        if match:
            return cls(kind=GenKind.GRID, width=int(match["width"]), height=int(match["height"]))
        raise ValueError(f"Unrecognized generator spec {text!r} (use random:N:P[:seed=S] or grid:WxH)")

    def build(self) -> Graph:
        """Generate the graph these parameters describe."""
        if self.kind is GenKind.RANDOM:
            return gen_random(self.n, self.p, self.seed)
        return gen_grid(self.width, self.height)

    def label(self) -> str:
        """Canonical spec string (round-trips through parse)."""
        if self.kind is GenKind.RANDOM:
            return f"random:{self.n}:{self.p}:seed={self.seed}"
        return f"grid:{self.width}x{self.height}"
