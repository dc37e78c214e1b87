"""Shared fixtures: small named graphs, random graph batches, DIMACS files"""

import logging
import os
from pathlib import Path

import pytest

from minids.core.graph import Graph, gen_grid, gen_random

DEFAULT_DIMACS_DIR = Path(__file__).parent / "data" / "dimacs"


def pytest_addoption(parser):
    parser.addoption(
        "--slow", action="store_true", default=False, help="run long benchmark protocols"
    )


def pytest_collection_modifyitems(config, items):
    if config.getoption("--slow"):
        return
    skip_slow = pytest.mark.skip(reason="needs --slow")
    for item in items:
        if "slow" in item.keywords:
            item.add_marker(skip_slow)


@pytest.fixture(autouse=True)
def restore_root_logging():
    """CLI invocations reconfigure the root logger; undo that after each test"""
    root = logging.getLogger()
    handlers, level = list(root.handlers), root.level
    yield
    root.handlers = handlers
    root.setLevel(level)


def path_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, i + 1) for i in range(n - 1)], name=f"P{n}")


def cycle_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)], name=f"C{n}")


def star_graph(leaves: int) -> Graph:
    """Center 0, leaves 1..leaves."""
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)], name=f"K1,{leaves}")


def complete_graph(n: int) -> Graph:
    return Graph.from_edges(n, [(u, v) for u in range(n) for v in range(u + 1, n)], name=f"K{n}")


def random_graphs(count: int, n_range: tuple[int, int], densities=(0.2, 0.5, 0.8), seed: int = 0):
    """Deterministic batch of G(n, p) graphs with n in the inclusive range."""
    low, high = n_range
    graphs = []
    for index in range(count):
        n = low + (index * 7 + seed) % (high - low + 1)
        p = densities[index % len(densities)]
        graphs.append(gen_random(n, p, seed * 100_003 + index))
    return graphs


@pytest.fixture
def p3():
    """Path a-b-c as 0-1-2"""
    return path_graph(3)


@pytest.fixture
def p4():
    """Path a-b-c-d as 0-1-2-3"""
    return path_graph(4)


@pytest.fixture
def p5():
    """Path a-b-c-d-e as 0-1-2-3-4"""
    return path_graph(5)


@pytest.fixture
def c5():
    return cycle_graph(5)


@pytest.fixture
def c6():
    return cycle_graph(6)


@pytest.fixture
def k5():
    return complete_graph(5)


@pytest.fixture
def star3():
    """Star K1,3 with center 0"""
    return star_graph(3)


@pytest.fixture
def grid4():
    return gen_grid(4, 4)


@pytest.fixture
def dimacs_dir() -> Path:
    return Path(os.environ.get("MINIDS_DIMACS_DIR", DEFAULT_DIMACS_DIR))


@pytest.fixture
def dimacs_file(dimacs_dir):
    """Return a function resolving a benchmark file name, skipping when absent"""

    def resolve(name: str) -> Path:
        path = dimacs_dir / name
        if not path.exists():
            pytest.skip(f"DIMACS file {name} not found in {dimacs_dir}")
        return path

    return resolve
