"""Benchmark protocols: grid optimum, single local search statistics, DIMACS sizes"""

from click.testing import CliRunner
import numpy as np
import pytest

from minids.core.graph import gen_grid, load_graph
from minids.harness.experiment import InstanceSpec, random_ls_spec, run_experiment
from minids.main import cli
from minids.middleware.coverage_middleware import CoverTarget, create_coverage_middleware
from minids.oracle import check_solution
from minids.search.ilps import IlpsConfig, ilps

pytestmark = pytest.mark.integration

GRID_OPTIMUM = 24

KELLER6_SOLUTION = "169, 601, 659, 855, 1020, 1215, 1352, 1586, 2052, 2376, 2463, 2818, 2847, 2944, 3281."

C2000_9_SOLUTION = (
    "23, 78, 161, 252, 279, 344, 441, 556, 662, 671, 703, 769, 847, 864, 926, 952, 1056, "
    "1266, 1274, 1475, 1540, 1619, 1636, 1641, 1646, 1673, 1826, 1839, 1915, 1947, 1979."
)


def _run_until(graph, config, optimum):
    hook, report = create_coverage_middleware(graph.n, CoverTarget.OPTIMUM_FOUND, optimum=optimum)
    return ilps(graph, config, hooks=[hook]), report


def test_grid_optimum_single_seed():
    """Test the 10x10 grid reaches its optimum within 5000 iterations"""
    config = IlpsConfig(k=2, delta=40, nu=1, time_limit=None, max_iterations=5000, seed=7)

    result, report = _run_until(gen_grid(10, 10), config, GRID_OPTIMUM)

    assert result.best_size == GRID_OPTIMUM
    assert report.optimum_at is not None


@pytest.mark.slow
def test_grid_optimum_nine_of_ten_seeds():
    graph = gen_grid(10, 10)
    found = 0
    for seed in range(10):
        config = IlpsConfig(k=2, delta=40, nu=1, time_limit=None, max_iterations=5000, seed=seed)
        result, _ = _run_until(graph, config, GRID_OPTIMUM)
        found += result.best_size == GRID_OPTIMUM
    assert found >= 9


@pytest.mark.slow
@pytest.mark.parametrize(
    "p,expected",
    [
        (0.1, (44.57, 37.37, 35.44)),
        (0.5, (9.66, 7.86, 7.01)),
        (0.9, (3.62, 2.99, 2.15)),
    ],
)
def test_single_local_search_means(p, expected):
    """Test random, 2-minimal and 3-minimal mean sizes on G(1000, p) within 10%"""
    rows = run_experiment(random_ls_spec(p, graphs=10, runs=2))
    records = [record for row in rows for record in row.runs]

    random_mean = np.mean([record.initial_size for record in records if record.k == 2])
    two_mean = np.mean([record.best_size for record in records if record.k == 2])
    three_mean = np.mean([record.best_size for record in records if record.k == 3])

    for measured, reference in zip((random_mean, two_mean, three_mean), expected, strict=True):
        assert measured == pytest.approx(reference, rel=0.10)


@pytest.mark.parametrize(
    "name,optimum",
    [
        ("hamming6-2.clq", 12),
        ("hamming6-4.clq", 2),
        ("johnson8-2-4.clq", 4),
        ("johnson8-4-4.clq", 7),
        ("MANN_a9.clq", 9),
        ("c-fat200-1.clq", 10),
        ("c-fat200-2.clq", 22),
    ],
)
def test_dimacs_golden_sizes(dimacs_file, name, optimum):
    graph = load_graph(dimacs_file(name))
    config = IlpsConfig(k=2, delta=64, nu=3, time_limit=30, seed=0)

    result, _ = _run_until(graph, config, optimum)

    assert result.best_size == optimum
    assert check_solution(graph, result.best_solution) == []


def test_solve_cli_on_hamming6_4(dimacs_file):
    path = dimacs_file("hamming6-4.clq")
    result = CliRunner().invoke(
        cli,
        ["solve", "--input", str(path), "--k", "2", "--delta", "64", "--nu", "3", "--time-limit", "10", "--seed", "1"],
    )

    assert result.exit_code == 0, result.output
    assert "best size: 2" in result.stdout


@pytest.mark.slow
@pytest.mark.parametrize(
    "k,delta,expected",
    [*((2, delta, 36) for delta in (1, 2, 4, 8, 16, 32, 64)), (3, 1, 32), (3, 2, 32), (3, 4, 32)],
)
def test_hamming8_2_neighborhood_size(dimacs_file, k, delta, expected):
    graph = load_graph(dimacs_file("hamming8-2.clq"))
    config = IlpsConfig(k=k, delta=delta, nu=3, time_limit=200, seed=0)

    result, _ = _run_until(graph, config, 32)

    assert result.best_size == expected


@pytest.mark.parametrize(
    "name,listing,size",
    [("keller6.clq", KELLER6_SOLUTION, 15), ("C2000.9.clq", C2000_9_SOLUTION, 31)],
)
def test_published_solutions_verify(dimacs_file, tmp_path, name, listing, size):
    path = dimacs_file(name)
    solution = tmp_path / "published.sol"
    solution.write_text(listing)

    result = CliRunner().invoke(cli, ["verify", "--input", str(path), "--solution", str(solution)])

    assert result.exit_code == 0, result.output
    assert f"size {size}" in result.stdout


def test_instance_spec_reads_bundled_files(dimacs_dir):
    """Test experiment instances resolve names against the DIMACS directory"""
    if not (dimacs_dir / "johnson8-2-4.clq").exists():
        pytest.skip("bundled DIMACS files not present")

    graph = InstanceSpec(path="johnson8-2-4.clq").load(dimacs_dir)

    assert (graph.n, graph.m) == (28, 28 * 27 // 2 - 210)
