"""Command implementations behind the click entry points"""

from concurrent.futures import ProcessPoolExecutor
import json
import logging
from pathlib import Path
import sys
from typing import Any

from minids.core.graph import (
    GenKind,
    GenParams,
    Graph,
    complement as complement_of,
    load_graph,
    parse_dimacs,
)
from minids.core.rng import derive_seed
from minids.core.solution import format_solution, parse_solution
from minids.harness.experiment import resolve_threads
from minids.harness.records import RunRecord, records_to_csv
from minids.middleware.logging_middleware import create_logging_middleware
from minids.oracle import check_solution, exact_min_ids
from minids.search.ilps import IlpsConfig, RunResult, ilps

logger = logging.getLogger(__name__)

# Keys of the solve JSON report that depend on wall-clock time.
TIMING_KEYS = ("time_to_best", "elapsed")


def load_instance(
    input_path: str | None, gen: str | GenParams | None, complement: bool | None = None
) -> tuple[Graph, str, float | None]:
    """
    Read a DIMACS file or build a generated instance

    Args:
        input_path: DIMACS file, "-" for standard input, or None
        gen: Generator spec (text or parsed), or None
        complement: Complement flag (None = by suffix; stdin is kept as read)

    Returns:
        (graph, instance label, edge probability for random instances or None)

    Raises:
        ValueError: If both or neither source is given, or the spec is invalid
    """
    if (input_path is None) == (gen is None):
        raise ValueError("give exactly one of --input FILE or --gen SPEC")
    if gen is not None:
        params = GenParams.parse(gen) if isinstance(gen, str) else gen
        graph = params.build()
        return graph, params.label(), params.p if params.kind is GenKind.RANDOM else None
    if input_path == "-":
        graph = parse_dimacs(sys.stdin.buffer.read(), name="stdin")
        return (complement_of(graph) if complement else graph), "stdin", None
    graph = load_graph(input_path, complement_graph=complement)
    return graph, Path(input_path).stem, None


def _solve_one(graph: Graph, config: IlpsConfig) -> RunResult:
    return ilps(graph, config)


def solve_runs(
    graph: Graph,
    config: IlpsConfig,
    runs: int = 1,
    threads: int | None = None,
    trace_file: str | None = None,
) -> list[RunResult]:
    """
    Run ILPS ``runs`` times with seeds config.seed + i

    Args:
        graph: Input graph
        config: Base configuration
        runs: Number of runs
        threads: Worker processes (capped by MINIDS_THREADS)
        trace_file: Optional JSON-lines iteration trace (forces sequential runs)

    Returns:
        Results ordered by run index
    """
    configs = [config.model_copy(update={"seed": derive_seed(config.seed, run)}) for run in range(runs)]
    workers = resolve_threads(threads)
    if trace_file and workers > 1:
        logger.warning("Iteration tracing runs sequentially; ignoring --threads")
        workers = 1

    if workers > 1 and runs > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            return list(executor.map(_solve_one, [graph] * runs, configs))

    results = []
    for run, run_config in enumerate(configs):
        hooks = []
        if trace_file:
            hooks.append(
                create_logging_middleware(
                    trace_file=trace_file, run_label=f"{graph.name}:run={run}:seed={run_config.seed}"
                )
            )
        results.append(ilps(graph, run_config, hooks=hooks))
    return results


def solve_report(
    graph: Graph, label: str, config: IlpsConfig, results: list[RunResult]
) -> dict[str, Any]:
    """
    JSON-ready report of a solve invocation (solutions 1-based)

    Args:
        graph: Input graph
        label: Instance label
        config: Base configuration
        results: Run results

    Returns:
        Report dictionary
    """
    best = min(results, key=lambda result: result.best_size)
    return {
        "instance": label,
        "n": graph.n,
        "m": graph.m,
        "config": config.model_dump(mode="json"),
        "best_size": best.best_size,
        "best_solution": [v + 1 for v in best.best_solution],
        "runs": [
            {
                "run": run,
                "seed": result.seed,
                "best_size": result.best_size,
                "time_to_best": round(result.time_to_best, 6),
                "elapsed": round(result.elapsed, 6),
                "iterations": result.iterations,
                "initial_size": result.initial_size,
                "best_solution": [v + 1 for v in result.best_solution],
            }
            for run, result in enumerate(results)
        ],
    }


def solve_json(report: dict[str, Any]) -> str:
    return json.dumps(report, indent=2)


def solve_csv(
    graph: Graph, label: str, p: float | None, config: IlpsConfig, results: list[RunResult]
) -> str:
    """Per-run CSV in the experiment schema."""
    density = p if p is not None else round(graph.density, 4)
    records = [
        RunRecord(
            instance=label,
            n=graph.n,
            p_or_density=density,
            k=config.k,
            delta=config.delta,
            nu=config.nu,
            run=run,
            seed=result.seed,
            best_size=result.best_size,
            ttb_s=round(result.time_to_best, 6),
            iterations=result.iterations,
            initial_size=result.initial_size,
        )
        for run, result in enumerate(results)
    ]
    return records_to_csv(records)


def solve_text(label: str, results: list[RunResult]) -> str:
    """Human-readable summary: one line per run, then the best solution."""
    lines = [
        f"run {run}: seed={result.seed} size={result.best_size} "
        f"ttb={result.time_to_best:.3f}s iterations={result.iterations}"
        for run, result in enumerate(results)
    ]
    best = min(results, key=lambda result: result.best_size)
    lines.append(f"instance: {label}")
    lines.append(f"best size: {best.best_size}")
    lines.append("solution: " + " ".join(str(v + 1) for v in best.best_solution))
    return "\n".join(lines)


def verify_solution(graph: Graph, solution_text: str) -> dict[str, Any]:
    """
    Check a 1-based solution listing against a graph

    Args:
        graph: Input graph
        solution_text: Vertex ids separated by newlines, commas or spaces

    Returns:
        {"valid": bool, "size": int, "violations": [...]}

    Raises:
        ValueError: If the listing contains a non-integer token
    """
    vertices = parse_solution(solution_text)
    violations = check_solution(graph, vertices)
    return {"valid": not violations, "size": len(set(vertices)), "violations": violations}


def oracle_report(graph: Graph, label: str) -> dict[str, Any]:
    """
    Exact minimum independent dominating set

    Raises:
        ValueError: If the graph is above the oracle bound
    """
    size, vertices = exact_min_ids(graph)
    return {
        "instance": label,
        "n": graph.n,
        "m": graph.m,
        "size": size,
        "solution": [v + 1 for v in vertices],
        "listing": format_solution(vertices),
    }
