"""Main entry point for the minids command-line tool"""

from collections.abc import Callable
import functools
import logging
from pathlib import Path
from typing import Any

import click
from pydantic import ValidationError

from minids import __version__
from minids.cli.commands import (
    load_instance,
    oracle_report,
    solve_csv,
    solve_json,
    solve_report,
    solve_runs,
    solve_text,
    verify_solution,
)
from minids.cli.console import MinidsConsole
from minids.cli.progress_tracker import ProgressTracker
from minids.core.config import Config, set_config
from minids.core.graph import GenParams, serialize_dimacs
from minids.core.solution import format_solution
from minids.harness.experiment import ExperimentSpec, Mode, run_cover_experiment, run_experiment
from minids.harness.records import (
    AGGREGATE_COLUMNS,
    COVER_COLUMNS,
    records_to_csv,
    records_to_json,
    rows_to_csv,
    write_text,
)
from minids.search.ilps import IlpsConfig

console = MinidsConsole()

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
LOG_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR"]


def setup_logging(level: str, log_file: str | None = None) -> None:
    """
    Configure the root logger for a CLI invocation

    Args:
        level: Level name
        log_file: Optional file receiving the same records
    """
    handlers: list[logging.Handler] = [logging.StreamHandler()]
    if log_file:
        Path(log_file).parent.mkdir(parents=True, exist_ok=True)
        handlers.append(logging.FileHandler(log_file))
    logging.basicConfig(
        level=getattr(logging, level.upper(), logging.WARNING),
        format=LOG_FORMAT,
        handlers=handlers,
        force=True,
    )


def handle_errors(func: Callable) -> Callable:
    """
    Map exceptions to exit codes: validation errors exit 2, input errors exit 1

    Args:
        func: Click command callback

    Returns:
        Wrapped callback
    """

    @functools.wraps(func)
    def wrapper(*args: Any, **kwargs: Any) -> Any:
        ctx = click.get_current_context()
        try:
            return func(*args, **kwargs)
        except ValidationError as e:
            console.print_error(f"Invalid parameters: {e}")
            ctx.exit(2)
        except (ValueError, OSError) as e:
            console.print_error(str(e))
            ctx.exit(1)

    return wrapper


class GenSpec(click.ParamType):
    """Generator spec such as random:N:P[:seed=S] or grid:WxH, parsed into GenParams."""

    name = "spec"

    def convert(self, value: Any, param: click.Parameter | None, ctx: click.Context | None) -> GenParams:
        if isinstance(value, GenParams):
            return value
        try:
            return GenParams.parse(value)
        except ValidationError as e:
            self.fail(_first_error(e), param, ctx)
        except ValueError as e:
            self.fail(str(e), param, ctx)


def _first_error(error: ValidationError) -> str:
    detail = error.errors()[0]
    field = ".".join(str(part) for part in detail["loc"])
    return f"{field}: {detail['msg']}"


GEN_SPEC = GenSpec()
INPUT_PATH = click.Path(dir_okay=False, allow_dash=True)


def _config(ctx: click.Context) -> Config:
    return ctx.obj["config"]


def _pick(value: Any, config: Config, key: str) -> Any:
    return value if value is not None else config.get(key)


@click.group()
@click.option("--config", "config_file", default=None, help="Path to config file")
@click.option(
    "--log-level",
    type=click.Choice(LOG_LEVELS, case_sensitive=False),
    default=None,
    help="Logging level (overrides config)",
)
@click.pass_context
def cli(ctx: click.Context, config_file: str | None, log_level: str | None):
    """minids - minimum independent dominating set solver (local search + ILPS)"""
    cli_overrides = {"logging": {"level": log_level}} if log_level else {}
    config = Config(config_file=config_file, cli_overrides=cli_overrides)
    set_config(config)
    setup_logging(config.get("logging.level", "WARNING"), config.get("logging.file"))
    ctx.ensure_object(dict)
    ctx.obj["config"] = config


@cli.command()
@click.option("--input", "input_path", type=INPUT_PATH, default=None, help="DIMACS graph file (- for stdin)")
@click.option("--gen", type=GEN_SPEC, default=None, help="Generator spec: random:N:P[:seed=S] or grid:WxH")
@click.option("--complement/--no-complement", default=None, help="Solve on the complement (default: .clq files)")
@click.option("--k", type=click.IntRange(2, 3), default=None, help="Neighborhood size (2 or 3)")
@click.option("--delta", type=click.IntRange(min=1), default=None, help="Penalty delay")
@click.option("--nu", type=click.IntRange(min=1), default=None, help="Expected kick size")
@click.option("--time-limit", type=float, default=None, help="Seconds per run")
@click.option("--max-iterations", type=click.IntRange(min=1), default=None, help="ILPS iterations per run")
@click.option("--seed", type=click.IntRange(min=0), default=None, help="Seed of run 0 (run i uses seed+i)")
@click.option("--runs", type=click.IntRange(min=1), default=1, help="Independent runs")
@click.option("--init", type=click.Choice(["greedy", "random"]), default=None, help="Initial solution")
@click.option("--plateau-gate", type=click.IntRange(min=0), default=None, help="Plateau only when |S| <= |S*| + gate")
@click.option("--output", "output_format", type=click.Choice(["text", "json", "csv"]), default="text")
@click.option("--trace", "trace_file", default=None, help="JSON-lines per-iteration trace file")
@click.option("--solution-out", default=None, help="Write the best solution (1-based ids) to this file")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Parallel runs (capped by MINIDS_THREADS)")
@click.pass_context
@handle_errors
def solve(
    ctx: click.Context,
    input_path: str | None,
    gen: GenParams | None,
    complement: bool | None,
    k: int | None,
    delta: int | None,
    nu: int | None,
    time_limit: float | None,
    max_iterations: int | None,
    seed: int | None,
    runs: int,
    init: str | None,
    plateau_gate: int | None,
    output_format: str,
    trace_file: str | None,
    solution_out: str | None,
    threads: int | None,
):
    """Run ILPS on one instance"""
    config = _config(ctx)
    if (input_path is None) == (gen is None):
        raise click.UsageError("give exactly one of --input FILE or --gen SPEC")
    graph, label, p = load_instance(input_path, gen, complement)

    iterations = _pick(max_iterations, config, "solver.max_iterations")
    # An iteration cap without an explicit time limit gives a deterministic run.
    if time_limit is None and iterations is not None:
        limit = None
    else:
        limit = _pick(time_limit, config, "solver.time_limit")
    run_config = IlpsConfig(
        k=_pick(k, config, "solver.k"),
        delta=_pick(delta, config, "solver.delta"),
        nu=_pick(nu, config, "solver.nu"),
        time_limit=limit,
        max_iterations=iterations,
        seed=_pick(seed, config, "solver.seed"),
        init=_pick(init, config, "solver.init"),
        plateau_gate=_pick(plateau_gate, config, "solver.plateau_gate"),
    )
    results = solve_runs(
        graph,
        run_config,
        runs=runs,
        threads=_pick(threads, config, "harness.threads"),
        trace_file=trace_file,
    )

    if output_format == "json":
        console.print_raw(solve_json(solve_report(graph, label, run_config, results)))
    elif output_format == "csv":
        console.print_raw(solve_csv(graph, label, p, run_config, results))
    else:
        console.print_raw(solve_text(label, results))

    if solution_out:
        best = min(results, key=lambda result: result.best_size)
        write_text(solution_out, format_solution(best.best_solution))


@cli.command()
@click.argument("spec", type=GEN_SPEC)
@click.option("--output", "output_file", default=None, help="Write DIMACS here instead of stdout")
@handle_errors
def gen(spec: GenParams, output_file: str | None):
    """Generate an instance and write it as DIMACS"""
    params = spec
    text = serialize_dimacs(params.build(), comment=params.label())
    if output_file:
        write_text(output_file, text)
        console.print_success(f"Wrote {params.label()} to {output_file}")
    else:
        console.print_raw(text)


@cli.command()
@click.option("--input", "input_path", type=INPUT_PATH, required=True, help="DIMACS graph file (- for stdin)")
@click.option("--solution", "solution_path", type=click.Path(), required=True, help="File of vertex ids")
@click.option("--complement/--no-complement", default=None, help="Check on the complement (default: .clq files)")
@click.pass_context
@handle_errors
def verify(ctx: click.Context, input_path: str, solution_path: str, complement: bool | None):
    """Check that a vertex set is independent and dominating"""
    graph, label, _ = load_instance(input_path, None, complement)
    outcome = verify_solution(graph, Path(solution_path).read_text(encoding="utf-8"))
    if outcome["valid"]:
        console.print_success(f"valid: independent dominating set of size {outcome['size']} on {label}")
        return
    console.print_error(f"invalid: {outcome['violations'][0]}")
    if len(outcome["violations"]) > 1:
        console.print_message(f"{len(outcome['violations']) - 1} further violation(s)", style="dim")
    ctx.exit(1)


@cli.command()
@click.option("--input", "input_path", type=INPUT_PATH, default=None, help="DIMACS graph file (- for stdin)")
@click.option("--gen", type=GEN_SPEC, default=None, help="Generator spec")
@click.option("--complement/--no-complement", default=None, help="Use the complement (default: .clq files)")
@click.option("--output", "output_file", default=None, help="Write the optimal solution listing here")
@handle_errors
def oracle(input_path: str | None, gen: GenParams | None, complement: bool | None, output_file: str | None):
    """Exact minimum independent dominating set (n <= 26)"""
    if (input_path is None) == (gen is None):
        raise click.UsageError("give exactly one of --input FILE or --gen SPEC")
    graph, label, _ = load_instance(input_path, gen, complement)
    report = oracle_report(graph, label)
    console.print_raw(f"size {report['size']}")
    console.print_raw(" ".join(str(v) for v in report["solution"]))
    if output_file:
        write_text(output_file, report["listing"])


@cli.command()
@click.argument("spec_file", type=click.Path(exists=True, dir_okay=False))
@click.option("--output", "output_file", default=None, help="Per-run CSV (cover rows in cover mode)")
@click.option("--json", "json_file", default=None, help="Per-run JSON")
@click.option("--aggregate", "aggregate_file", default=None, help="Aggregate CSV (Min/Avg/Max/TTB)")
@click.option("--pretty", is_flag=True, help="Print the aggregate table")
@click.option("--threads", type=click.IntRange(min=1), default=None, help="Worker processes")
@click.option("--dimacs-dir", default=None, help="Directory for relative instance paths")
@click.pass_context
@handle_errors
def experiment(
    ctx: click.Context,
    spec_file: str,
    output_file: str | None,
    json_file: str | None,
    aggregate_file: str | None,
    pretty: bool,
    threads: int | None,
    dimacs_dir: str | None,
):
    """Run an experiment spec (YAML or JSON)"""
    config = _config(ctx)
    spec = ExperimentSpec.from_file(
        spec_file,
        defaults={
            "runs_per_cell": config.get("harness.runs_per_cell"),
            "time_limit": config.get("harness.time_limit"),
        },
    )
    dimacs_dir = _pick(dimacs_dir, config, "instances.dimacs_dir")

    tracker = ProgressTracker(console.console) if console.is_terminal else None
    progress = tracker.callback_for(tracker.add_task(spec.name, total=1)) if tracker else None
    try:
        if spec.mode is Mode.COVER:
            rows = run_cover_experiment(spec, dimacs_dir=dimacs_dir, progress=progress)
        else:
            aggregates = run_experiment(
                spec,
                threads=_pick(threads, config, "harness.threads"),
                dimacs_dir=dimacs_dir,
                progress=progress,
            )
    finally:
        if tracker:
            tracker.stop()

    if spec.mode is Mode.COVER:
        text = rows_to_csv(COVER_COLUMNS, rows)
        if output_file:
            write_text(output_file, text)
        else:
            console.print_raw(text)
        return

    records = [record for row in aggregates for record in row.runs]
    if output_file:
        write_text(output_file, records_to_csv(records))
    if json_file:
        write_text(json_file, records_to_json(records))
    if aggregate_file:
        write_text(aggregate_file, rows_to_csv(AGGREGATE_COLUMNS, [row.to_row() for row in aggregates]))
    if pretty:
        console.print_aggregate_table(aggregates, title=spec.name)
    elif not output_file:
        console.print_raw(records_to_csv(records))


@cli.command()
def version():
    """Show version information"""
    console.print_message(f"minids {__version__}", style="bold cyan")


if __name__ == "__main__":
    cli()
