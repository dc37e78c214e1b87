"""
Experiment driver: a grid of (k, delta, nu) cells over a list of instances, a
fixed number of seeded runs per cell, aggregated into Min/Avg/Max/TTB rows.

Modes:
    ilps       full ILPS runs (multi-run DIMACS protocol)
    single_ls  random initial solution, one local search (random vs k-minimal sizes)
    cover      penalty-delay study, see ``cover_study``

Example spec file (YAML or JSON):

    name: fast-dimacs
    mode: ilps
    instances:
      - path: hamming6-2.clq
      - gen: grid:10x10
    k: [2]
    delta: [64]
    nu: [3]
    runs_per_cell: 10
    time_limit: 30
"""

from collections.abc import Callable
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from itertools import product
import logging
import os
from pathlib import Path
import time
from typing import Any

import numpy as np
from pydantic import BaseModel, Field, field_validator, model_validator
import yaml

from minids.core.graph import GenKind, GenParams, Graph, load_graph
from minids.core.rng import MAX_SEED, derive_seed, make_rng
from minids.core.solution import SolutionState
from minids.harness.cover_study import cover_study
from minids.harness.records import RunRecord
from minids.middleware.coverage_middleware import CoverTarget
from minids.search.ilps import IlpsConfig, InitMethod, ilps
from minids.search.neighborhood import local_search

logger = logging.getLogger(__name__)

ProgressCallback = Callable[[int, int], None]


class Mode(str, Enum):
    """Experiment modes."""

    ILPS = "ilps"
    SINGLE_LS = "single_ls"
    COVER = "cover"


class InstanceSpec(BaseModel):
    """
    One instance: a DIMACS file or a generator spec.

    Relative paths are resolved against the experiment's DIMACS directory.
    """

    path: str | None = None
    gen: str | None = None
    complement: bool | None = None
    optimum: int | None = Field(default=None, ge=0)

    @model_validator(mode="after")
    def _one_source(self) -> "InstanceSpec":
        if (self.path is None) == (self.gen is None):
            raise ValueError("an instance needs exactly one of 'path' or 'gen'")
        if self.gen is not None:
            GenParams.parse(self.gen)
        return self

    @property
    def label(self) -> str:
        if self.path is not None:
            return Path(self.path).stem
        return GenParams.parse(self.gen).label()

    def load(self, dimacs_dir: str | Path | None = None) -> Graph:
        """
        Load or generate the graph

        Raises:
            FileNotFoundError: If the DIMACS file is missing
            DimacsFormatError: If it is malformed
        """
        if self.gen is not None:
            return GenParams.parse(self.gen).build()
        path = Path(self.path)
        if not path.is_absolute() and not path.exists() and dimacs_dir is not None:
            path = Path(dimacs_dir) / path
        return load_graph(path, complement_graph=self.complement)

    def p_or_density(self, graph: Graph) -> float:
        """Edge probability for random instances, measured density otherwise."""
        if self.gen is not None:
            params = GenParams.parse(self.gen)
            if params.kind is GenKind.RANDOM:
                return params.p
        return round(graph.density, 4)


class ExperimentSpec(BaseModel):
    """
    A grid of solver configurations over instances.

    Run r of every cell uses seed ``base_seed + r``.
    """

    name: str = "experiment"
    mode: Mode = Mode.ILPS
    instances: list[InstanceSpec] = Field(min_length=1)
    k: list[int] = Field(default_factory=lambda: [2], min_length=1)
    delta: list[int] = Field(default_factory=lambda: [64], min_length=1)
    nu: list[int] = Field(default_factory=lambda: [3], min_length=1)
    runs_per_cell: int = Field(default=10, ge=1)
    time_limit: float | None = Field(default=30.0, gt=0)
    max_iterations: int | None = Field(default=None, ge=1)
    base_seed: int = Field(default=0, ge=0, le=MAX_SEED)
    init: InitMethod = InitMethod.GREEDY
    plateau_gate: int | None = Field(default=None, ge=0)
    target: CoverTarget = CoverTarget.ALL_COVERED

    @field_validator("k")
    @classmethod
    def _check_k(cls, values: list[int]) -> list[int]:
        for value in values:
            if value not in (2, 3):
                raise ValueError(f"k must be 2 or 3, got {value}")
        return values

    @field_validator("delta", "nu")
    @classmethod
    def _check_positive(cls, values: list[int]) -> list[int]:
        for value in values:
            if value < 1:
                raise ValueError(f"delta and nu must be positive, got {value}")
        return values

    @model_validator(mode="after")
    def _check_limits(self) -> "ExperimentSpec":
        if self.mode is not Mode.SINGLE_LS and self.time_limit is None and self.max_iterations is None:
            raise ValueError("set time_limit, max_iterations or both")
        if self.mode is Mode.COVER and self.target is CoverTarget.OPTIMUM_FOUND:
            missing = [item.label for item in self.instances if item.optimum is None]
            if missing:
                raise ValueError(f"optimum_found needs 'optimum' on instances {missing}")
        return self

    @classmethod
    def from_file(cls, path: str | Path, defaults: dict[str, Any] | None = None) -> "ExperimentSpec":
        """
        Read a YAML or JSON spec file.

        Keys missing from the file are taken from ``defaults`` when given there.
        """
        with open(path, encoding="utf-8") as f:
            data = yaml.safe_load(f) or {}
        for key, value in (defaults or {}).items():
            data.setdefault(key, value)
        return cls.model_validate(data)

    def cells(self) -> list[tuple[int, int | None, int | None]]:
        """(k, delta, nu) cells; delta and nu are None in single_ls mode."""
        if self.mode is Mode.SINGLE_LS:
            return [(k, None, None) for k in self.k]
        return list(product(self.k, self.delta, self.nu))

    def ilps_config(self, k: int, delta: int, nu: int, seed: int) -> IlpsConfig:
        return IlpsConfig(
            k=k,
            delta=delta,
            nu=nu,
            time_limit=self.time_limit,
            max_iterations=self.max_iterations,
            seed=seed,
            init=self.init,
            plateau_gate=self.plateau_gate,
        )


def random_ls_spec(
    p: float,
    graphs: int = 10,
    runs: int = 2,
    k: tuple[int, ...] = (2, 3),
    n: int = 1000,
    base_seed: int = 0,
) -> ExperimentSpec:
    """
    Single local-search protocol on random graphs

    ``graphs`` random G(n, p) instances (generator seeds 0..graphs-1), ``runs``
    random initial solutions each, one local search per k.
    """
    return ExperimentSpec(
        name=f"single-ls-p{p}",
        mode=Mode.SINGLE_LS,
        instances=[InstanceSpec(gen=f"random:{n}:{p}:seed={seed}") for seed in range(graphs)],
        k=list(k),
        runs_per_cell=runs,
        time_limit=None,
        base_seed=base_seed,
    )


@dataclass
class AggregateRow:
    """
    Min/Avg/Max of best sizes over the runs of one cell.

    ``avg`` is rounded to one decimal; ``runs`` keeps the raw records.
    """

    instance: str
    n: int
    p_or_density: float
    k: int
    delta: int | None
    nu: int | None
    min: int
    avg: float
    max: int
    mean_ttb: float
    mean_initial_size: float
    runs: list[RunRecord] = field(default_factory=list)

    def to_row(self) -> dict[str, Any]:
        return {
            "instance": self.instance,
            "n": self.n,
            "p_or_density": self.p_or_density,
            "k": self.k,
            "delta": self.delta,
            "nu": self.nu,
            "runs": len(self.runs),
            "min": self.min,
            "avg": self.avg,
            "max": self.max,
            "mean_ttb_s": round(self.mean_ttb, 4),
            "mean_initial_size": round(self.mean_initial_size, 2),
        }


def aggregate(records: list[RunRecord]) -> list[AggregateRow]:
    """
    Group records by (instance, k, delta, nu) in first-seen order and summarize

    Args:
        records: Per-run records

    Returns:
        One AggregateRow per group
    """
    groups: dict[tuple, list[RunRecord]] = {}
    for record in records:
        key = (record.instance, record.k, record.delta, record.nu)
        groups.setdefault(key, []).append(record)

    rows = []
    for (instance, k, delta, nu), members in groups.items():
        sizes = np.array([record.best_size for record in members])
        rows.append(
            AggregateRow(
                instance=instance,
                n=members[0].n,
                p_or_density=members[0].p_or_density,
                k=k,
                delta=delta,
                nu=nu,
                min=int(sizes.min()),
                avg=round(float(sizes.mean()), 1),
                max=int(sizes.max()),
                mean_ttb=float(np.mean([record.ttb_s for record in members])),
                mean_initial_size=float(np.mean([record.initial_size for record in members])),
                runs=members,
            )
        )
    return rows


@dataclass
class RunTask:
    """Everything one worker needs for one run."""

    graph: Graph
    instance: str
    p_or_density: float
    mode: Mode
    k: int
    delta: int | None
    nu: int | None
    run: int
    seed: int
    config: IlpsConfig | None = None


def execute_run(task: RunTask) -> RunRecord:
    """Run one task (module-level so worker processes can unpickle it)."""
    if task.mode is Mode.SINGLE_LS:
        start = time.perf_counter()
        state = SolutionState(task.graph)
        state.random_fill(make_rng(task.seed))
        initial_size = state.size
        moves = local_search(state, task.k)
        return RunRecord(
            instance=task.instance,
            n=task.graph.n,
            p_or_density=task.p_or_density,
            k=task.k,
            delta=None,
            nu=None,
            run=task.run,
            seed=task.seed,
            best_size=state.size,
            ttb_s=time.perf_counter() - start,
            iterations=moves,
            initial_size=initial_size,
        )

    result = ilps(task.graph, task.config)
    return RunRecord(
        instance=task.instance,
        n=task.graph.n,
        p_or_density=task.p_or_density,
        k=task.k,
        delta=task.delta,
        nu=task.nu,
        run=task.run,
        seed=task.seed,
        best_size=result.best_size,
        ttb_s=result.time_to_best,
        iterations=result.iterations,
        initial_size=result.initial_size,
    )


def resolve_threads(requested: int | None) -> int:
    """
    Worker count: the request, capped by MINIDS_THREADS and the CPU count

    Args:
        requested: Desired workers (None = MINIDS_THREADS or 1)
    """
    cap = os.environ.get("MINIDS_THREADS")
    limit = os.cpu_count() or 1
    if cap:
        try:
            limit = min(limit, max(1, int(cap)))
        except ValueError:
            logger.warning(f"Ignoring MINIDS_THREADS={cap!r}: not an integer")
    if requested is None:
        return limit if cap else 1
    return max(1, min(requested, limit))


def build_tasks(spec: ExperimentSpec, dimacs_dir: str | Path | None = None) -> list[RunTask]:
    """Expand the spec into run tasks (instances outermost, then cells, then runs)."""
    tasks = []
    for instance in spec.instances:
        graph = instance.load(dimacs_dir)
        label = instance.label
        density = instance.p_or_density(graph)
        for k, delta, nu in spec.cells():
            for run in range(spec.runs_per_cell):
                seed = derive_seed(spec.base_seed, run)
                config = None
                if spec.mode is Mode.ILPS:
                    config = spec.ilps_config(k, delta, nu, seed)
                tasks.append(
                    RunTask(graph, label, density, spec.mode, k, delta, nu, run, seed, config)
                )
    return tasks


def run_experiment(
    spec: ExperimentSpec,
    threads: int | None = None,
    dimacs_dir: str | Path | None = None,
    progress: ProgressCallback | None = None,
) -> list[AggregateRow]:
    """
    Execute every run of an ilps or single_ls spec and aggregate per cell

    Args:
        spec: Experiment spec
        threads: Worker processes (capped by MINIDS_THREADS)
        dimacs_dir: Directory for relative instance paths
        progress: Optional callback(done, total) after each run

    Returns:
        AggregateRows in task order, each holding its per-run records

    Raises:
        ValueError: For a cover-mode spec (use run_cover_experiment)
    """
    if spec.mode is Mode.COVER:
        raise ValueError("cover mode experiments are run by run_cover_experiment")
    tasks = build_tasks(spec, dimacs_dir)
    workers = resolve_threads(threads)
    logger.info(f"Experiment {spec.name}: {len(tasks)} runs on {workers} worker(s)")

    records: list[RunRecord] = []
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            for record in executor.map(execute_run, tasks):
                records.append(record)
                if progress:
                    progress(len(records), len(tasks))
    else:
        for task in tasks:
            records.append(execute_run(task))
            if progress:
                progress(len(records), len(tasks))
    return aggregate(records)


def run_cover_experiment(
    spec: ExperimentSpec,
    dimacs_dir: str | Path | None = None,
    progress: ProgressCallback | None = None,
) -> list[dict[str, Any]]:
    """
    Cover study for every instance and cell of a cover-mode spec

    Returns:
        Rows with the COVER_COLUMNS keys, one per (instance, k, delta, nu)
    """
    rows = []
    cells = spec.cells()
    total = len(spec.instances) * len(cells)
    for instance in spec.instances:
        graph = instance.load(dimacs_dir)
        for k, delta, nu in cells:
            config = spec.ilps_config(k, delta, nu, spec.base_seed)
            study = cover_study(
                graph, config, target=spec.target, runs=spec.runs_per_cell, optimum=instance.optimum
            )
            rows.append(
                {
                    "instance": instance.label,
                    "n": graph.n,
                    "k": k,
                    "delta": delta,
                    "nu": nu,
                    "target": spec.target.value,
                    "runs": spec.runs_per_cell,
                    "mean_iterations": study.mean_iterations,
                    "censored": study.censored,
                }
            )
            if progress:
                progress(len(rows), total)
    return rows
