"""Tests for experiment specs, aggregation and the experiment runner"""

import json
import logging

from pydantic import ValidationError
import pytest
import yaml

from minids.core.graph import gen_grid, serialize_dimacs
from minids.harness.experiment import (
    ExperimentSpec,
    InstanceSpec,
    Mode,
    RunTask,
    aggregate,
    build_tasks,
    execute_run,
    random_ls_spec,
    resolve_threads,
    run_cover_experiment,
    run_experiment,
)
from minids.harness.records import COVER_COLUMNS, RunRecord
from minids.oracle import is_independent_dominating


def _spec(**overrides) -> ExperimentSpec:
    data = {
        "name": "tiny",
        "instances": [{"gen": "grid:4x4"}, {"gen": "random:30:0.2:seed=1"}],
        "k": [2, 3],
        "delta": [8],
        "nu": [2],
        "runs_per_cell": 2,
        "time_limit": None,
        "max_iterations": 5,
        "base_seed": 10,
    }
    data.update(overrides)
    return ExperimentSpec.model_validate(data)


class TestInstanceSpec:
    """Test instance entries"""

    @pytest.mark.parametrize("data", [{}, {"path": "a.clq", "gen": "grid:2x2"}, {"gen": "torus:3"}])
    def test_invalid(self, data):
        with pytest.raises(ValidationError):
            InstanceSpec(**data)

    def test_labels(self):
        assert InstanceSpec(path="graphs/hamming6-2.clq").label == "hamming6-2"
        assert InstanceSpec(gen="random:20:0.3:1").label == "random:20:0.3:seed=1"

    def test_relative_path_uses_dimacs_dir(self, tmp_path):
        (tmp_path / "grid.col").write_text(serialize_dimacs(gen_grid(3, 3)))

        graph = InstanceSpec(path="grid.col").load(tmp_path)

        assert (graph.n, graph.m) == (9, 12)

    def test_missing_file(self, tmp_path):
        with pytest.raises(FileNotFoundError):
            InstanceSpec(path="absent.clq").load(tmp_path)

    def test_p_or_density(self):
        random_instance = InstanceSpec(gen="random:40:0.25:seed=2")
        grid_instance = InstanceSpec(gen="grid:2x2")

        assert random_instance.p_or_density(random_instance.load()) == 0.25
        assert grid_instance.p_or_density(grid_instance.load()) == pytest.approx(0.6667)


class TestExperimentSpec:
    """Test experiment spec validation and expansion"""

    @pytest.mark.parametrize(
        "overrides",
        [
            {"k": [4]},
            {"delta": [0]},
            {"nu": [2, -1]},
            {"instances": []},
            {"runs_per_cell": 0},
            {"time_limit": None, "max_iterations": None},
            {"mode": "cover", "target": "optimum_found"},
        ],
    )
    def test_invalid(self, overrides):
        with pytest.raises(ValidationError):
            _spec(**overrides)

    def test_single_ls_needs_no_limit(self):
        spec = _spec(mode="single_ls", time_limit=None, max_iterations=None)

        assert spec.cells() == [(2, None, None), (3, None, None)]

    def test_cells_are_the_grid(self):
        spec = _spec(delta=[8, 16], nu=[1, 3])

        assert len(spec.cells()) == 8
        assert spec.cells()[0] == (2, 8, 1)

    @pytest.mark.parametrize("dump", [yaml.safe_dump, json.dumps])
    def test_from_file(self, tmp_path, dump):
        path = tmp_path / "spec.txt"
        path.write_text(dump({"name": "file", "instances": [{"gen": "grid:3x3"}], "nu": [1]}))

        spec = ExperimentSpec.from_file(path)

        assert spec.name == "file"
        assert spec.mode is Mode.ILPS
        assert spec.nu == [1]
        assert spec.runs_per_cell == 10

    def test_from_file_defaults_fill_missing_keys(self, tmp_path):
        path = tmp_path / "spec.yaml"
        path.write_text(yaml.safe_dump({"instances": [{"gen": "grid:3x3"}], "runs_per_cell": 4}))

        spec = ExperimentSpec.from_file(path, defaults={"runs_per_cell": 2, "time_limit": 5.0})

        assert spec.runs_per_cell == 4
        assert spec.time_limit == 5.0

    def test_random_ls_spec(self):
        spec = random_ls_spec(0.1, graphs=3, runs=2, n=50)

        assert spec.mode is Mode.SINGLE_LS
        assert [instance.gen for instance in spec.instances] == [
            "random:50:0.1:seed=0",
            "random:50:0.1:seed=1",
            "random:50:0.1:seed=2",
        ]
        assert spec.k == [2, 3]


class TestAggregate:
    """Test per-cell aggregation"""

    def _record(self, instance, k, size, ttb, run=0):
        return RunRecord(instance, 10, 0.5, k, 64, 3, run, run, size, ttb, 100, size + 2)

    def test_min_avg_max(self):
        records = [self._record("g", 2, size, 0.1, run) for run, size in enumerate([3, 4, 6])]
        records.append(self._record("g", 3, 3, 0.4))

        rows = aggregate(records)

        assert len(rows) == 2
        first = rows[0]
        assert (first.min, first.avg, first.max) == (3, 4.3, 6)
        assert first.mean_ttb == pytest.approx(0.1)
        assert first.mean_initial_size == pytest.approx(6.333, abs=1e-3)
        assert len(first.runs) == 3
        assert first.to_row()["runs"] == 3
        assert rows[1].k == 3


class TestRunner:
    """Test task building and execution"""

    def test_build_tasks_order_and_seeds(self):
        tasks = build_tasks(_spec())

        assert len(tasks) == 2 * 2 * 2
        assert [task.seed for task in tasks[:2]] == [10, 11]
        assert tasks[0].instance == "grid:4x4"
        assert tasks[0].config.max_iterations == 5
        assert tasks[-1].k == 3

    def test_run_experiment_ilps(self):
        calls = []
        spec = _spec()

        rows = run_experiment(spec, threads=1, progress=lambda done, total: calls.append((done, total)))

        assert len(rows) == 4
        assert calls[-1] == (8, 8)
        for row in rows:
            assert row.min <= row.avg <= row.max
            assert [record.seed for record in row.runs] == [10, 11]
            assert all(record.iterations == 5 for record in row.runs)

    def test_run_experiment_single_ls(self):
        spec = random_ls_spec(0.2, graphs=2, runs=3, n=40)

        rows = run_experiment(spec)

        assert len(rows) == 4
        for row in rows:
            assert row.delta is None and row.nu is None
            for record in row.runs:
                assert record.best_size <= record.initial_size
                if record.k == 2:
                    assert record.iterations == record.initial_size - record.best_size

    def test_single_ls_task_result_is_valid(self):
        graph = gen_grid(5, 5)
        record = execute_run(RunTask(graph, "grid:5x5", 0.1, Mode.SINGLE_LS, 3, None, None, 0, 4))

        assert record.best_size <= record.initial_size
        assert record.ttb_s >= 0

    def test_parallel_matches_sequential(self, monkeypatch):
        monkeypatch.setenv("MINIDS_THREADS", "2")
        spec = _spec(instances=[{"gen": "grid:5x5"}], k=[2])

        sequential = run_experiment(spec, threads=1)
        parallel = run_experiment(spec, threads=2)

        assert [r.best_size for r in sequential[0].runs] == [r.best_size for r in parallel[0].runs]

    def test_cover_mode_rejected(self):
        with pytest.raises(ValueError, match="run_cover_experiment"):
            run_experiment(_spec(mode="cover"))

    def test_run_cover_experiment(self):
        spec = _spec(mode="cover", instances=[{"gen": "grid:3x3", "optimum": 3}], max_iterations=300)

        rows = run_cover_experiment(spec)

        assert len(rows) == 2
        assert set(rows[0]) == set(COVER_COLUMNS)
        assert rows[0]["target"] == "all_covered"
        assert rows[0]["censored"] == 0


class TestResolveThreads:
    """Test worker count resolution"""

    def test_default_is_one(self, monkeypatch):
        monkeypatch.delenv("MINIDS_THREADS", raising=False)

        assert resolve_threads(None) == 1

    def test_env_caps_request(self, monkeypatch):
        monkeypatch.setenv("MINIDS_THREADS", "1")

        assert resolve_threads(8) == 1

    def test_bad_env_value(self, monkeypatch, caplog):
        monkeypatch.setenv("MINIDS_THREADS", "lots")
        with caplog.at_level(logging.WARNING):
            assert resolve_threads(1) == 1

        assert "MINIDS_THREADS" in caplog.text
