import json

import numpy as np
import pytest

from mrfrelax.bench import DESK_SUITE, expand_instances, model_hash, run_suite, worker_count
from mrfrelax.generators import gen_grid, gen_higher_order, gen_random, grid_edges
from mrfrelax.io import read_run_record, serialize_native
from mrfrelax.model import validate
from mrfrelax.oracle import brute_force_map
from mrfrelax.solvers import SOLVERS, solve
from mrfrelax.tensor import admm_coefficients, full_gradient
from mrfrelax.model import init_random


def test_grid_shapes():
    assert grid_edges(1, 1) == []
    assert len(grid_edges(2, 2, "N4")) == 4
    assert len(grid_edges(2, 2, "N8")) == 6
    m = gen_grid(1, 1, 3)
    assert [c.arity for c in m.cliques] == [1]
    with pytest.raises(ValueError):
        grid_edges(2, 2, "N6")


def test_grid_potentials():
    m = gen_grid(3, 4, 3, "N8", "potts", lam=0.5, seed=1)
    pair = [c for c in m.cliques if c.arity == 2]
    np.testing.assert_array_equal(pair[0].potential, 0.5 * (1 - np.eye(3)))
    for c in m.cliques:
        assert np.all(np.abs(c.potential) <= 1.0)


def test_generators_deterministic():
    assert model_hash(gen_grid(3, 3, 2, seed=9)) == model_hash(gen_grid(3, 3, 2, seed=9))
    assert model_hash(gen_grid(3, 3, 2, seed=9)) != model_hash(gen_grid(3, 3, 2, seed=10))
    assert serialize_native(gen_higher_order(6, 2, 5, seed=1)) == serialize_native(gen_higher_order(6, 2, 5, seed=1))


def test_potts_zero_is_separable():
    m = gen_grid(3, 3, 3, "N4", "potts", lam=0.0, seed=4)
    unary = np.array([np.argmin(c.potential) for c in m.cliques if c.arity == 1])
    labels, best = brute_force_map(m)
    np.testing.assert_array_equal(labels, unary)
    for name in SOLVERS:
        assert solve(m, name).discrete_energy == pytest.approx(best, abs=1e-12)


def test_higher_order_generator():
    assert gen_higher_order(5, 2, 0).degree == 1
    m = validate(gen_higher_order(6, 3, 6, seed=2))
    assert m.degree == 3 and len(m.cliques) == 12
    with pytest.raises(ValueError):
        gen_higher_order(4, 2, 5)
    x = init_random(m, 0)
    total = sum(admm_coefficients(m, [x] * 3, d) for d in (1, 2, 3))
    assert np.max(np.abs(total - full_gradient(m, x))) < 1e-10


def test_random_generator_label_range():
    m = gen_random(6, (2, 4), 3, 5, seed=3)
    assert all(2 <= c <= 4 for c in m.label_counts) and m.degree <= 3


def test_expand_instances(tmp_path):
    spec = {
        "instances": [
            {"generator": "grid", "rows": 2, "cols": 2, "labels": 2, "seeds": {"start": 3, "count": 2}},
            {"file": "m.mrfe"},
        ]
    }
    tasks = expand_instances(spec, tmp_path)
    assert [t["id"] for t in tasks] == ["grid-3", "grid-4", "m"]
    assert tasks[2]["file"] == str(tmp_path / "m.mrfe")
    with pytest.raises(ValueError):
        expand_instances({"instances": [{"generator": "nope"}]})


def test_zero_suite(tmp_path):
    spec = {"instances": [{"generator": "zero", "nodes": 3}], "solvers": list(SOLVERS)}
    rows = run_suite(spec, tmp_path)
    assert len(rows) == len(SOLVERS)
    for row in rows:
        assert row["value"] == 0.0 and row["gap"] == 0.0 and row["error"] is None


def test_suite_records_match_summary(tmp_path):
    spec = {
        "instances": [{"generator": "grid", "rows": 2, "cols": 3, "labels": 2, "seeds": [1, 2]}],
        "solvers": ["bcd", {"name": "admm", "config": {"max_iters": 300}}, "cqp"],
    }
    rows = run_suite(spec, tmp_path)
    summary = json.loads((tmp_path / "summary.json").read_text())["rows"]
    assert summary == json.loads(json.dumps(rows))
    for row in rows:
        rec = read_run_record(tmp_path / row["record"])
        assert rec.report.discrete_energy == row["value"]
        assert rec.report.iterations == row["iterations"]
    assert (tmp_path / "summary.txt").read_text().splitlines()[0].startswith("instance")


def test_suite_deterministic(tmp_path):
    spec = {"instances": [{"generator": "grid", "rows": 2, "cols": 2, "labels": 3, "seeds": [0, 1]}], "solvers": ["pgd", "fw"]}

    def strip(rows):
        return [{k: v for k, v in r.items() if k != "time"} for r in rows]

    assert strip(run_suite(spec, tmp_path / "a")) == strip(run_suite(spec, tmp_path / "b"))


def test_suite_continues_past_failures(tmp_path):
    spec = {
        "instances": [
            {"generator": "higher_order", "nodes": 4, "labels": 2, "num_triples": 2, "seeds": [0]},
            {"file": str(tmp_path / "missing.mrfe")},
        ],
        "solvers": ["bcd", "cqp"],
    }
    rows = run_suite(spec, tmp_path / "out")
    by = {(r["instance"], r["solver"]): r for r in rows}
    assert by[("higher_order-0", "bcd")]["error"] is None
    assert "NotPairwise" in by[("higher_order-0", "cqp")]["error"]
    assert by[("missing", "bcd")]["error"] and by[("missing", "bcd")]["value"] is None
    assert "failed" in (tmp_path / "out" / "summary.txt").read_text()


def test_oracle_column_unavailable_above_cap(tmp_path):
    spec = {"instances": [{"generator": "grid", "rows": 3, "cols": 3, "labels": 2}], "solvers": ["bcd"], "oracle_cap": 10}
    (row,) = run_suite(spec, tmp_path)
    assert row["oracle"] is None and row["gap"] is None and row["value"] is not None


def test_parallel_matches_serial(tmp_path):
    spec = {"instances": [{"generator": "grid", "rows": 2, "cols": 2, "labels": 2, "seeds": [0, 1, 2]}], "solvers": ["bcd", "fw"]}
    serial = run_suite(spec, tmp_path / "s", workers=0)
    parallel = run_suite(spec, tmp_path / "p", workers=2)
    strip = lambda rows: [{k: v for k, v in r.items() if k != "time"} for r in rows]  # noqa: E731
    assert strip(serial) == strip(parallel)


def test_worker_count(monkeypatch):
    monkeypatch.delenv("MAP_THREADS", raising=False)
    assert worker_count() == 0
    monkeypatch.setenv("MAP_THREADS", "3")
    assert worker_count() == 3
    monkeypatch.setenv("MAP_THREADS", "many")
    with pytest.raises(ValueError):
        worker_count()


def test_desk_suite_shape():
    tasks = expand_instances(DESK_SUITE)
    assert len(tasks) == 50 and tasks[0]["params"]["rows"] == 3
