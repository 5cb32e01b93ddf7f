import io
import json
import subprocess
import sys

import pytest

from mrfrelax.generators import gen_grid
from mrfrelax.io import cli_main, read_run_record, serialize_native
from mrfrelax.io.records import record_to_dict
from mrfrelax.oracle import brute_force_map

UAI = "MARKOV\n2\n2 2\n2\n1 0\n2 0 1\n2\n0.8 0.2\n4\n0.1 0.2 0.3 0.4\n"


def run(argv):
    out, err = io.StringIO(), io.StringIO()
    code = cli_main(argv, stdout=out, stderr=err)
    return code, out.getvalue(), err.getvalue()


@pytest.fixture
def grid_file(tmp_path):
    path = tmp_path / "grid.mrfe"
    path.write_text(serialize_native(gen_grid(3, 3, 2, seed=2)))
    return path


def test_solve_prints_energy_and_writes_record(tmp_path):
    model = tmp_path / "m.uai"
    model.write_text(UAI)
    out_file = tmp_path / "rec.json"
    code, out, _ = run(["solve", "--model", str(model), "--solver", "admm", "--out", str(out_file)])
    assert code == 0
    lines = out.strip().splitlines()
    assert len(lines) == 1
    rec = read_run_record(out_file)
    assert float(lines[0]) == rec.report.discrete_energy
    assert rec.solver == "admm" and rec.model_id == "m"


def test_default_record_path(tmp_path, grid_file, monkeypatch):
    monkeypatch.chdir(tmp_path)
    code, _, _ = run(["solve", "--model", str(grid_file), "--solver", "fw", "--seed", "5", "--inits", "2"])
    assert code == 0
    assert (tmp_path / "grid__fw__seed5.json").exists()


def test_unknown_solver_is_usage_error(grid_file):
    code, out, err = run(["solve", "--model", str(grid_file), "--solver", "icm"])
    assert code == 1 and "usage" in err and out == ""


def test_missing_subcommand_is_usage_error():
    assert run([])[0] == 1
    assert run(["bench"])[0] == 1


def test_bad_model_is_failure(tmp_path):
    bad = tmp_path / "bad.uai"
    bad.write_text("BAYES\n")
    code, _, err = run(["solve", "--model", str(bad), "--solver", "bcd"])
    assert code == 2 and "MARKOV" in err
    assert run(["check", "--model", str(tmp_path / "missing.mrfe")])[0] == 2


def test_cqp_on_higher_order_is_failure(tmp_path):
    path = tmp_path / "t.mrfe"
    path.write_text("MRF-E v1\n3\n2 2 2\n1\n3 0 1 2\n0 0 0 0 0 0 0 1\n")
    assert run(["solve", "--model", str(path), "--solver", "cqp", "--out", str(tmp_path / "r.json")])[0] == 2


def test_oracle_matches_brute_force(grid_file):
    code, out, _ = run(["oracle", "--model", str(grid_file)])
    labels, energy = brute_force_map(gen_grid(3, 3, 2, seed=2))
    assert code == 0
    first, second = out.strip().splitlines()
    assert float(first) == energy
    assert second.split() == [str(v) for v in labels]


def test_check(grid_file):
    code, out, _ = run(["check", "--model", str(grid_file)])
    assert code == 0 and "9 nodes" in out and "degree 2" in out


def test_repeat_runs_identical(tmp_path, grid_file):
    docs = []
    for k in range(2):
        path = tmp_path / f"{k}.json"
        run(["solve", "--model", str(grid_file), "--solver", "bcd", "--seed", "1", "--inits", "4", "--out", str(path)])
        doc = record_to_dict(read_run_record(path))
        doc["report"].pop("wall_time")
        docs.append(doc)
    assert docs[0] == docs[1]


def test_max_iters_flag(tmp_path, grid_file):
    path = tmp_path / "r.json"
    run(["solve", "--model", str(grid_file), "--solver", "admm", "--max-iters", "7", "--out", str(path)])
    rec = read_run_record(path)
    assert rec.config.max_iters == 7 and rec.report.iterations == 7


def test_bench_suite(tmp_path):
    spec = tmp_path / "suite.json"
    spec.write_text(json.dumps({"instances": [{"generator": "zero", "nodes": 2}], "solvers": ["bcd", "admm"]}))
    code, out, _ = run(["bench", "--suite", str(spec), "--out", str(tmp_path / "out")])
    assert code == 0 and "zero" in out
    assert (tmp_path / "out" / "summary.json").exists()


def test_console_entry_point(grid_file):
    proc = subprocess.run(
        [sys.executable, "-c", "from mrfrelax.io.cli import main; main()", "check", "--model", str(grid_file)],
        capture_output=True,
        text=True,
    )
    assert proc.returncode == 0 and proc.stdout.startswith("ok")
