"""Multi-solver comparison harness over generated or file-based instances.

A suite spec is a JSON document::

    {
      "instances": [
        {"generator": "grid", "rows": 3, "cols": 3, "labels": 2, "seeds": {"start": 0, "count": 50}},
        {"generator": "higher_order", "nodes": 6, "labels": 2, "num_triples": 4, "seeds": [1, 2]},
        {"file": "models/tiny.mrfe", "id": "tiny"}
      ],
      "solvers": ["bcd", "pgd", "fw", {"name": "admm", "config": {"max_iters": 20000}}],
      "config": {"seed": 0},
      "oracle_cap": 1000000
    }

Relative file paths resolve against the spec file's directory. Solver entries
may override ``inits`` and any :class:`SolverConfig` field. Default inits are
5 for BCD/PGD/FW (unary start plus random starts) and 1 for ADMM (homogeneous
start) and the convex QP.
"""

from __future__ import annotations

import functools
import hashlib
import json
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from .generators import gen_grid, gen_higher_order, gen_random, grid_edges
from .io.formats import load_model, serialize_native
from .io.records import RunRecord, record_filename, write_run_record
from .model import Clique, MrfModel
from .oracle import DEFAULT_CAP, brute_force_map, search_space
from .solvers import SolverConfig, solve

DEFAULT_INITS = {"bcd": 5, "pgd": 5, "fw": 5, "admm": 1, "cqp": 1}

GENERATORS = {
    "grid": gen_grid,
    "higher_order": gen_higher_order,
    "random": gen_random,
}

DESK_SUITE = {
    "name": "desk",
    "instances": [
        {"generator": "grid", "rows": 3, "cols": 3, "labels": 2, "connectivity": "N4", "seeds": {"start": 0, "count": 50}}
    ],
    "solvers": ["bcd", "pgd", "fw", "admm", "cqp"],
    "oracle_cap": DEFAULT_CAP,
}

SUMMARY_FIELDS = (
    "instance",
    "hash",
    "solver",
    "value",
    "oracle",
    "gap",
    "iterations",
    "time",
    "termination",
    "record",
    "error",
)


def model_hash(model: MrfModel) -> str:
    """Stable content hash (of the native serialization)."""
    return hashlib.sha256(serialize_native(model).encode()).hexdigest()[:16]


def zero_model(nodes: int = 1, labels: int = 2) -> MrfModel:
    return MrfModel((labels,) * nodes, [Clique((i,), np.zeros(labels)) for i in range(nodes)])


GENERATORS["zero"] = zero_model


def _seeds(entry) -> list:
    seeds = entry.get("seeds", [entry.get("seed", 0)])
    if isinstance(seeds, dict):
        return list(range(seeds.get("start", 0), seeds.get("start", 0) + seeds["count"]))
    return list(seeds)


def expand_instances(spec: dict, base: Path | None = None) -> list[dict]:
    """Flatten the spec's instance entries into one task per concrete model."""
    tasks = []
    for entry in spec.get("instances", []):
        if "file" in entry:
            path = Path(entry["file"])
            if base is not None and not path.is_absolute():
                path = base / path
            tasks.append({"id": entry.get("id", path.stem), "file": str(path)})
            continue
        gen = entry.get("generator")
        if gen not in GENERATORS:
            raise ValueError(f"unknown generator {gen!r}; choose from {', '.join(sorted(GENERATORS))}")
        params = {k: v for k, v in entry.items() if k not in ("generator", "seeds", "seed", "id")}
        if gen == "zero":
            tasks.append({"id": entry.get("id", "zero"), "generator": gen, "params": params})
            continue
        prefix = entry.get("id", gen)
        for s in _seeds(entry):
            tasks.append({"id": f"{prefix}-{s}", "generator": gen, "params": {**params, "seed": s}})
    return tasks


def build_instance(task: dict) -> MrfModel:
    if "file" in task:
        return load_model(task["file"])
    params = dict(task["params"])
    if isinstance(params.get("labels"), list):
        params["labels"] = tuple(params["labels"])
    return GENERATORS[task["generator"]](**params)


def _solver_entries(spec: dict):
    base_cfg = spec.get("config", {})
    for entry in spec.get("solvers", list(DEFAULT_INITS)):
        if isinstance(entry, str):
            entry = {"name": entry}
        name = entry["name"]
        cfg = SolverConfig(**{**base_cfg, **entry.get("config", {})})
        yield name, entry.get("inits", DEFAULT_INITS.get(name, 1)), cfg


def _run_task(task: dict, solvers: list, cap: int, out_dir: str) -> list[dict]:
    rows = []
    try:
        model = build_instance(task)
    except Exception as exc:  # a broken instance is marked, not fatal
        return [dict(_blank(task["id"], name), error=f"{type(exc).__name__}: {exc}") for name, _, _ in solvers]
    digest = model_hash(model)
    oracle = None
    if search_space(model) <= cap:
        oracle = brute_force_map(model, cap)[1]
    for name, inits, cfg in solvers:
        row = dict(_blank(task["id"], name), hash=digest, oracle=oracle)
        try:
            report = solve(model, name, cfg, inits=inits)
        except Exception as exc:
            row["error"] = f"{type(exc).__name__}: {exc}"
            rows.append(row)
            continue
        fname = record_filename(task["id"], name, cfg.seed)
        write_run_record(RunRecord(task["id"], name, cfg, report), Path(out_dir) / fname)
        row.update(
            value=report.discrete_energy,
            gap=None if oracle is None else report.discrete_energy - oracle,
            iterations=report.iterations,
            time=report.wall_time,
            termination=report.termination.value,
            record=fname,
        )
        rows.append(row)
    return rows


def _blank(instance: str, solver: str) -> dict:
    return dict.fromkeys(SUMMARY_FIELDS) | {"instance": instance, "solver": solver}


def worker_count() -> int:
    """``MAP_THREADS`` (default 0): number of worker processes, 0 meaning serial."""
    raw = os.environ.get("MAP_THREADS", "0")
    try:
        return max(0, int(raw))
    except ValueError:
        raise ValueError(f"MAP_THREADS must be an integer, got {raw!r}") from None


def load_suite(path) -> tuple[dict, Path]:
    if str(path) == "desk":
        return DESK_SUITE, Path.cwd()
    path = Path(path)
    return json.loads(path.read_text()), path.parent


def run_suite(spec, out_dir, workers: int | None = None) -> list[dict]:
    """Run every solver on every instance; write RunRecords and summary files.

    ``spec`` is a dict or a path to a JSON spec. Returns the summary rows,
    sorted by (instance order, solver order). Failed runs carry an ``error``
    message and empty value columns.
    """
    base = None
    if not isinstance(spec, dict):
        spec, base = load_suite(spec)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = expand_instances(spec, base)
    solvers = list(_solver_entries(spec))
    cap = int(spec.get("oracle_cap", DEFAULT_CAP))
    workers = worker_count() if workers is None else workers
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(functools.partial(_run_task, solvers=solvers, cap=cap, out_dir=str(out)), tasks))
    else:
        chunks = [_run_task(t, solvers, cap, str(out)) for t in tasks]
    rows = [row for chunk in chunks for row in chunk]
    (out / "summary.json").write_text(json.dumps({"spec": spec, "rows": rows}, indent=1))
    (out / "summary.txt").write_text(format_summary(rows))
    return rows


def _cell(v) -> str:
    if v is None:
        return "-"
    if isinstance(v, float):
        return f"{v:.6g}"
    return str(v)


def format_summary(rows: list[dict]) -> str:
    """Aligned text table plus a per-solver aggregate block."""
    cols = ("instance", "solver", "value", "oracle", "gap", "iterations", "time", "termination", "error")
    table = [cols] + [tuple(_cell(r[c]) for c in cols) for r in rows]
    widths = [max(len(line[i]) for line in table) for i in range(len(cols))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(line, widths)).rstrip() for line in table]
    lines.append("")
    lines.append("solver  runs  failed  at_oracle  mean_value  total_time")
    for name in dict.fromkeys(r["solver"] for r in rows):
        mine = [r for r in rows if r["solver"] == name]
        ok = [r for r in mine if r["error"] is None]
        hits = sum(1 for r in ok if r["gap"] is not None and r["gap"] <= 1e-6)
        mean = sum(r["value"] for r in ok) / len(ok) if ok else float("nan")
        total = sum(r["time"] for r in ok)
        lines.append(f"{name:<6}  {len(mine):>4}  {len(mine) - len(ok):>6}  {hits:>9}  {mean:>10.6g}  {total:>10.3f}")
    return "\n".join(lines) + "\n"


__all__ = [
    "DESK_SUITE",
    "expand_instances",
    "format_summary",
    "gen_grid",
    "gen_higher_order",
    "gen_random",
    "grid_edges",
    "model_hash",
    "run_suite",
]
