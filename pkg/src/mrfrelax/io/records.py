"""JSON run records: one solver run on one model, with config and full traces."""

from __future__ import annotations

import dataclasses
import json
import re
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .._version import __version__
from ..exceptions import SchemaVersionMismatch
from ..solvers import SolverConfig, SolverReport, Termination

SCHEMA_VERSION = 1


@dataclass
class RunRecord:
    model_id: str
    solver: str
    config: SolverConfig
    report: SolverReport
    version: str = __version__


def _report_dict(report: SolverReport) -> dict:
    return {
        "solver": report.solver,
        "labels": [int(v) for v in report.labels],
        "discrete_energy": float(report.discrete_energy),
        "continuous_energy": float(report.continuous_energy),
        "energy_trace": [float(v) for v in report.energy_trace],
        "residual_trace": [float(v) for v in report.residual_trace],
        "iterations": int(report.iterations),
        "wall_time": float(report.wall_time),
        "termination": report.termination.value,
        "x": None if report.x is None else [float(v) for v in report.x],
    }


def record_to_dict(record: RunRecord) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "library_version": record.version,
        "model_id": record.model_id,
        "solver": record.solver,
        "config": dataclasses.asdict(record.config),
        "report": _report_dict(record.report),
    }


def record_from_dict(doc: dict) -> RunRecord:
    if doc.get("schema_version") != SCHEMA_VERSION:
        raise SchemaVersionMismatch(
            f"record schema {doc.get('schema_version')!r}, this library reads {SCHEMA_VERSION}"
        )
    rep = doc["report"]
    report = SolverReport(
        solver=rep["solver"],
        labels=np.asarray(rep["labels"], dtype=np.int64),
        discrete_energy=rep["discrete_energy"],
        continuous_energy=rep["continuous_energy"],
        energy_trace=np.asarray(rep["energy_trace"], dtype=np.float64),
        residual_trace=np.asarray(rep["residual_trace"], dtype=np.float64),
        iterations=rep["iterations"],
        wall_time=rep["wall_time"],
        termination=Termination(rep["termination"]),
        x=None if rep["x"] is None else np.asarray(rep["x"], dtype=np.float64),
    )
    return RunRecord(doc["model_id"], doc["solver"], SolverConfig(**doc["config"]), report, doc["library_version"])


def record_filename(model_id: str, solver: str, seed: int) -> str:
    """Distinct file name per (model id, solver, seed)."""
    safe = re.sub(r"[^A-Za-z0-9_.-]+", "_", model_id)
    return f"{safe}__{solver}__seed{seed}.json"


def write_run_record(record: RunRecord, path) -> Path:
    path = Path(path)
    path.write_text(json.dumps(record_to_dict(record), indent=1))
    return path


def read_run_record(path) -> RunRecord:
    return record_from_dict(json.loads(Path(path).read_text()))
