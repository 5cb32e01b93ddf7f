"""Relaxation solvers, rounding, line search and first-order certificates."""

from __future__ import annotations

from ..model import MrfModel, init_homogeneous, init_random, init_unary
from .admm import AdmmState, admm_residual, admm_solve
from .base import AdmmConfig, SolverConfig, SolverReport, Termination
from .bcd import bcd_solve, round_bcd
from .cqp import cqp_energy, cqp_solve
from .gradient import fw_solve, pgd_solve
from .linesearch import line_search, poly_coeffs
from .projection import argmin_vertex, project_nonneg, project_simplex
from .stationarity import check_kkt, check_stationarity

SOLVERS = ("bcd", "pgd", "fw", "admm", "cqp")

_FROM_START = {"bcd": bcd_solve, "pgd": pgd_solve, "fw": fw_solve, "cqp": cqp_solve}


def initializations(model: MrfModel, count: int, seed: int = 0):
    """Unary-solution start followed by ``count - 1`` seeded random starts."""
    starts = [init_unary(model)]
    starts += [init_random(model, [seed, k]) for k in range(1, count)]
    return starts[:count]


def solve(model: MrfModel, solver: str, cfg: SolverConfig | None = None, inits: int = 1, x0=None) -> SolverReport:
    """Run one solver and keep the best discrete energy over ``inits`` starts.

    ADMM starts from the homogeneous assignment unless ``x0`` is given; the
    convex QP uses the homogeneous start for ``inits == 1``. With ``x0`` set,
    only that start is used.
    """
    cfg = cfg or SolverConfig()
    if solver not in SOLVERS:
        raise ValueError(f"unknown solver {solver!r}; choose from {', '.join(SOLVERS)}")
    if solver == "admm":
        return admm_solve(model, cfg, x0=x0)
    run = _FROM_START[solver]
    if x0 is not None:
        starts = [x0]
    elif solver == "cqp" and inits == 1:
        starts = [init_homogeneous(model)]
    else:
        starts = initializations(model, max(inits, 1), cfg.seed)
    best = None
    for start in starts:
        report = run(model, start, cfg)
        if best is None or report.discrete_energy < best.discrete_energy:
            best = report
    return best


__all__ = [
    "AdmmConfig",
    "AdmmState",
    "SOLVERS",
    "SolverConfig",
    "SolverReport",
    "Termination",
    "admm_residual",
    "admm_solve",
    "argmin_vertex",
    "bcd_solve",
    "check_kkt",
    "check_stationarity",
    "cqp_energy",
    "cqp_solve",
    "fw_solve",
    "initializations",
    "line_search",
    "pgd_solve",
    "poly_coeffs",
    "project_nonneg",
    "project_simplex",
    "round_bcd",
    "solve",
]
