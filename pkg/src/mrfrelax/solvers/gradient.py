"""Projected gradient descent and Frank-Wolfe with exact line search."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from ..model import MrfModel, check_assignment, energy_continuous
from ..tensor import full_gradient
from .base import SolverConfig, SolverReport, Termination, make_report, normalized
from .bcd import round_bcd
from .linesearch import line_search
from .projection import fw_gap, project_blocks, vertex_blocks


def _descent(
    name: str,
    model: MrfModel,
    x0,
    cfg: SolverConfig,
    target: Callable[[MrfModel, np.ndarray, np.ndarray], np.ndarray],
) -> SolverReport:
    started = time.perf_counter()
    norm = normalized(model, cfg)
    work = norm.model
    x = np.array(check_assignment(work, x0))
    energy = energy_continuous(work, x)
    trace = []  # energy after each iteration
    termination = Termination.MAX_ITERS
    iters = 0
    for iters in range(1, cfg.max_iters + 1):
        grad = full_gradient(work, x)
        if fw_gap(work, grad, x) <= cfg.stationarity_tol:
            termination = Termination.CONVERGED
            trace.append(energy)
            break
        x_new = _step(work, x, grad, target, cfg.linesearch_delta)
        if x_new is x:
            termination = Termination.STALLED
            trace.append(energy)
            break
        x = x_new
        new_energy = energy_continuous(work, x)
        trace.append(new_energy)
        small = abs(energy - new_energy) <= cfg.energy_tol * max(1.0, abs(energy))
        energy = new_energy
        if small:
            gap = fw_gap(work, full_gradient(work, x), x)
            termination = Termination.CONVERGED if gap <= cfg.stationarity_tol else Termination.STALLED
            break
    labels = round_bcd(work, x)
    return make_report(name, model, norm, labels, energy, trace, iters, started, termination, x=x)


def _step(model, x, grad, target, delta):
    r = target(model, x, grad) - x
    alpha = line_search(model, x, r, delta)
    return x if alpha == 0.0 else x + alpha * r


def _pgd_target(model, x, grad):
    return project_blocks(model, x - grad)


def _fw_target(model, x, grad):
    return vertex_blocks(model, grad)


def pgd_solve(model: MrfModel, x0, cfg: SolverConfig | None = None) -> SolverReport:
    """Projected gradient descent with unit projection step and exact line search."""
    return _descent("pgd", model, x0, cfg or SolverConfig(), _pgd_target)


def fw_solve(model: MrfModel, x0, cfg: SolverConfig | None = None) -> SolverReport:
    """Frank-Wolfe: blockwise vertex oracle and exact line search."""
    return _descent("fw", model, x0, cfg or SolverConfig(), _fw_target)


def pgd_step(model: MrfModel, x, delta: float = 1e-4) -> np.ndarray:
    """One projected-gradient iteration from ``x``; returns ``x`` itself if no step improves."""
    x = check_assignment(model, x)
    return _step(model, x, full_gradient(model, x), _pgd_target, delta)


def fw_step(model: MrfModel, x, delta: float = 1e-4) -> np.ndarray:
    x = check_assignment(model, x)
    return _step(model, x, full_gradient(model, x), _fw_target, delta)
