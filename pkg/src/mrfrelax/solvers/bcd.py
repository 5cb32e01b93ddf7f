"""Block coordinate descent over node simplices and the rounding built on it."""

from __future__ import annotations

import time

import numpy as np

from ..model import MrfModel, check_assignment, energy_continuous
from ..tensor import node_coefficient
from .base import SolverConfig, SolverReport, Termination, make_report, normalized

# a label only moves when it beats the incumbent by more than this
TIE_TOL = 1e-12


def _current_vertex(block: np.ndarray) -> int | None:
    hot = np.flatnonzero(block)
    if len(hot) == 1 and block[hot[0]] == 1.0:
        return int(hot[0])
    return None


def bcd_sweeps(model: MrfModel, x, max_sweeps: int, tie_tol: float = TIE_TOL):
    """Run BCD sweeps in node order from ``x``.

    Returns ``(x, trace, sweeps, converged)`` where ``trace`` holds the energy
    before the first sweep and after each sweep. Every visited block ends on a
    vertex; a block already on an optimal vertex is left untouched.
    """
    x = np.array(check_assignment(model, x))
    blocks = model.blocks(x)
    trace = [energy_continuous(model, x)]
    for sweep in range(1, max_sweeps + 1):
        changed = False
        for i in range(model.num_nodes):
            c = node_coefficient(model, blocks, i)
            best = int(np.argmin(c))
            current = _current_vertex(blocks[i])
            if current is not None and c[current] <= c[best] + tie_tol:
                continue
            blocks[i][:] = 0.0
            blocks[i][best] = 1.0
            changed = True
        trace.append(energy_continuous(model, x))
        if not changed:
            return x, trace, sweep, True
    return x, trace, max_sweeps, False


def labels_of(model: MrfModel, x: np.ndarray) -> np.ndarray:
    """Labels of a vertex assignment (argmax of each block)."""
    return np.array([int(np.argmax(b)) for b in model.blocks(x)], dtype=np.int64)


def round_bcd(model: MrfModel, x, max_sweeps: int = 10_000) -> np.ndarray:
    """Discrete labeling reached by BCD from ``x``; its energy never exceeds ``E(x)``."""
    xr, _, _, _ = bcd_sweeps(model, x, max_sweeps)
    return labels_of(model, xr)


def bcd_solve(model: MrfModel, x0, cfg: SolverConfig | None = None) -> SolverReport:
    cfg = cfg or SolverConfig()
    started = time.perf_counter()
    norm = normalized(model, cfg)
    x, trace, sweeps, converged = bcd_sweeps(norm.model, x0, cfg.max_iters)
    return make_report(
        "bcd",
        model,
        norm,
        labels_of(model, x),
        trace[-1],
        trace[1:],
        sweeps,
        started,
        Termination.CONVERGED if converged else Termination.MAX_ITERS,
        x=x,
    )
