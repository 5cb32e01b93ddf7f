"""Convex QP relaxation of pairwise models, solved by Frank-Wolfe."""

from __future__ import annotations

import time

import numpy as np

from ..exceptions import NotPairwise
from ..model import MrfModel, check_assignment, energy_continuous
from ..tensor import full_gradient
from .base import SolverConfig, SolverReport, Termination, make_report, normalized
from .bcd import round_bcd
from .linesearch import minimize_poly, pairwise_coeffs
from .projection import fw_gap, vertex_blocks


def _require_pairwise(model: MrfModel) -> None:
    if model.degree > 2:
        raise NotPairwise(f"convex QP relaxation needs cliques of size <= 2, got {model.degree}")


def cqp_diagonal(model: MrfModel) -> np.ndarray:
    """``d_i(s)``: half the absolute row mass of every pairwise table touching ``i``."""
    _require_pairwise(model)
    d = np.zeros(model.size)
    for g in model.groups:
        if g.arity != 2:
            continue
        half = 0.5 * np.abs(g.tensors)
        np.add.at(d, g.gather[0], half.sum(axis=2))
        np.add.at(d, g.gather[1], half.sum(axis=1))
    return d


def cqp_energy(model: MrfModel, x, diag=None) -> float:
    """``E(x) - d @ x + x @ diag(d) @ x``; equals ``E`` on every discrete point."""
    x = check_assignment(model, x)
    d = cqp_diagonal(model) if diag is None else diag
    # the correction is computed as one difference so it is exactly 0 at vertices
    return energy_continuous(model, x) + (float(d @ (x * x)) - float(d @ x))


def cqp_gradient(model: MrfModel, x, diag) -> np.ndarray:
    return full_gradient(model, x) - diag + 2.0 * diag * x


def cqp_coeffs(model: MrfModel, x, r, diag) -> np.ndarray:
    """Ascending ``(C', B', A')`` of ``a -> E_cqp(x + a r)``."""
    C, B, A = pairwise_coeffs(model, x, r)
    return np.array(
        [
            C - float(diag @ x) + float(diag @ (x * x)),
            B - float(diag @ r) + 2.0 * float(diag @ (r * x)),
            A + float(diag @ (r * r)),
        ]
    )


def cqp_solve(model: MrfModel, x0, cfg: SolverConfig | None = None) -> SolverReport:
    """Minimize the convex QP energy by Frank-Wolfe, then round with BCD on ``E``.

    The reported continuous energy is the original energy ``E`` at the QP
    minimizer; the trace records the QP objective.
    """
    cfg = cfg or SolverConfig()
    _require_pairwise(model)
    started = time.perf_counter()
    norm = normalized(model, cfg)
    work = norm.model
    diag = cqp_diagonal(work)
    x = np.array(check_assignment(work, x0))
    value = cqp_energy(work, x, diag)
    trace = []  # QP objective after each iteration
    termination = Termination.MAX_ITERS
    iters = 0
    for iters in range(1, cfg.max_iters + 1):
        grad = cqp_gradient(work, x, diag)
        if fw_gap(work, grad, x) <= cfg.stationarity_tol:
            termination = Termination.CONVERGED
            trace.append(value)
            break
        r = vertex_blocks(work, grad) - x
        coeffs = cqp_coeffs(work, x, r, diag)
        alpha = minimize_poly(coeffs)
        if alpha == 0.0:
            termination = Termination.STALLED
            trace.append(value)
            break
        x = x + alpha * r
        new_value = float(np.polynomial.polynomial.polyval(alpha, coeffs))
        trace.append(new_value)
        small = abs(value - new_value) <= cfg.energy_tol * max(1.0, abs(value))
        value = new_value
        if small:
            gap = fw_gap(work, cqp_gradient(work, x, diag), x)
            termination = Termination.CONVERGED if gap <= cfg.stationarity_tol else Termination.STALLED
            break
    labels = round_bcd(work, x)
    return make_report(
        "cqp", model, norm, labels, energy_continuous(work, x), trace, iters, started, termination, x=x
    )
