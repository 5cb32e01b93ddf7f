"""First-order certificates: stationarity gap and decomposed KKT conditions."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import MrfModel, check_assignment
from ..tensor import admm_coefficients, full_gradient
from .projection import fw_gap


def check_stationarity(model: MrfModel, x, tol: float | None = None) -> float:
    """Largest first-order decrease ``max_u grad(x) @ (x - u)`` over the feasible set.

    Always >= 0; a value <= ``tol`` certifies stationarity up to ``tol``. The
    argument ``tol`` is accepted for symmetry with :func:`check_kkt` and not used.
    """
    x = check_assignment(model, x)
    return fw_gap(model, full_gradient(model, x), x)


@dataclass
class KktReport:
    consensus: float  # max_d ||x^d - x^1||_inf
    block_violation: list[float]  # per block, -min_u g_d @ (u - x^d), clipped at 0
    stationarity_gap: float
    tol: float

    @property
    def consensus_ok(self) -> bool:
        return self.consensus <= self.tol

    @property
    def blocks_ok(self) -> bool:
        return all(v <= self.tol for v in self.block_violation)

    @property
    def stationary_ok(self) -> bool:
        return self.stationarity_gap <= 10.0 * self.tol

    @property
    def ok(self) -> bool:
        return self.consensus_ok and self.blocks_ok and self.stationary_ok


def _multiplier_term(ys, d: int, D: int, size: int) -> np.ndarray:
    # derivative of sum_j <y^j, x^{j-1} - x^j> with respect to x^d (1-based d)
    out = np.zeros(size)
    if d < D:
        out += ys[d - 1]
    if d >= 2:
        out -= ys[d - 2]
    return out


def check_kkt(model: MrfModel, state, tol: float) -> KktReport:
    """Evaluate the KKT conditions of the decomposed problem at an ADMM state.

    Block 1 is checked against the product of simplices, blocks ``d >= 2``
    against the nonnegative orthant, using the linearized optimality
    inequality ``(p^d + A_d^T y) @ (u - x^d) >= -tol`` for all feasible ``u``.
    """
    xs = [check_assignment(model, x) for x in state.xs]
    D = len(xs)
    consensus = max((float(np.max(np.abs(x - xs[0]), initial=0.0)) for x in xs[1:]), default=0.0)
    violations = []
    for d in range(1, D + 1):
        g = admm_coefficients(model, xs, d) + _multiplier_term(state.ys, d, D, model.size)
        x = xs[d - 1]
        if d == 1:
            worst = fw_gap(model, g, x)
        else:
            # inf over u >= 0 of g @ (u - x) is -inf when some g < 0, else -g @ x;
            # score both failure modes on a finite scale
            worst = max(-float(np.min(g, initial=0.0)), float(g @ x))
        violations.append(max(worst, 0.0))
    return KktReport(consensus, violations, check_stationarity(model, xs[0]), tol)
