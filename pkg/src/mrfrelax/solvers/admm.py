"""ADMM on the multilinear decomposition with cyclic consensus constraints.

The energy is rewritten as ``F(x^1, ..., x^D)``, linear in each block, under
the constraints ``x^{d-1} = x^d`` (d = 2..D). Block 1 lives on the product of
simplices, blocks 2..D only on the nonnegative orthant. Each block update is
a projection of an explicit vector ``c^d``.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from ..model import MrfModel, energy_continuous, init_homogeneous
from ..tensor import CoefficientCache, admm_coefficients
from .base import SolverConfig, SolverReport, Termination, make_report, normalized
from .bcd import round_bcd
from .projection import project_blocks, project_nonneg, vertex_blocks


@dataclass
class AdmmState:
    """Decomposed iterate. ``ys[j]`` is the multiplier of ``x^{j+1} = x^{j+2}``."""

    xs: list[np.ndarray]
    ys: list[np.ndarray]
    rho: float
    residual: float = float("inf")
    iter: int = 0
    previous: list[np.ndarray] = field(default_factory=list)


def consensus_term(xs) -> float:
    """``sum_{d>=2} ||x^{d-1} - x^d||^2``."""
    return float(sum(np.dot(a - b, a - b) for a, b in zip(xs[:-1], xs[1:])))


def admm_residual(state: AdmmState) -> float:
    """Squared consensus violation plus squared movement since the previous iterate."""
    movement = sum(float(np.dot(x - p, x - p)) for x, p in zip(state.xs, state.previous))
    return consensus_term(state.xs) + movement


class AdmmDiverged(ArithmeticError):
    """An iterate left the finite range (blocks on the orthant are unbounded)."""


def _finite(v: np.ndarray, what: str) -> np.ndarray:
    if not np.isfinite(v).all():
        raise AdmmDiverged(f"{what} is no longer finite")
    return v


def admm_step(model: MrfModel, state: AdmmState, coeffs) -> None:
    """One sweep over the blocks followed by the multiplier update (in place).

    Raises :class:`AdmmDiverged` as soon as a block or multiplier overflows;
    ``state.previous`` then still holds the blocks from before the step.
    """
    xs, ys, rho = state.xs, state.ys, state.rho
    D = len(xs)
    state.previous = [x.copy() for x in xs]
    if D == 1:
        xs[0] = vertex_blocks(model, coeffs(xs, 1))
    else:
        for d in range(1, D + 1):
            p = coeffs(xs, d)
            if d == 1:
                c = xs[1] - (ys[0] + p) / rho
                xs[0] = _finite(project_blocks(model, c), "x^1")
            elif d < D:
                c = 0.5 * (xs[d - 2] + xs[d]) + (ys[d - 2] - ys[d - 1] - p) / (2.0 * rho)
                xs[d - 1] = _finite(project_nonneg(c), f"x^{d}")
            else:
                c = xs[D - 2] + (ys[D - 2] - p) / rho
                xs[D - 1] = _finite(project_nonneg(c), f"x^{D}")
        new_ys = [_finite(ys[j] + rho * (xs[j] - xs[j + 1]), f"y^{j + 2}") for j in range(D - 1)]
        ys[:] = new_ys
    state.iter += 1
    state.residual = admm_residual(state)


def admm_init(model: MrfModel, x0=None) -> AdmmState:
    D = model.degree
    x0 = init_homogeneous(model) if x0 is None else np.asarray(x0, dtype=np.float64)
    return AdmmState(
        xs=[x0.copy() for _ in range(D)],
        ys=[np.zeros(model.size) for _ in range(D - 1)],
        rho=0.0,
    )


def admm_solve(model: MrfModel, cfg: SolverConfig | None = None, x0=None) -> SolverReport:
    """Cyclic-decomposition ADMM with the adaptive penalty schedule.

    After ``I1`` stabilization iterations, the penalty grows by ``beta`` (up to
    ``rho_max``) at the end of every ``I2``-iteration window in which the best
    residual seen so far did not improve. Stops once the residual drops below
    ``residual_tol``; the labeling is the BCD rounding of ``x^1``.

    Blocks ``d >= 2`` are unbounded, and with a small penalty on models of
    order >= 3 they can overflow. The run then ends as ``Stalled`` at the last
    finite iterate.
    """
    cfg = cfg or SolverConfig()
    opts = cfg.admm
    started = time.perf_counter()
    norm = normalized(model, cfg)
    work = norm.model
    state = admm_init(work, x0)
    state.rho = opts.rho0

    if opts.cache:
        coeffs = CoefficientCache(work).coefficients
    else:
        def coeffs(xs, d):
            return admm_coefficients(work, xs, d)

    energies: list[float] = []
    residuals: list[float] = []
    termination = Termination.MAX_ITERS
    best = float("inf")
    window_improved = False
    if work.num_nodes == 0:
        termination = Termination.CONVERGED
    else:
        for k in range(1, cfg.max_iters + 1):
            try:
                with np.errstate(all="ignore"):
                    admm_step(work, state, coeffs)
            except AdmmDiverged:
                # keep the last finite iterate; its x^1 is still feasible
                state.xs = state.previous
                termination = Termination.STALLED
                break
            energies.append(energy_continuous(work, state.xs[0]))
            residuals.append(state.residual)
            if state.residual < opts.residual_tol:
                termination = Termination.CONVERGED
                break
            if state.residual < best:
                best = state.residual
                window_improved = True
            if k == opts.I1:
                window_improved = False
            elif k > opts.I1 and (k - opts.I1) % opts.I2 == 0:
                if not window_improved:
                    state.rho = min(state.rho * opts.beta, opts.rho_max)
                window_improved = False

    x1 = state.xs[0]
    labels = round_bcd(work, x1)
    return make_report(
        "admm",
        model,
        norm,
        labels,
        energy_continuous(work, x1),
        energies,
        state.iter,
        started,
        termination,
        x=x1.copy(),
        residual_trace=residuals,
        state=state,
    )
