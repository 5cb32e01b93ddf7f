"""Exact line search along a segment of the multilinear energy.

``E(x + a r)`` is a polynomial in ``a`` of degree at most ``D`` (the model
degree), so the search reduces to recovering its coefficients and minimizing
a univariate polynomial on ``[0, 1]``.
"""

from __future__ import annotations

import math

import numpy as np
from numpy.polynomial import polynomial as P

from ..exceptions import SingularProbeSystem
from ..model import MrfModel, check_assignment, energy_continuous

DEFAULT_DELTA = 1e-4


def pairwise_coeffs(model: MrfModel, x, r) -> np.ndarray:
    """Closed-form ``(C, B, A)`` of ``A a^2 + B a + C`` for a model of degree <= 2."""
    x = check_assignment(model, x)
    r = check_assignment(model, r)
    A = B = 0.0
    for g in model.groups:
        if g.arity == 1:
            B += float(np.einsum("gA,gA->", g.tensors, r[g.gather[0]]))
        elif g.arity == 2:
            xi, xj = x[g.gather[0]], x[g.gather[1]]
            ri, rj = r[g.gather[0]], r[g.gather[1]]
            A += float(np.einsum("gAB,gA,gB->", g.tensors, ri, rj))
            B += float(np.einsum("gAB,gA,gB->", g.tensors, xi, rj))
            B += float(np.einsum("gAB,gA,gB->", g.tensors, ri, xj))
        else:
            raise ValueError("closed-form coefficients need a pairwise model")
    return np.array([energy_continuous(model, x), B, A])


def probe_coeffs(model: MrfModel, x, r, degree: int | None = None) -> np.ndarray:
    """Coefficients recovered from energies at the probes ``a = k/D, k = 1..D``."""
    x = check_assignment(model, x)
    r = check_assignment(model, r)
    D = model.degree if degree is None else degree
    c0 = energy_continuous(model, x)
    probes = np.arange(1, D + 1) / D
    rhs = np.array([energy_continuous(model, x + a * r) - c0 for a in probes])
    V = probes[:, None] ** np.arange(1, D + 1)[None, :]
    try:
        rest = np.linalg.solve(V, rhs)
    except np.linalg.LinAlgError as exc:
        raise SingularProbeSystem(str(exc)) from exc
    return np.concatenate([[c0], rest])


def poly_coeffs(model: MrfModel, x, r, method: str = "auto") -> np.ndarray:
    """Ascending coefficients (length ``D + 1``) of ``a -> E(x + a r)``.

    ``method`` is ``"closed"`` (pairwise formulas), ``"probe"`` (linear solve
    on probe evaluations) or ``"auto"`` (closed form whenever ``D == 2``).
    """
    r = check_assignment(model, r)
    if not np.any(r):
        out = np.zeros(model.degree + 1)
        out[0] = energy_continuous(model, x)
        return out
    if method == "closed" or (method == "auto" and model.degree == 2):
        return pairwise_coeffs(model, x, r)
    if method not in ("auto", "probe", "closed"):
        raise ValueError(f"unknown method {method!r}")
    return probe_coeffs(model, x, r)


def minimize_poly(coeffs, delta: float = DEFAULT_DELTA) -> float:
    """Global minimizer over ``[0, 1]`` of the polynomial with ascending ``coeffs``.

    Degree <= 3 uses the critical points of the derivative; higher degrees scan
    a grid of step ``delta``. Returns 0 unless some step strictly improves.
    """
    coeffs = np.trim_zeros(np.asarray(coeffs, dtype=np.float64), "b")
    if len(coeffs) <= 1:
        return 0.0
    degree = len(coeffs) - 1
    if degree <= 3:
        candidates = [1.0] + [a for a in _critical_points(coeffs) if 0.0 < a < 1.0]
    else:
        steps = int(round(1.0 / delta))
        candidates = list(np.linspace(0.0, 1.0, steps + 1)[1:])
    candidates = np.asarray(candidates)
    values = P.polyval(candidates, coeffs)
    best = int(np.argmin(values))
    if values[best] < coeffs[0]:
        return float(candidates[best])
    return 0.0


def _critical_points(coeffs) -> list[float]:
    # roots of the derivative of a polynomial of degree <= 3
    c = list(coeffs) + [0.0] * (4 - len(coeffs))
    a, b, cc = 3.0 * c[3], 2.0 * c[2], c[1]
    if a == 0.0:
        return [] if b == 0.0 else [-cc / b]
    disc = b * b - 4.0 * a * cc
    if disc < 0.0:
        return []
    sq = math.sqrt(disc)
    # numerically stable pair of roots
    q = -0.5 * (b + math.copysign(sq, b))
    roots = [q / a]
    if q != 0.0:
        roots.append(cc / q)
    return roots


def line_search(model: MrfModel, x, r, delta: float = DEFAULT_DELTA, method: str = "auto") -> float:
    """Step ``a`` in ``[0, 1]`` minimizing ``E(x + a r)``; 0 for a zero direction."""
    r = check_assignment(model, r)
    if not np.any(r):
        return 0.0
    return minimize_poly(poly_coeffs(model, x, r, method), delta)
