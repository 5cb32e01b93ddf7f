"""Linear minimization and Euclidean projections on the per-node simplices."""

from __future__ import annotations

import numpy as np

from ..model import MrfModel


def argmin_vertex(c) -> np.ndarray:
    """Simplex vertex minimizing ``c @ u``; ties go to the lowest index."""
    c = np.asarray(c, dtype=np.float64)
    u = np.zeros_like(c)
    u[np.argmin(c)] = 1.0
    return u


def project_simplex(v) -> np.ndarray:
    """Euclidean projection onto the probability simplex.

    Accepts a vector or a 2-D array, in which case every row is projected.
    """
    v = np.asarray(v, dtype=np.float64)
    if v.ndim == 1:
        return project_simplex(v[None, :])[0]
    n = v.shape[1]
    # the projection is shift invariant; centring on the row max keeps
    # v - tau accurate when the entries are huge
    v = v - v.max(axis=1, keepdims=True)
    u = -np.sort(-v, axis=1)
    css = np.cumsum(u, axis=1) - 1.0
    ks = np.arange(1, n + 1)
    support = np.count_nonzero(u - css / ks > 0, axis=1)
    tau = css[np.arange(v.shape[0]), support - 1] / support
    return np.maximum(v - tau[:, None], 0.0)


def project_nonneg(v) -> np.ndarray:
    return np.maximum(np.asarray(v, dtype=np.float64), 0.0)


def project_blocks(model: MrfModel, v) -> np.ndarray:
    """Project every node block of a flat vector onto its simplex."""
    out = np.empty(model.size)
    for _, idx in model.count_groups:
        out[idx] = project_simplex(v[idx])
    return out


def block_argmin(model: MrfModel, v) -> np.ndarray:
    """Per-node index of the smallest entry (lowest index on ties)."""
    labels = np.empty(model.num_nodes, dtype=np.int64)
    for nodes, idx in model.count_groups:
        labels[nodes] = np.argmin(v[idx], axis=1)
    return labels


def vertex_blocks(model: MrfModel, v) -> np.ndarray:
    """Minimizer of ``v @ s`` over the product of simplices, as a flat vector."""
    return model.one_hot(block_argmin(model, v))


def fw_gap(model: MrfModel, grad, x) -> float:
    """``grad @ (x - s)`` for the linear minimizer ``s``; clipped at zero."""
    if model.num_nodes == 0:
        return 0.0
    mins = np.minimum.reduceat(grad, model.offsets[:-1])
    return max(float(grad @ x - mins.sum()), 0.0)
