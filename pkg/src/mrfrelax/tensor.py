"""Tensor-vector products and the linear coefficients derived from them.

Modes are 0-based throughout: ``mode_product(F, v, 0)`` contracts the first
index of ``F``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .exceptions import DimensionMismatch, RepeatedMode
from .model import MrfModel, check_assignment


def mode_product(F, v, d: int) -> np.ndarray:
    """Contract mode ``d`` of ``F`` with the vector ``v``; the rank drops by one."""
    F = np.asarray(F, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if not 0 <= d < F.ndim:
        raise DimensionMismatch(f"mode {d} out of range for rank-{F.ndim} tensor")
    if v.ndim != 1 or v.shape[0] != F.shape[d]:
        raise DimensionMismatch(f"vector of length {v.shape} cannot multiply mode {d} of size {F.shape[d]}")
    return np.tensordot(F, v, axes=([d], [0]))


def multi_product(F, vectors, modes):
    """Product of ``F`` with several vectors at the given modes.

    Returns ``F`` itself for an empty set of vectors and a Python float when
    every mode is consumed. Modes are contracted highest first so the remaining
    mode numbers stay valid.
    """
    F = np.asarray(F, dtype=np.float64)
    vectors = list(vectors)
    modes = [int(m) for m in modes]
    if len(vectors) != len(modes):
        raise DimensionMismatch(f"{len(vectors)} vectors for {len(modes)} modes")
    if len(set(modes)) != len(modes):
        raise RepeatedMode(f"repeated mode in {modes}")
    if not modes:
        return F
    G = F
    for m, v in sorted(zip(modes, vectors), key=lambda t: t[0], reverse=True):
        G = mode_product(G, v, m)
    if G.ndim == 0:
        return float(G)
    return G


@dataclass
class PositionIndex:
    """Where each node sits inside the cliques of a model.

    ``occurrences[i]`` lists ``(clique_id, position)`` pairs in clique order,
    ``by_position[(i, k)]`` lists the cliques holding node ``i`` at position
    ``k`` and ``neighbors[i]`` holds the nodes sharing at least one clique
    with ``i`` (the nodes whose change makes ``i``'s coefficients stale).
    """

    occurrences: list[list[tuple[int, int]]]
    by_position: dict[tuple[int, int], list[int]] = field(default_factory=dict)
    neighbors: list[set[int]] = field(default_factory=list)


def build_position_index(model: MrfModel) -> PositionIndex:
    n = model.num_nodes
    occurrences: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    by_position: dict[tuple[int, int], list[int]] = {}
    neighbors: list[set[int]] = [set() for _ in range(n)]
    for ci, clique in enumerate(model.cliques):
        for k, i in enumerate(clique.nodes):
            occurrences[i].append((ci, k))
            by_position.setdefault((i, k), []).append(ci)
            neighbors[i].update(j for j in clique.nodes if j != i)
    return PositionIndex(occurrences, by_position, neighbors)


def _position_index(model: MrfModel) -> PositionIndex:
    index = model.__dict__.get("_position_index")
    if index is None:
        index = build_position_index(model)
        model.__dict__["_position_index"] = index
    return index


def bcd_coefficient(model: MrfModel, x, i: int) -> np.ndarray:
    """Linear coefficient of ``x_i`` in the energy, all other blocks fixed.

    Sums, over the cliques containing ``i``, the tensor contracted with the
    blocks of every other clique node.
    """
    x = check_assignment(model, x)
    return node_coefficient(model, model.blocks(x), i)


def node_coefficient(model: MrfModel, blocks, i: int) -> np.ndarray:
    """:func:`bcd_coefficient` on pre-split blocks, without input checks."""
    c = np.zeros(model.label_counts[i])
    for ci, k in _position_index(model).occurrences[i]:
        clique = model.cliques[ci]
        others = [m for m in range(clique.arity) if m != k]
        c = c + multi_product(clique.potential, [blocks[clique.nodes[m]] for m in others], others)
    return c


def _scatter(model: MrfModel, parts) -> np.ndarray:
    if not parts:
        return np.zeros(model.size)
    idx = np.concatenate([p[0].ravel() for p in parts])
    vals = np.concatenate([p[1].ravel() for p in parts])
    return np.bincount(idx, weights=vals, minlength=model.size)


def _contributions(group, operands, keep, rows=None) -> np.ndarray:
    # operands[m] is the flat vector feeding position m
    tensors = group.tensors if rows is None else group.tensors[rows]
    vecs = []
    for m in range(group.arity):
        if m == keep:
            continue
        gather = group.gather[m] if rows is None else group.gather[m][rows]
        vecs.append(operands[m][gather])
    return np.einsum(group.spec(keep), tensors, *vecs)


def full_gradient(model: MrfModel, x) -> np.ndarray:
    """Gradient of the multilinear energy, as a flat vector of node blocks."""
    x = check_assignment(model, x)
    parts = []
    for g in model.groups:
        operands = [x] * g.arity
        for k in range(g.arity):
            parts.append((g.gather[k], _contributions(g, operands, k)))
    return _scatter(model, parts)


def _check_xs(model: MrfModel, xs) -> list[np.ndarray]:
    xs = [check_assignment(model, x) for x in xs]
    if len(xs) < model.degree:
        raise DimensionMismatch(f"need {model.degree} decomposed blocks, got {len(xs)}")
    return xs


def admm_coefficients(model: MrfModel, xs, d: int) -> np.ndarray:
    """Coefficient vector ``p^d`` of the ``d``-th decomposed block (``d`` is 1-based).

    For every clique of size >= d, the tensor is contracted at position
    ``m != d`` with block ``m`` of the node there, and the result is added to
    the node sitting at position ``d``.
    """
    xs = _check_xs(model, xs)
    if not 1 <= d <= model.degree:
        raise DimensionMismatch(f"degree index {d} not in [1, {model.degree}]")
    k = d - 1
    parts = [(g.gather[k], _contributions(g, xs, k)) for g in model.groups if g.arity > k]
    return _scatter(model, parts)


def admm_coefficient(model: MrfModel, xs, d: int, i: int) -> np.ndarray:
    """Single-node block ``p_i^d``, computed clique by clique."""
    xs = _check_xs(model, xs)
    if not 1 <= d <= model.degree:
        raise DimensionMismatch(f"degree index {d} not in [1, {model.degree}]")
    k = d - 1
    p = np.zeros(model.label_counts[i])
    for ci in _position_index(model).by_position.get((i, k), []):
        clique = model.cliques[ci]
        others = [m for m in range(clique.arity) if m != k]
        vecs = [model.blocks(xs[m])[clique.nodes[m]] for m in others]
        p = p + multi_product(clique.potential, vecs, others)
    return p


def changed_nodes(model: MrfModel, new: np.ndarray, old: np.ndarray) -> np.ndarray:
    """Boolean mask of nodes whose block differs (bitwise) between two assignments."""
    if model.num_nodes == 0:
        return np.zeros(0, dtype=bool)
    return np.logical_or.reduceat(new != old, model.offsets[:-1])


class CoefficientCache:
    """Per-clique contribution cache for the decomposed coefficients ``p^d``.

    A clique's contribution to ``p^d`` is recomputed only when one of the
    blocks it is contracted with has changed since the last call; equivalently
    ``p_i^d`` is refreshed only when a neighbor of ``i`` moved. Results are
    bitwise identical to :func:`admm_coefficients`.
    """

    def __init__(self, model: MrfModel):
        self.model = model
        self._snapshots: dict[int, list[np.ndarray | None]] = {}
        self._contrib: dict[int, list[np.ndarray | None]] = {}
        self.recomputed = 0

    def coefficients(self, xs, d: int) -> np.ndarray:
        model = self.model
        k = d - 1
        groups = [g for g in model.groups if g.arity > k]
        snaps = self._snapshots.get(d)
        if snaps is None:
            contrib = [_contributions(g, xs, k) for g in groups]
            self.recomputed += sum(len(g.clique_ids) for g in groups)
        else:
            moved = [
                None if m == k or snaps[m] is None else changed_nodes(model, xs[m], snaps[m])
                for m in range(len(snaps))
            ]
            contrib = self._contrib[d]
            for gi, g in enumerate(groups):
                stale = np.zeros(len(g.clique_ids), dtype=bool)
                for m in range(g.arity):
                    if m != k:
                        stale |= moved[m][g.nodes[:, m]]
                if stale.any():
                    rows = np.flatnonzero(stale)
                    contrib[gi][rows] = _contributions(g, xs, k, rows)
                    self.recomputed += len(rows)
        self._contrib[d] = contrib
        self._snapshots[d] = [None if m == k else np.array(xs[m]) for m in range(len(xs))]
        return _scatter(model, [(g.gather[k], c) for g, c in zip(groups, contrib)])
