"""Discrete MRF data model, energies and standard initializations.

A model is a list of variables with finite label sets plus an ordered list of
cliques. Each clique carries a dense potential tensor whose ``k``-th mode is
indexed by the label of the ``k``-th node of the clique.

Continuous assignments are stored as a single flat float vector that
concatenates the per-node blocks ``x_i`` (see :attr:`MrfModel.offsets`).
"""

from __future__ import annotations

import math
import string
import warnings
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from .exceptions import (
    AllZeroPotentialsWarning,
    DimensionMismatch,
    DuplicateNodeInClique,
    NodeIndexOutOfRange,
    NonFiniteValue,
    TensorTooLarge,
)

MAX_TENSOR_ENTRIES = 10_000_000

_MODE_LETTERS = string.ascii_uppercase


@dataclass(frozen=True)
class Clique:
    """An ordered tuple of nodes and its potential tensor."""

    nodes: tuple[int, ...]
    potential: np.ndarray

    def __post_init__(self):
        nodes = tuple(int(i) for i in self.nodes)
        potential = np.array(self.potential, dtype=np.float64)
        if potential.ndim == 0:
            potential = potential.reshape(1)
        potential.flags.writeable = False
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "potential", potential)

    @property
    def arity(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True, eq=False)
class _CliqueGroup:
    # cliques sharing arity and tensor shape, stacked for vectorized contraction
    dims: tuple[int, ...]
    clique_ids: np.ndarray  # (G,)
    nodes: np.ndarray  # (G, arity)
    tensors: np.ndarray  # (G, *dims)
    gather: tuple[np.ndarray, ...]  # per position, (G, dims[k]) flat indices

    @property
    def arity(self) -> int:
        return len(self.dims)

    def spec(self, keep: int | None = None) -> str:
        """einsum subscripts contracting every mode except ``keep``."""
        letters = _MODE_LETTERS[: self.arity]
        ops = ["g" + letters] + ["g" + letters[k] for k in range(self.arity) if k != keep]
        out = "g" if keep is None else "g" + letters[keep]
        return ",".join(ops) + "->" + out


@dataclass(frozen=True, eq=False)
class MrfModel:
    """A discrete Markov random field with dense clique potentials.

    Parameters
    ----------
    label_counts : sequence of int
        Number of labels of each node; ``num_nodes`` is its length.
    cliques : sequence of Clique
        Ordered cliques. Node position inside a clique selects the tensor mode.
    max_entries : int
        Cap on the number of entries of a single clique tensor.
    """

    label_counts: tuple[int, ...]
    cliques: tuple[Clique, ...]
    max_entries: int = MAX_TENSOR_ENTRIES

    def __post_init__(self):
        object.__setattr__(self, "label_counts", tuple(int(c) for c in self.label_counts))
        cliques = tuple(
            c if isinstance(c, Clique) else Clique(*c) for c in self.cliques
        )
        object.__setattr__(self, "cliques", cliques)
        validate(self)

    @property
    def num_nodes(self) -> int:
        return len(self.label_counts)

    @property
    def degree(self) -> int:
        """Maximum clique size ``D`` (1 for a model without cliques)."""
        return max((c.arity for c in self.cliques), default=1) or 1

    @cached_property
    def offsets(self) -> np.ndarray:
        """Start of each node block in the flat assignment vector (length n+1)."""
        return np.concatenate([[0], np.cumsum(self.label_counts, dtype=np.int64)])

    @property
    def size(self) -> int:
        """Total length of a flat continuous assignment."""
        return int(self.offsets[-1])

    @cached_property
    def node_of_entry(self) -> np.ndarray:
        return np.repeat(np.arange(self.num_nodes), self.label_counts)

    @cached_property
    def groups(self) -> tuple[_CliqueGroup, ...]:
        buckets: dict[tuple[int, ...], list[int]] = {}
        for ci, clique in enumerate(self.cliques):
            buckets.setdefault(clique.potential.shape, []).append(ci)
        groups = []
        for dims, ids in buckets.items():
            nodes = np.array([self.cliques[ci].nodes for ci in ids], dtype=np.int64)
            nodes = nodes.reshape(len(ids), len(dims))
            tensors = np.stack([self.cliques[ci].potential for ci in ids])
            gather = tuple(
                self.offsets[nodes[:, k]][:, None] + np.arange(dims[k])[None, :]
                for k in range(len(dims))
            )
            groups.append(
                _CliqueGroup(tuple(dims), np.array(ids, dtype=np.int64), nodes, tensors, gather)
            )
        return tuple(groups)

    @cached_property
    def count_groups(self) -> tuple[tuple[np.ndarray, np.ndarray], ...]:
        """``(nodes, flat_index)`` per distinct label count; ``flat_index`` is (k, count)."""
        counts = np.asarray(self.label_counts, dtype=np.int64)
        out = []
        for c in np.unique(counts):
            nodes = np.flatnonzero(counts == c)
            out.append((nodes, self.offsets[nodes][:, None] + np.arange(c)[None, :]))
        return tuple(out)

    def blocks(self, x) -> list[np.ndarray]:
        """Split a flat assignment into per-node views."""
        x = np.asarray(x)
        return [x[self.offsets[i] : self.offsets[i + 1]] for i in range(self.num_nodes)]

    def one_hot(self, labels) -> np.ndarray:
        """Flat indicator vector of a discrete labeling."""
        labels = check_labeling(self, labels)
        x = np.zeros(self.size)
        x[self.offsets[:-1] + labels] = 1.0
        return x

    def with_potentials(self, potentials: Sequence[np.ndarray]) -> "MrfModel":
        """Same structure, new tensors (one per clique, in order)."""
        cliques = tuple(Clique(c.nodes, p) for c, p in zip(self.cliques, potentials))
        return MrfModel(self.label_counts, cliques, self.max_entries)


def validate(model: MrfModel) -> MrfModel:
    """Check every structural invariant of ``model``; raise on the first violation."""
    n = model.num_nodes
    for c in model.label_counts:
        if c < 1:
            raise DimensionMismatch(f"label counts must be >= 1, got {c}")
    for ci, clique in enumerate(model.cliques):
        if clique.arity < 1:
            raise DimensionMismatch(f"clique {ci} has no nodes")
        for i in clique.nodes:
            if not 0 <= i < n:
                raise NodeIndexOutOfRange(f"clique {ci}: node {i} not in [0, {n})")
        if len(set(clique.nodes)) != clique.arity:
            raise DuplicateNodeInClique(f"clique {ci}: repeated node in {clique.nodes}")
        expected = tuple(model.label_counts[i] for i in clique.nodes)
        if clique.potential.shape != expected:
            raise DimensionMismatch(
                f"clique {ci}: tensor shape {clique.potential.shape} != label counts {expected}"
            )
        if clique.potential.size > model.max_entries:
            raise TensorTooLarge(
                f"clique {ci}: {clique.potential.size} entries exceed cap {model.max_entries}"
            )
        if not np.all(np.isfinite(clique.potential)):
            raise NonFiniteValue(f"clique {ci}: non-finite potential entry")
    return model


def normalize_potentials(model: MrfModel) -> tuple[MrfModel, float, float]:
    """Divide every tensor by the largest absolute entry over all cliques.

    Returns ``(normalized_model, scale, offset)`` with ``offset`` always 0, so
    ``E_original = scale * E_normalized``. A model whose potentials are all zero
    is returned unchanged with scale 1 and an :class:`AllZeroPotentialsWarning`.
    """
    scale = max((float(np.max(np.abs(c.potential))) for c in model.cliques), default=0.0)
    if scale == 0.0:
        warnings.warn("all potentials are zero; model left unnormalized", AllZeroPotentialsWarning)
        return model, 1.0, 0.0
    return model.with_potentials([c.potential / scale for c in model.cliques]), scale, 0.0


def check_labeling(model: MrfModel, labels) -> np.ndarray:
    labels = np.asarray(labels, dtype=np.int64).reshape(-1)
    if labels.shape[0] != model.num_nodes:
        raise DimensionMismatch(f"labeling has length {labels.shape[0]}, expected {model.num_nodes}")
    if np.any(labels < 0) or np.any(labels >= np.asarray(model.label_counts, dtype=np.int64)):
        raise DimensionMismatch("label index out of range")
    return labels


def check_assignment(model: MrfModel, x) -> np.ndarray:
    """Coerce ``x`` to a flat float vector; accepts a flat array or a list of blocks."""
    if isinstance(x, (list, tuple)) and len(x) == model.num_nodes and model.num_nodes and np.ndim(x[0]) == 1:
        for i, (block, c) in enumerate(zip(x, model.label_counts)):
            if len(block) != c:
                raise DimensionMismatch(f"block {i} has length {len(block)}, expected {c}")
        x = np.concatenate([np.asarray(b, dtype=np.float64) for b in x])
    x = np.asarray(x, dtype=np.float64).reshape(-1)
    if x.shape[0] != model.size:
        raise DimensionMismatch(f"assignment has length {x.shape[0]}, expected {model.size}")
    if not np.isfinite(x).all():
        raise NonFiniteValue("assignment has non-finite entries")
    return x


def is_feasible(model: MrfModel, x, atol: float = 1e-9) -> bool:
    """Membership in the product of simplices (sum 1 within ``atol``, entries >= -1e-12)."""
    x = check_assignment(model, x)
    if np.any(x < -1e-12):
        return False
    sums = np.add.reduceat(x, model.offsets[:-1]) if model.num_nodes else np.zeros(0)
    return bool(np.all(np.abs(sums - 1.0) <= atol))


def energy_discrete(model: MrfModel, labels) -> float:
    """Energy of a labeling: the sum of the selected potential entries."""
    labels = check_labeling(model, labels)
    return math.fsum(float(c.potential[tuple(labels[list(c.nodes)])]) for c in model.cliques)


def clique_values(model: MrfModel, x: np.ndarray) -> np.ndarray:
    """Per-clique multilinear values ``F_C (x) {x_i}`` in clique order."""
    out = np.empty(len(model.cliques))
    for g in model.groups:
        vecs = [x[idx] for idx in g.gather]
        out[g.clique_ids] = np.einsum(g.spec(), g.tensors, *vecs)
    return out


def energy_continuous(model: MrfModel, x) -> float:
    """Multilinear energy of a (not necessarily feasible) continuous assignment."""
    x = check_assignment(model, x)
    return math.fsum(clique_values(model, x))


def init_homogeneous(model: MrfModel) -> np.ndarray:
    """Uniform distribution over labels at every node."""
    return 1.0 / np.asarray(model.label_counts, dtype=np.float64)[model.node_of_entry]


def unary_labels(model: MrfModel) -> np.ndarray:
    """Per-node argmin of the summed unary potentials; label 0 for nodes without one."""
    totals = [np.zeros(c) for c in model.label_counts]
    for clique in model.cliques:
        if clique.arity == 1:
            totals[clique.nodes[0]] = totals[clique.nodes[0]] + clique.potential
    return np.array([int(np.argmin(t)) for t in totals], dtype=np.int64)


def init_unary(model: MrfModel) -> np.ndarray:
    """One-hot assignment at the solution of the unary potentials."""
    return model.one_hot(unary_labels(model))


def init_random(model: MrfModel, seed) -> np.ndarray:
    """Uniform sample from the product of simplices, deterministic in ``seed``."""
    rng = np.random.default_rng(seed)
    e = rng.exponential(size=model.size)
    if model.num_nodes == 0:
        return e
    sums = np.add.reduceat(e, model.offsets[:-1])
    return e / sums[model.node_of_entry]
