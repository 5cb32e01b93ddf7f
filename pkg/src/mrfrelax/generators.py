"""Seeded synthetic models: grids and random third-order models."""

from __future__ import annotations

import itertools

import numpy as np

from .model import Clique, MrfModel


def grid_edges(rows: int, cols: int, connectivity: str = "N4") -> list[tuple[int, int]]:
    if connectivity not in ("N4", "N8"):
        raise ValueError(f"connectivity must be N4 or N8, got {connectivity!r}")
    node = lambda r, c: r * cols + c  # noqa: E731
    edges = []
    for r in range(rows):
        for c in range(cols):
            if c + 1 < cols:
                edges.append((node(r, c), node(r, c + 1)))
            if r + 1 < rows:
                edges.append((node(r, c), node(r + 1, c)))
            if connectivity == "N8" and r + 1 < rows:
                if c + 1 < cols:
                    edges.append((node(r, c), node(r + 1, c + 1)))
                if c > 0:
                    edges.append((node(r, c), node(r + 1, c - 1)))
    return edges


def gen_grid(
    rows: int,
    cols: int,
    labels: int,
    connectivity: str = "N4",
    potential: str = "random",
    lam: float = 1.0,
    seed=0,
) -> MrfModel:
    """Grid MRF with uniform[-1, 1] unaries and Potts or uniform[-1, 1] pairwise terms.

    ``potential`` is ``"random"`` or ``"potts"`` (cost ``lam`` when labels differ).
    """
    if rows < 1 or cols < 1 or labels < 1:
        raise ValueError("rows, cols and labels must be >= 1")
    if potential not in ("random", "potts"):
        raise ValueError(f"potential must be 'random' or 'potts', got {potential!r}")
    rng = np.random.default_rng(seed)
    n = rows * cols
    cliques = [Clique((i,), rng.uniform(-1.0, 1.0, size=labels)) for i in range(n)]
    potts = lam * (1.0 - np.eye(labels))
    for i, j in grid_edges(rows, cols, connectivity):
        table = potts if potential == "potts" else rng.uniform(-1.0, 1.0, size=(labels, labels))
        cliques.append(Clique((i, j), table))
    return MrfModel((labels,) * n, cliques)


def gen_higher_order(nodes: int, labels: int, num_triples: int, seed=0) -> MrfModel:
    """Unaries plus third-order cliques on distinct random node triples."""
    rng = np.random.default_rng(seed)
    triples = list(itertools.combinations(range(nodes), 3))
    if num_triples > len(triples):
        raise ValueError(f"only {len(triples)} node triples available, asked for {num_triples}")
    cliques = [Clique((i,), rng.uniform(-1.0, 1.0, size=labels)) for i in range(nodes)]
    for t in rng.choice(len(triples), size=num_triples, replace=False) if num_triples else []:
        order = rng.permutation(triples[int(t)])
        cliques.append(Clique(tuple(int(v) for v in order), rng.uniform(-1.0, 1.0, size=(labels,) * 3)))
    return MrfModel((labels,) * nodes, cliques)


def gen_random(
    nodes: int, labels, max_order: int, num_cliques: int, seed=0, unaries: bool = True
) -> MrfModel:
    """Random model with cliques of order 2..max_order and varying label counts.

    ``labels`` is an int or a ``(low, high)`` inclusive range sampled per node.
    """
    rng = np.random.default_rng(seed)
    if isinstance(labels, int):
        counts = [labels] * nodes
    else:
        counts = [int(c) for c in rng.integers(labels[0], labels[1] + 1, size=nodes)]
    cliques = []
    if unaries:
        cliques += [Clique((i,), rng.uniform(-1.0, 1.0, size=counts[i])) for i in range(nodes)]
    top = min(max_order, nodes)
    for _ in range(num_cliques if top >= 2 else 0):
        order = int(rng.integers(2, top + 1))
        members = tuple(int(v) for v in rng.choice(nodes, size=order, replace=False))
        shape = tuple(counts[i] for i in members)
        cliques.append(Clique(members, rng.uniform(-1.0, 1.0, size=shape)))
    return MrfModel(counts, cliques)
