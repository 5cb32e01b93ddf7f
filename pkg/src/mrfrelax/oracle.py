"""Exhaustive ground truth for small models."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .exceptions import SearchSpaceTooLarge
from .model import MrfModel, energy_continuous, energy_discrete, init_random
from .solvers import SolverConfig, round_bcd, solve

DEFAULT_CAP = 1_000_000
_CHUNK = 1 << 16


def search_space(model: MrfModel) -> int:
    return math.prod(model.label_counts)


def brute_force_map(model: MrfModel, cap: int = DEFAULT_CAP) -> tuple[np.ndarray, float]:
    """Lexicographically smallest global minimizer and its energy.

    Labelings are enumerated with node 0 varying slowest.
    """
    total = search_space(model)
    if total > cap:
        raise SearchSpaceTooLarge(f"{total} labelings exceed cap {cap}")
    if model.num_nodes == 0:
        return np.zeros(0, dtype=np.int64), energy_discrete(model, [])
    best_index, best_energy = 0, math.inf
    shape = model.label_counts
    for start in range(0, total, _CHUNK):
        flat = np.arange(start, min(start + _CHUNK, total))
        labels = np.stack(np.unravel_index(flat, shape), axis=1)
        energy = np.zeros(len(flat))
        for clique in model.cliques:
            energy = energy + clique.potential[tuple(labels[:, list(clique.nodes)].T)]
        k = int(np.argmin(energy))
        if energy[k] < best_energy:
            best_index, best_energy = start + k, float(energy[k])
    best = np.array(np.unravel_index(best_index, shape), dtype=np.int64).reshape(-1)
    return best, energy_discrete(model, best)


@dataclass
class TightnessReport:
    trials: int
    above_continuous: int  # rounded energy exceeded E(x) + 1e-9
    below_oracle: int  # rounded energy fell under the oracle minimum - 1e-9
    reached_minimum: int
    oracle_energy: float

    @property
    def violations(self) -> int:
        return self.above_continuous + self.below_oracle

    @property
    def reached_fraction(self) -> float:
        return self.reached_minimum / self.trials if self.trials else 1.0


def verify_tightness(model: MrfModel, trials: int, seed=0, cap: int = DEFAULT_CAP, tol: float = 1e-9) -> TightnessReport:
    """Round ``trials`` random feasible points and bracket each rounded energy."""
    _, oracle = brute_force_map(model, cap)
    above = below = reached = 0
    for t in range(trials):
        x = init_random(model, [seed, t])
        e = energy_discrete(model, round_bcd(model, x))
        above += e > energy_continuous(model, x) + tol
        below += e < oracle - tol
        reached += e <= oracle + tol
    return TightnessReport(trials, above, below, reached, oracle)


def solver_vs_oracle(model: MrfModel, solver: str, cfg: SolverConfig | None = None, inits: int = 1, cap: int = DEFAULT_CAP) -> float:
    """Discrete energy of ``solver`` minus the exhaustive minimum (>= 0 up to rounding)."""
    _, oracle = brute_force_map(model, cap)
    return solve(model, solver, cfg, inits=inits).discrete_energy - oracle
