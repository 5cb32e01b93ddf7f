"""Solver configuration, reports and the shared normalize/round wrapper."""

from __future__ import annotations

import enum
import time
import warnings
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..exceptions import AllZeroPotentialsWarning
from ..model import MrfModel, energy_discrete, normalize_potentials


class Termination(str, enum.Enum):
    CONVERGED = "Converged"
    MAX_ITERS = "MaxIters"
    STALLED = "Stalled"


@dataclass
class AdmmConfig:
    rho0: float = 1e-3
    rho_max: float = 100.0
    beta: float = 1.2
    I1: int = 500
    I2: int = 500
    residual_tol: float = 1e-6
    cache: bool = True

    def __post_init__(self):
        if not self.rho0 > 0:
            raise ValueError("rho0 must be positive")
        if not self.beta > 1:
            raise ValueError("beta must exceed 1")
        if self.rho_max < self.rho0:
            raise ValueError("rho_max must be >= rho0")
        if not self.residual_tol > 0:
            raise ValueError("residual_tol must be positive")
        if self.I1 < 0 or self.I2 < 1:
            raise ValueError("I1 must be >= 0 and I2 >= 1")


@dataclass
class SolverConfig:
    max_iters: int = 10_000
    energy_tol: float = 1e-9
    stationarity_tol: float = 1e-8
    admm: AdmmConfig = field(default_factory=AdmmConfig)
    linesearch_delta: float = 1e-4
    seed: int = 0
    normalize: bool = True

    def __post_init__(self):
        if isinstance(self.admm, dict):
            self.admm = AdmmConfig(**self.admm)
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        for name in ("energy_tol", "stationarity_tol", "linesearch_delta"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")


@dataclass
class SolverReport:
    solver: str
    labels: np.ndarray
    discrete_energy: float
    continuous_energy: float
    energy_trace: np.ndarray
    residual_trace: np.ndarray
    iterations: int
    wall_time: float
    termination: Termination
    x: np.ndarray | None = None
    state: Any = None

    @property
    def final_labeling(self) -> np.ndarray:
        return self.labels


@dataclass
class _Normalized:
    model: MrfModel
    scale: float


def normalized(model: MrfModel, cfg: SolverConfig) -> _Normalized:
    if not cfg.normalize:
        return _Normalized(model, 1.0)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", AllZeroPotentialsWarning)
        work, scale, _ = normalize_potentials(model)
    return _Normalized(work, scale)


def make_report(
    solver: str,
    model: MrfModel,
    norm: _Normalized,
    labels,
    continuous_energy: float,
    energy_trace,
    iterations: int,
    started: float,
    termination: Termination,
    x=None,
    residual_trace=(),
    state=None,
) -> SolverReport:
    labels = np.asarray(labels, dtype=np.int64)
    return SolverReport(
        solver=solver,
        labels=labels,
        discrete_energy=energy_discrete(model, labels),
        continuous_energy=float(continuous_energy) * norm.scale,
        energy_trace=np.asarray(energy_trace, dtype=np.float64) * norm.scale,
        residual_trace=np.asarray(residual_trace, dtype=np.float64),
        iterations=int(iterations),
        wall_time=time.perf_counter() - started,
        termination=Termination(termination),
        x=x,
        state=state,
    )
