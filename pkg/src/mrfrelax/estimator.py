"""scikit-learn style wrapper around the solvers."""

from __future__ import annotations

from os import PathLike

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.utils.validation import check_is_fitted

from .io.formats import load_model
from .model import MrfModel, check_assignment, energy_discrete
from .solvers import SOLVERS, AdmmConfig, SolverConfig, solve


def check_model(X) -> MrfModel:
    """Accept a model or a path to a model file."""
    if isinstance(X, MrfModel):
        return X
    if isinstance(X, (str, PathLike)):
        return load_model(X)
    raise TypeError(f"expected an MrfModel or a model file path, got {type(X).__name__}")


class MapSolver(BaseEstimator):
    """MAP labeling of one model per ``fit`` call.

    ``fit(X)`` solves model ``X`` and stores ``labels_``, ``energy_``,
    ``continuous_energy_``, ``n_iter_``, ``termination_`` and the full
    ``report_``. ``predict(X)`` returns the labeling (solving ``X`` first if
    it is not the fitted model).
    """

    def __init__(
        self,
        solver: str = "admm",
        max_iter: int = 10_000,
        n_init: int = 1,
        random_state: int = 0,
        normalize: bool = True,
        rho0: float = 1e-3,
        rho_max: float = 100.0,
        beta: float = 1.2,
        stabilize_iters: int = 500,
        window: int = 500,
        tol: float = 1e-6,
    ):
        self.solver = solver
        self.max_iter = max_iter
        self.n_init = n_init
        self.random_state = random_state
        self.normalize = normalize
        self.rho0 = rho0
        self.rho_max = rho_max
        self.beta = beta
        self.stabilize_iters = stabilize_iters
        self.window = window
        self.tol = tol

    def _config(self) -> SolverConfig:
        if self.solver not in SOLVERS:
            raise ValueError(f"solver must be one of {SOLVERS}, got {self.solver!r}")
        if self.n_init < 1:
            raise ValueError("n_init must be >= 1")
        admm = AdmmConfig(self.rho0, self.rho_max, self.beta, self.stabilize_iters, self.window, self.tol)
        return SolverConfig(max_iters=self.max_iter, admm=admm, seed=self.random_state, normalize=self.normalize)

    def fit(self, X, y=None, x0=None):
        model = check_model(X)
        if x0 is not None:
            x0 = check_assignment(model, x0)
        report = solve(model, self.solver, self._config(), inits=self.n_init, x0=x0)
        self.model_ = model
        self.report_ = report
        self.labels_ = report.labels
        self.energy_ = report.discrete_energy
        self.continuous_energy_ = report.continuous_energy
        self.n_iter_ = report.iterations
        self.termination_ = report.termination.value
        return self

    def predict(self, X=None) -> np.ndarray:
        check_is_fitted(self, "labels_")
        if X is None or X is self.model_:
            return self.labels_
        return self.fit(X).labels_

    def fit_predict(self, X, y=None) -> np.ndarray:
        return self.fit(X).labels_

    def score(self, X, y=None) -> float:
        """Negative discrete energy of the predicted labeling (higher is better)."""
        model = check_model(X)
        return -energy_discrete(model, self.predict(model))
