"""MAP inference in discrete MRFs through a tight continuous relaxation.

Core objects live in :mod:`mrfrelax.model`; solvers in :mod:`mrfrelax.solvers`;
the scikit-learn style :class:`MapSolver` is imported on first access.
"""

from ._version import __version__
from .exceptions import (
    AllZeroPotentialsWarning,
    MrfError,
    NotPairwise,
    ParseError,
    SearchSpaceTooLarge,
)
from .generators import gen_grid, gen_higher_order, gen_random
from .io import load_model, parse_native, parse_uai, save_model, serialize_native
from .model import (
    Clique,
    MrfModel,
    energy_continuous,
    energy_discrete,
    init_homogeneous,
    init_random,
    init_unary,
    normalize_potentials,
    validate,
)
from .oracle import brute_force_map, solver_vs_oracle, verify_tightness
from .solvers import SOLVERS, AdmmConfig, SolverConfig, SolverReport, Termination, round_bcd, solve
from .tensor import full_gradient


def __getattr__(name):
    if name == "MapSolver":
        from .estimator import MapSolver

        return MapSolver
    raise AttributeError(f"module 'mrfrelax' has no attribute {name!r}")


__all__ = [
    "AdmmConfig",
    "AllZeroPotentialsWarning",
    "Clique",
    "MapSolver",
    "MrfError",
    "MrfModel",
    "NotPairwise",
    "ParseError",
    "SOLVERS",
    "SearchSpaceTooLarge",
    "SolverConfig",
    "SolverReport",
    "Termination",
    "__version__",
    "brute_force_map",
    "energy_continuous",
    "energy_discrete",
    "full_gradient",
    "gen_grid",
    "gen_higher_order",
    "gen_random",
    "init_homogeneous",
    "init_random",
    "init_unary",
    "load_model",
    "normalize_potentials",
    "parse_native",
    "parse_uai",
    "round_bcd",
    "save_model",
    "serialize_native",
    "solve",
    "solver_vs_oracle",
    "validate",
    "verify_tightness",
]
