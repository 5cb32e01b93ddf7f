import numpy as np
import pytest
from sklearn.base import clone
from sklearn.exceptions import NotFittedError

from conftest import two_node
from mrfrelax import MapSolver
from mrfrelax.estimator import check_model
from mrfrelax.generators import gen_grid
from mrfrelax.io import save_model
from mrfrelax.model import energy_discrete
from mrfrelax.oracle import brute_force_map


def test_params_round_trip():
    est = MapSolver(solver="fw", n_init=5, rho0=0.01)
    params = est.get_params()
    assert params["solver"] == "fw" and params["n_init"] == 5
    other = clone(est)
    assert other.get_params() == params
    est.set_params(max_iter=50)
    assert est.max_iter == 50


def test_fit_predict():
    m = gen_grid(3, 3, 2, seed=0)
    est = MapSolver(solver="bcd", n_init=5).fit(m)
    assert est.energy_ == energy_discrete(m, est.labels_)
    np.testing.assert_array_equal(est.predict(), est.labels_)
    np.testing.assert_array_equal(est.predict(m), est.labels_)
    assert est.score(m) == -est.energy_
    assert est.termination_ in ("Converged", "MaxIters", "Stalled")


def test_predict_other_model_refits():
    est = MapSolver(solver="admm").fit(gen_grid(2, 2, 2, seed=0))
    m = two_node()
    labels = est.predict(m)
    np.testing.assert_array_equal(labels, brute_force_map(m)[0])
    assert est.model_ is m


def test_not_fitted():
    with pytest.raises(NotFittedError):
        MapSolver().predict(two_node())


def test_bad_params():
    with pytest.raises(ValueError):
        MapSolver(solver="trws").fit(two_node())
    with pytest.raises(ValueError):
        MapSolver(n_init=0).fit(two_node())
    with pytest.raises(ValueError):
        MapSolver(beta=0.9).fit(two_node())


def test_accepts_paths(tmp_path):
    save_model(two_node(), tmp_path / "m.mrfe")
    est = MapSolver(solver="pgd").fit(str(tmp_path / "m.mrfe"))
    assert est.labels_.shape == (2,)
    with pytest.raises(TypeError):
        check_model(np.zeros(3))


def test_start_point():
    m = two_node()
    est = MapSolver(solver="fw").fit(m, x0=m.one_hot([1, 1]))
    assert est.energy_ <= energy_discrete(m, [1, 1])
