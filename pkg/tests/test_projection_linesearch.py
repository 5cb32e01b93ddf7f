import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import make_random
from mrfrelax.acceptance import simplex_by_bisection
from mrfrelax.model import Clique, MrfModel, energy_continuous, init_random
from mrfrelax.solvers.linesearch import (
    line_search,
    minimize_poly,
    pairwise_coeffs,
    poly_coeffs,
    probe_coeffs,
)
from mrfrelax.solvers.projection import argmin_vertex, fw_gap, project_nonneg, project_simplex


def test_argmin_vertex():
    np.testing.assert_array_equal(argmin_vertex([0.3, -0.7]), [0, 1])
    np.testing.assert_array_equal(argmin_vertex([1.0, 1.0]), [1, 0])
    np.testing.assert_array_equal(argmin_vertex([5.0]), [1])


def test_project_simplex_examples():
    np.testing.assert_allclose(project_simplex([0.2, 0.8]), [0.2, 0.8])
    np.testing.assert_allclose(project_simplex([2.0, 0.0]), [1.0, 0.0])
    np.testing.assert_allclose(project_simplex([0.5, 0.5, 1.5]), [0.0, 0.0, 1.0])


def test_project_simplex_rows():
    v = np.array([[2.0, 0.0], [0.2, 0.8]])
    np.testing.assert_allclose(project_simplex(v), [[1.0, 0.0], [0.2, 0.8]])


def test_project_nonneg():
    np.testing.assert_array_equal(project_nonneg([-1.0, 2.0]), [0, 2])
    np.testing.assert_array_equal(project_nonneg([0.0, 0.0]), [0, 0])
    np.testing.assert_array_equal(project_nonneg([-0.3, -0.1, 0.4]), [0, 0, 0.4])


vectors = arrays(np.float64, st.integers(1, 50), elements=st.floats(-100, 100, allow_nan=False))


@given(vectors)
def test_projection_matches_bisection(v):
    u = project_simplex(v)
    assert u.min() >= 0 and abs(u.sum() - 1) < 1e-9
    np.testing.assert_allclose(u, simplex_by_bisection(v), atol=1e-9)


@given(vectors, st.integers(0, 2**31))
def test_projection_is_closest_point(v, seed):
    u = project_simplex(v)
    w = np.random.default_rng(seed).dirichlet(np.ones(len(v)))
    assert np.dot(v - u, v - u) <= np.dot(v - w, v - w) + 1e-9


def test_minimize_poly_examples():
    # alpha^2 - alpha
    assert minimize_poly([0.0, -1.0, 1.0]) == pytest.approx(0.5)
    assert minimize_poly([0.0, 0.0, 0.0]) == 0.0
    assert minimize_poly([0.0, 0.5, -1.0]) == 1.0
    assert minimize_poly([0.0, 1.5, -1.0]) == 0.0


def test_grid_scan_for_high_degree():
    # (a - 0.3)^4 expanded, degree 4 uses the delta scan
    c = np.polynomial.polynomial.polyfromroots([0.3] * 4)
    assert minimize_poly(c, delta=1e-4) == pytest.approx(0.3, abs=1e-4)


def test_zero_direction(pair):
    x = init_random(pair, 0)
    coeffs = poly_coeffs(pair, x, np.zeros_like(x))
    assert coeffs[0] == energy_continuous(pair, x) and not coeffs[1:].any()
    assert line_search(pair, x, np.zeros_like(x)) == 0.0


@given(st.integers(0, 10_000), st.integers(1, 4), st.floats(0, 1))
def test_polynomial_reconstruction(seed, degree, a):
    m = make_random(seed, degree)
    x = init_random(m, [seed, 0])
    r = init_random(m, [seed, 1]) - x
    c = poly_coeffs(m, x, r, method="probe")
    assert len(c) == m.degree + 1 and c[0] == energy_continuous(m, x)
    assert abs(np.polynomial.polynomial.polyval(a, c) - energy_continuous(m, x + a * r)) < 1e-8


@given(st.integers(0, 10_000))
def test_closed_form_matches_probes(seed):
    m = make_random(seed, 2)
    x = init_random(m, [seed, 0])
    r = init_random(m, [seed, 1]) - x
    np.testing.assert_allclose(pairwise_coeffs(m, x, r), probe_coeffs(m, x, r), atol=1e-9)


@given(st.integers(0, 10_000), st.integers(2, 4))
def test_line_search_beats_sampled_steps(seed, degree):
    m = make_random(seed, degree)
    x = init_random(m, [seed, 0])
    r = init_random(m, [seed, 1]) - x
    alpha = line_search(m, x, r)
    assert 0.0 <= alpha <= 1.0
    best = energy_continuous(m, x + alpha * r)
    for a in np.linspace(0, 1, 21):
        assert best <= energy_continuous(m, x + a * r) + 1e-6


def test_fw_gap_nonnegative_and_zero_at_optimum():
    m = MrfModel((2,), [Clique((0,), np.array([0.3, -0.7]))])
    assert fw_gap(m, np.array([0.3, -0.7]), np.array([0.0, 1.0])) == 0.0
    assert fw_gap(m, np.array([0.3, -0.7]), np.array([0.5, 0.5])) == pytest.approx(0.5)
