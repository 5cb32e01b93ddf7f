import itertools

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import make_random
from mrfrelax.exceptions import NotPairwise
from mrfrelax.generators import gen_grid
from mrfrelax.model import Clique, MrfModel, energy_continuous, energy_discrete, init_homogeneous, init_random
from mrfrelax.solvers import cqp_energy, cqp_solve
from mrfrelax.solvers.cqp import cqp_coeffs, cqp_diagonal


@given(st.integers(0, 10_000))
def test_equals_energy_on_vertices(seed):
    m = make_random(seed, 2, nodes=int(seed % 6) + 2, labels=(2, 3))
    for labels in itertools.product(*map(range, m.label_counts)):
        assert cqp_energy(m, m.one_hot(labels)) == energy_discrete(m, labels)


@given(st.integers(0, 10_000))
def test_convex_along_segments(seed):
    m = make_random(seed, 2, labels=(2, 4))
    a, b = init_random(m, [seed, 0]), init_random(m, [seed, 1])
    vals = [cqp_energy(m, a + t * (b - a)) for t in np.linspace(0, 1, 9)]
    assert min(np.diff(vals, 2)) >= -1e-9


def test_zero_pairwise_gives_plain_energy():
    m = MrfModel((2, 2), [Clique((0,), np.array([0.2, -0.1])), Clique((0, 1), np.zeros((2, 2)))])
    assert not cqp_diagonal(m).any()
    x = init_random(m, 3)
    assert cqp_energy(m, x) == energy_continuous(m, x)


def test_diagonal_is_half_abs_mass():
    F = np.array([[1.0, -2.0], [0.5, 0.0]])
    m = MrfModel((2, 2), [Clique((0, 1), F)])
    np.testing.assert_allclose(cqp_diagonal(m), [1.5, 0.25, 0.75, 1.0])


@given(st.integers(0, 10_000), st.floats(0, 1))
def test_closed_form_line_coefficients(seed, a):
    m = make_random(seed, 2)
    d = cqp_diagonal(m)
    x, y = init_random(m, [seed, 0]), init_random(m, [seed, 1])
    c = cqp_coeffs(m, x, y - x, d)
    assert np.polynomial.polynomial.polyval(a, c) == pytest.approx(cqp_energy(m, x + a * (y - x), d), abs=1e-10)


def test_rejects_higher_order():
    with pytest.raises(NotPairwise):
        cqp_solve(make_random(0, 3), init_homogeneous(make_random(0, 3)))


def test_solve_rounds_on_original_energy():
    m = gen_grid(3, 3, 2, seed=5)
    rep = cqp_solve(m, init_homogeneous(m))
    assert rep.discrete_energy == energy_discrete(m, rep.labels)
    assert np.all(np.diff(rep.energy_trace) <= 1e-12)
    assert rep.discrete_energy <= rep.continuous_energy + 1e-9
