import numpy as np
import pytest
from hypothesis import settings

from mrfrelax.acceptance import random_model
from mrfrelax.model import Clique, MrfModel

settings.register_profile("default", max_examples=40, deadline=None)
settings.load_profile("default")


def two_node():
    """Unaries (1,2), (0,1) and pairwise [[0,1],[2,3]]."""
    return MrfModel(
        (2, 2),
        [
            Clique((0,), np.array([1.0, 2.0])),
            Clique((1,), np.array([0.0, 1.0])),
            Clique((0, 1), np.array([[0.0, 1.0], [2.0, 3.0]])),
        ],
    )


def zero_model(n=3, labels=2):
    return MrfModel((labels,) * n, [Clique((i,), np.zeros(labels)) for i in range(n)])


def make_random(seed, degree, **kw):
    return random_model(np.random.default_rng(seed), degree, **kw)


@pytest.fixture
def pair():
    return two_node()
