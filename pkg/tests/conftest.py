import random

import pytest
from hypothesis import HealthCheck, settings, strategies as st

from rauzy.perm import Permutation, is_irreducible

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def perms(draw, min_n=1, max_n=9):
    n = draw(st.integers(min_n, max_n))
    return Permutation(tuple(draw(st.permutations(range(1, n + 1)))))


def irreducibles(min_n=2, max_n=9):
    return perms(max(min_n, 2), max_n).filter(is_irreducible)


@pytest.fixture
def rng():
    return random.Random(1234)
