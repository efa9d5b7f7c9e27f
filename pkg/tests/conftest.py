from fractions import Fraction
from functools import lru_cache

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from hsse.embedding import normalize
from hsse.oracle import gen_gap_instance
from hsse.sdp import build_relaxation, solve

settings.register_profile("default", deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@lru_cache(maxsize=None)
def solved_gap(r: int):
    H, delta = gen_gap_instance(r)
    spec = build_relaxation(H, delta)
    sol = solve(spec)
    return H, delta, spec, sol, normalize(sol)


@lru_cache(maxsize=None)
def solved(H, delta):
    spec = build_relaxation(H, delta)
    sol = solve(spec)
    return spec, sol, normalize(sol, tol_zero=1e-5)


@pytest.fixture
def gap8():
    return solved_gap(8)


def orthogonal_gram(r: int) -> np.ndarray:
    return np.eye(r) / r


HALF = Fraction(1, 2)
