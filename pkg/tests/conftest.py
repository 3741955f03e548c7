import math

import numpy as np
import pytest
from hypothesis import settings

from spinphase import ModelParams

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")

REFERENCE = ModelParams(1.0, math.pi / 3, 0.5, 0.2)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture
def reference():
    return REFERENCE


def random_hermitian(rng, n):
    X = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return 0.5 * (X + X.conj().T)


def random_state(rng):
    v = rng.normal(size=4) + 1j * rng.normal(size=4)
    return v / np.linalg.norm(v)


def random_params(rng, alpha_min=1e-2):
    from spinphase.model import rabi_frequency

    while True:
        p = ModelParams(rng.uniform(0, 2), rng.uniform(0, math.pi), rng.uniform(-2, 2), rng.uniform(-1, 1))
        if rabi_frequency(p) > alpha_min:
            return p
