import math

import numpy as np
import pytest

from tsallis_coherence.qubit import QubitParams, rho_tz

S21 = math.sqrt(21) / 5


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def tz(t, z):
    return rho_tz(QubitParams(t, z))


def random_density(rng, dim):
    g = rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim))
    r = g @ g.conj().T
    return r / np.trace(r).real
