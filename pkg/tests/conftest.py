import numpy as np
import pytest

from qfridge.optimize import make_baths


@pytest.fixture
def fig4_baths():
    """Baths at T_w=170, T_h=80, T_c=30, three-dimensional, small coupling."""
    return make_baths(170.0, 80.0, 30.0, 3, 1e-3)


def random_hermitian(rng, n):
    a = rng.normal(size=(n, n)) + 1j * rng.normal(size=(n, n))
    return (a + a.conj().T) / 2
