import random

import pytest

import ncalg as nc


@pytest.fixture(scope="session")
def hq():
    return nc.quaternion_algebra()


@pytest.fixture(scope="session")
def hq_float():
    return nc.quaternion_algebra(nc.FLOAT)


@pytest.fixture
def units(hq):
    """(1, i, j, k) over the exact quaternions."""
    return tuple(hq.basis(t) for t in range(4))


@pytest.fixture
def rng():
    return random.Random(0xA1B2)
