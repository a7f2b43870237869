import numpy as np
import pytest

from phaselab import make_grid


@pytest.fixture
def grid32():
    return make_grid(1, 32, 2 * np.pi, 2 * np.pi)


@pytest.fixture
def grid64():
    return make_grid(1, 64, 2 * np.pi, 2 * np.pi)


@pytest.fixture
def rng():
    return np.random.default_rng(0)
