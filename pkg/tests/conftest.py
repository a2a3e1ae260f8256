import numpy as np
import pytest

from icflow.curvature import CurvatureSpec
from icflow.grid import make_grid

H2 = CurvatureSpec("power_sigma_k", 2, 1)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(scope="session")
def axisym64():
    return make_grid("axisym", 2, 64)
