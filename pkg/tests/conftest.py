import math

import numpy as np
import pytest

from tools.measures import build_measure
from chains.skeworth import construct_family, invert_w


SQRT_2PI = math.sqrt(2.0 * math.pi)


@pytest.fixture(scope="session")
def gaussian():
    return build_measure("hermitian-beta1", 80)


@pytest.fixture(scope="session")
def ginibre():
    return build_measure("real-asymmetric", 80, n_complex_nodes=32, n_complex_re=48)


@pytest.fixture(scope="session")
def gaussian_family(gaussian):
    f = construct_family(gaussian, 3)
    return f, invert_w(f)


@pytest.fixture(scope="session")
def ginibre_family(ginibre):
    f = construct_family(ginibre, 3)
    return f, invert_w(f)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def random_skew(rng, dim, scale=1.0):
    g = rng.standard_normal((dim, dim))
    return scale * (g - g.T)
