import numpy as np
import pytest

from ttolab import BlaschkeProduct, ModelSpace


@pytest.fixture(scope="session")
def z2():
    return ModelSpace(BlaschkeProduct((0.0, 0.0)))


@pytest.fixture(scope="session")
def z3():
    return ModelSpace(BlaschkeProduct((0.0, 0.0, 0.0)))


@pytest.fixture(scope="session")
def pair_space():
    # distinct zeros, one complex: exercises the generic Takenaka-Malmquist path
    return ModelSpace(BlaschkeProduct((0.5, -0.3j)))


@pytest.fixture(scope="session")
def triple_space():
    # repeated zero plus a negative one: the hardest of the small fixtures
    return ModelSpace(BlaschkeProduct((0.5, 0.5, -0.2)))


@pytest.fixture()
def rng():
    return np.random.default_rng(1234)
