"""Shared pytest fixtures."""

import numpy as np
import pytest

from config import QuadConfig
from corpus import get_test_function


@pytest.fixture
def quad():
    return QuadConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def gaussian():
    return get_test_function("gaussian").radial(1)


@pytest.fixture
def cauchy():
    return get_test_function("cauchy").radial(1)


@pytest.fixture
def lorentz():
    return get_test_function("lorentz").radial(1)


@pytest.fixture
def bump():
    return get_test_function("bump").radial(1)


@pytest.fixture
def bump_half_line():
    return get_test_function("bump").half_line()
