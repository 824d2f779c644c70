import numpy as np
import pytest

from symbath.generator import EnvironmentParams

B_VALUES = (0.0, 0.5, -0.5, 0.9, 0.99)


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


@pytest.fixture(params=B_VALUES, ids=lambda b: f"b={b}")
def params(request):
    return EnvironmentParams(a=1.0, b=request.param, c=1.0)


@pytest.fixture
def generic():
    return EnvironmentParams(a=1.3, b=0.4, c=0.7, omega=0.9)
