import numpy as np
import pytest

from cli.suites import picard_trajectory, reference_trajectory
from elliptic_core import DEFAULT_OPTIONS, ModularParameter

TAUS = (1j, 0.2 + 0.9j, -0.3 + 1.4j, 0.45 + 0.7j)


@pytest.fixture
def opts():
    return DEFAULT_OPTIONS


@pytest.fixture(params=TAUS, ids=[str(t) for t in TAUS])
def tau(request):
    return ModularParameter(request.param)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="module")
def p2_trajectory():
    return reference_trajectory("p2")


@pytest.fixture(scope="module")
def hitchin_trajectory():
    return reference_trajectory("hitchin")


@pytest.fixture(scope="module")
def generic_trajectory():
    return reference_trajectory("generic")


@pytest.fixture(scope="module")
def picard_line():
    return picard_trajectory()
