import numpy as np
import pytest
from hypothesis import settings

from isocrys.ring import RingSpec

settings.register_profile("default", max_examples=60, deadline=None)
settings.load_profile("default")


@pytest.fixture(scope="session")
def spec54():
    return RingSpec(p=5, f=4, N=16)


@pytest.fixture(scope="session")
def spec52():
    return RingSpec(p=5, f=2, N=16)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
