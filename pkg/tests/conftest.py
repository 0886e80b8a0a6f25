import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from ni_so3.geometry import GroupElement

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(1234)


def random_element(rng, margin=0.05):
    c = rng.uniform(-1 + margin, 1 - margin)
    return GroupElement(rng.uniform(0, 2 * np.pi), float(np.arccos(c)), rng.uniform(0, 2 * np.pi))
