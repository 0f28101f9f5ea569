import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from nottingham.series import FormalSeries, GroupSeries

settings.register_profile(
    "default", deadline=None, max_examples=60, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")

PRIMES = (2, 3, 5, 7)


def random_group(p: int, n: int, rng: np.random.Generator, density: float = 1.0) -> GroupSeries:
    c = rng.integers(0, p, n + 1)
    if density < 1.0:
        c[rng.random(n + 1) > density] = 0
    c[0], c[1] = 0, 1
    return GroupSeries(p, n, c)


def random_formal(p: int, n: int, rng: np.random.Generator) -> FormalSeries:
    c = rng.integers(0, p, n + 1)
    c[0] = 0
    return FormalSeries(p, n, c)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
