import numpy as np
import pytest

from util.hyperbolic import LieElement, exp_lie


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def h_family():
    """s -> H(s), translation along the real diameter towards 1."""
    return lambda s: exp_lie(LieElement(0.0, 1.0), s)


def random_lie(rng, scale: float = 1.0) -> LieElement:
    return LieElement(rng.normal(scale=scale), complex(*rng.normal(scale=scale, size=2)))


def random_disc_points(rng, n: int, radius: float = 0.9) -> np.ndarray:
    return radius * np.sqrt(rng.uniform(size=n)) * np.exp(2j * np.pi * rng.uniform(size=n))
