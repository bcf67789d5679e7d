import numpy as np
import pytest

from modnav import ObstacleSpec


@pytest.fixture
def disc():
    """Circular obstacle centered at (-9, 0) with radius 3.6."""
    return ObstacleSpec(center=(-9.0, 0.0), axis_scales=(12.96, 12.96), exponents=(1, 1))


@pytest.fixture
def rng():
    return np.random.default_rng(42)
