import numpy as np
import pytest

from jamguard.config import SystemConfig
from jamguard.grid import ArrayGeometry, build_angular_grid


@pytest.fixture(scope="session")
def grid200():
    return build_angular_grid(ArrayGeometry(200))


@pytest.fixture
def default_config():
    return SystemConfig()


@pytest.fixture
def small_config():
    """Downsized system for fast experiment-harness tests."""
    return SystemConfig(
        antennas=32,
        users=5,
        pilot_length=5,
        coherence_block=50,
        min_common_pilots=3,
    )


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
