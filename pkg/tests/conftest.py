import os

import numpy as np
import pytest

from eofbound import bounds, oracle

CACHE_DIR = os.path.join(os.path.dirname(__file__), ".surface_cache")


@pytest.fixture(scope="session")
def surface_default():
    """The default 301x301 surface, cached on disk across sessions."""
    return bounds.load_or_build(CACHE_DIR, grid_n=301, mu4_step=1e-3, workers=4)


@pytest.fixture(scope="session")
def surface_small():
    """A minimum-resolution surface for cheap structural tests."""
    return bounds.load_or_build(CACHE_DIR, grid_n=101, mu4_step=1e-2, workers=2)


@pytest.fixture(scope="session")
def simplex_400():
    return oracle.SimplexGrid.build(400)


@pytest.fixture()
def rng():
    return np.random.default_rng(20060817)
