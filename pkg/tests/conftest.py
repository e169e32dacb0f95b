import os
import sys

import numpy as np
import pytest

# Add the project root to the path so we can import our modules
sys.path.append(os.path.abspath(os.path.join(os.path.dirname(__file__), '..')))

from src.qcp.analysis import QcpConfig
from src.rewrite.optimizer import OptimizeOptions


@pytest.fixture
def rng():
    """Seeded generator so randomized suites are reproducible."""
    return np.random.default_rng(20240611)


@pytest.fixture
def options():
    """Optimizer options independent of the environment."""
    return OptimizeOptions(qcp=QcpConfig())
