"""
Pytest configuration. Keeps logging quiet and provides seeded generators.
"""
import os

# Must run before cstre.env is imported.
os.environ.setdefault("LOG_LEVEL", "WARNING")

import numpy as np  # noqa: E402
import pytest  # noqa: E402


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(12345)


@pytest.fixture
def bell_state():
    from cstre.linalg import DensityMatrix

    psi = np.array([1.0, 0.0, 0.0, 1.0]) / np.sqrt(2.0)
    return DensityMatrix.from_pure(psi, (2, 2))
