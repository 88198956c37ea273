import numpy as np
import pytest

from src.core import RandomSource


@pytest.fixture
def rng() -> RandomSource:
    return RandomSource(seed=11)


@pytest.fixture
def blobs(rng) -> np.ndarray:
    """
    Three well separated clusters of 40 points in the plane.
    """

    centers = np.array([[0.0, 0.0], [10.0, 0.0], [0.0, 10.0]])

    return np.concatenate([center + 0.5 * rng.normal(size=(40, 2)) for center in centers])
