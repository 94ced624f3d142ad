import pathlib

import numpy as np
import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"


@pytest.fixture
def rng():
    return np.random.default_rng(20230711)


def ks_distance(sorted_values: np.ndarray, cdf_values: np.ndarray) -> float:
    """One-sample KS distance given sorted data and the null CDF at those points."""
    n = len(sorted_values)
    grid = np.arange(1, n + 1) / n
    return float(np.max(np.maximum(np.abs(grid - cdf_values),
                                   np.abs(grid - 1.0 / n - cdf_values))))


def axis(p: int, k: int = 0) -> np.ndarray:
    e = np.zeros(p)
    e[k] = 1.0
    return e
