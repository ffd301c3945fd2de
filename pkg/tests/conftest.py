"""Shared test oracles, written independently of the package's own checks."""

import numpy as np
import pytest


def estimate_acf(field, lags, pairs_per_lag, rng, half_region=1500.0):
    """Independent autocorrelation estimator: correlate values at random
    point pairs separated by each lag along random directions."""
    out = np.empty(len(lags))
    for i, lag in enumerate(lags):
        base = rng.uniform(-half_region, half_region, (pairs_per_lag, 3))
        step = rng.standard_normal((pairs_per_lag, 3))
        step /= np.linalg.norm(step, axis=1, keepdims=True)
        a = field.evaluate(base)
        b = field.evaluate(base + lag * step)
        out[i] = np.corrcoef(a, b)[0, 1]
    return out


def random_covariance(rng, n=4):
    """Random Hermitian PSD matrix from a tall complex factor."""
    x = rng.standard_normal((n + 2, n)) + 1j * rng.standard_normal((n + 2, n))
    return x.conj().T @ x


@pytest.fixture
def rng():
    return np.random.default_rng(20260810)
