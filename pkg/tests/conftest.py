import numpy as np
import pytest


def rank_k(m, n, k, seed):
    """Random m x n matrix of exact rank k."""
    rng = np.random.default_rng(seed)
    return rng.standard_normal((m, k)) @ rng.standard_normal((k, n))


def oracle_sigma(a):
    return np.linalg.svd(a, compute_uv=False)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
