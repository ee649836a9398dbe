"""Seeded random matrices.

All randomness flows through ``numpy.random.Generator`` on the Philox
4x64 counter-based bit generator; normal deviates come from numpy's
ziggurat sampler. A given integer seed therefore produces the same
matrix on every platform and numpy release that keeps these algorithms.
"""

import numpy as np

from ..errors import ParameterError


def generator(seed):
    """Philox-backed generator for a nonnegative integer seed."""
    if isinstance(seed, (bool, np.bool_)) or not isinstance(seed, (int, np.integer)) or seed < 0:
        raise ParameterError(f"seed must be a nonnegative integer, got {seed!r}")
    return np.random.Generator(np.random.Philox(int(seed)))


def derive_seed(seed, index):
    """Independent child seed ``index`` of ``seed`` (via ``SeedSequence.spawn``)."""
    child = np.random.SeedSequence(int(seed)).spawn(index + 1)[index]
    return int(child.generate_state(1, dtype=np.uint64)[0] >> np.uint64(1))


def gaussian_matrix(rows, cols, seed):
    """``rows x cols`` matrix of i.i.d. standard normal entries."""
    if rows < 1 or cols < 1:
        raise ParameterError(f"dimensions must be positive, got {rows}x{cols}")
    return generator(seed).standard_normal((rows, cols))
