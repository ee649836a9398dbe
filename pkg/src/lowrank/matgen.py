"""Test matrices with controlled spectra."""

from dataclasses import dataclass

import numpy as np

from .core import derive_seed, gaussian_matrix, generator, householder_qr
from .errors import ParameterError


@dataclass(frozen=True)
class SpectrumSpec:
    """``m x n`` matrix whose singular values run log-uniformly from 1 to ``10**b``."""

    m: int
    n: int
    b: float
    seed: int = 0

    def __post_init__(self):
        if not self.b < 0:
            raise ParameterError(f"decay exponent b must be negative, got {self.b}")
        if min(self.m, self.n) < 2:
            raise ParameterError(f"need min(m, n) >= 2, got {self.m}x{self.n}")


def random_orthonormal(rows, cols, seed):
    """``rows x cols`` matrix with orthonormal columns, Haar distributed.

    Q factor of a seeded Gaussian matrix with the signs fixed so that the
    triangular factor has a positive diagonal.
    """
    if not 1 <= cols <= rows:
        raise ParameterError(f"need 1 <= cols <= rows, got {rows}x{cols}")
    q, _ = householder_qr(gaussian_matrix(rows, cols, seed))
    return q


def logspace_spectrum(r, b):
    return 10.0 ** (b * np.arange(r) / (r - 1))


def gen_logspace(spec):
    """``A = U diag(d) V^T`` with ``d[j] = 10**(b j / (r - 1))``, ``r = min(m, n)``."""
    if not isinstance(spec, SpectrumSpec):
        raise ParameterError("gen_logspace expects a SpectrumSpec")
    r = min(spec.m, spec.n)
    u = random_orthonormal(spec.m, r, derive_seed(spec.seed, 0))
    v = random_orthonormal(spec.n, r, derive_seed(spec.seed, 1))
    return (u * logspace_spectrum(r, spec.b)) @ v.T


def sorensen_embree_schedule(variant, terms):
    """Coefficients of the rank-one terms and the breakpoint between the two regimes.

    Full size is 300 terms with 10 boosted ones. Fewer terms shrink the
    boosted range proportionally: ``breakpoint = max(2, terms // 30)``.
    """
    if variant not in (1, 2):
        raise ParameterError(f"variant must be 1 or 2, got {variant!r}")
    breakpoint = max(2, terms // 30)
    j = np.arange(1, terms + 1, dtype=float)
    lead = 2.0 if variant == 1 else 1000.0
    return np.where(j <= breakpoint, lead / j, 1.0 / j), breakpoint


def _sparse_vector(rng, length, nnz):
    x = np.zeros(length)
    x[rng.choice(length, size=nnz, replace=False)] = rng.uniform(0.0, 1.0, size=nnz)
    return x


def gen_sorensen_embree(variant, m, n, nnz_per_vector=None, seed=0):
    """Sum of ``min(n, 300)`` sparse nonnegative rank-one terms ``c_j x_j y_j^T``.

    Variant 1 boosts the leading terms by ``2/j``, variant 2 by ``1000/j``;
    later terms use ``1/j``. ``x_j`` and ``y_j`` get ``nnz_per_vector``
    nonzeros at uniformly random positions with uniform(0, 1) values; the
    default is 5% of each vector's length (at least one).
    """
    if m < 2 or n < 2:
        raise ParameterError(f"need m, n >= 2, got {m}x{n}")
    if nnz_per_vector is not None and nnz_per_vector < 1:
        raise ParameterError(f"nnz_per_vector must be positive, got {nnz_per_vector}")
    terms = min(n, 300)
    coeffs, _ = sorensen_embree_schedule(variant, terms)

    def nnz(length):
        if nnz_per_vector is None:
            return max(1, int(round(0.05 * length)))
        return min(nnz_per_vector, length)

    rng = generator(seed)
    a = np.zeros((m, n))
    for c in coeffs:
        x = _sparse_vector(rng, m, nnz(m))
        y = _sparse_vector(rng, n, nnz(n))
        a += c * np.outer(x, y)
    return a
