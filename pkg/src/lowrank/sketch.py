"""Randomized row sampling and the randomized ID, CUR-ID and SVD built on it.

A sample matrix ``Y = Omega A`` (l x n) mixes the rows of ``A``; when its
row space captures the dominant right singular vectors, a pivoted QR of
``Y`` picks the same kind of column skeleton a pivoted QR of ``A`` would,
at the price of a matrix product.

Three samplers are provided:

* Gaussian: ``Omega`` has i.i.d. N(0, 1) entries.
* Subsampled random trigonometric transform:
  ``Omega = sqrt(m / l) R H D`` with ``D`` a random +-1 diagonal, ``H`` the
  orthonormal discrete Hartley transform and ``R`` a uniform choice of
  ``l`` distinct rows. This is the real-valued counterpart of the
  subsampled random Fourier transform (unit-modulus complex diagonal,
  unitary DFT); ``H`` is real, symmetric and orthogonal and is applied
  with an FFT in O(m n log m) work.
* Power sampling: ``Y = Omega A (A^T A)^q``, evaluated by alternating
  products with ``A^T`` and ``A``, optionally re-orthonormalizing the rows
  of ``Y`` before each product.
"""

from dataclasses import dataclass, field

import numpy as np

from .core import (
    DEFAULT_STRATEGY,
    Svd,
    as_matrix,
    cpqr_partial,
    gaussian_matrix,
    generator,
    orth_rows,
    svd,
)
from .core.qr import check_rank
from .errors import ParameterError
from .factorize import DEFAULT_PINV_THRESHOLD, column_id_from_qr, cur_from_column_id

GAUSSIAN = "gaussian"
SRFT = "srft"


@dataclass(frozen=True)
class SketchConfig:
    """Sampler settings.

    kind : "gaussian" or "srft"
    oversampling : extra Gaussian samples, ``l = k + oversampling``
    srft_samples : SRFT sample count, ``2 k`` when None
    power : number of power iterations ``q``
    reorthonormalize : orthonormalize between products; defaults to ``power > 0``
    seed : seed of the random operator
    """

    kind: str = GAUSSIAN
    oversampling: int = 10
    srft_samples: int | None = None
    power: int = 0
    reorthonormalize: bool | None = None
    seed: int = 0

    def __post_init__(self):
        if self.kind not in (GAUSSIAN, SRFT):
            raise ParameterError(f"unknown sketch kind {self.kind!r}")
        if self.oversampling < 0:
            raise ParameterError(f"oversampling must be >= 0, got {self.oversampling}")
        if self.power < 0:
            raise ParameterError(f"power must be >= 0, got {self.power}")
        if self.srft_samples is not None and self.srft_samples < 1:
            raise ParameterError(f"srft_samples must be positive, got {self.srft_samples}")

    @property
    def reorth(self):
        return self.power > 0 if self.reorthonormalize is None else bool(self.reorthonormalize)

    def samples(self, k, m):
        """Sample count for target rank ``k`` on a matrix with ``m`` rows.

        Capped at ``m``: a sketch with ``m`` rows already spans the full row space.
        """
        wanted = k + self.oversampling if self.kind == GAUSSIAN else (self.srft_samples or 2 * k)
        ell = min(wanted, m)
        if ell < k:
            raise ParameterError(f"{ell} samples cannot support rank {k}")
        return ell

    def with_seed(self, seed):
        return SketchConfig(
            self.kind, self.oversampling, self.srft_samples, self.power, self.reorthonormalize, seed
        )


@dataclass(frozen=True)
class SampleMatrix:
    y: np.ndarray
    provenance: dict = field(default_factory=dict)

    @property
    def samples(self):
        return self.y.shape[0]


def _check_samples(ell, m):
    if isinstance(ell, (bool, np.bool_)) or not isinstance(ell, (int, np.integer)):
        raise ParameterError(f"sample count must be an integer, got {ell!r}")
    if not 1 <= ell <= m:
        raise ParameterError(f"sample count {ell} outside [1, {m}]")
    return int(ell)


def sketch_gaussian(a, ell, seed):
    """``Y = Omega A`` with ``Omega = gaussian_matrix(ell, m, seed)``."""
    a = as_matrix(a)
    ell = _check_samples(ell, a.shape[0])
    omega = gaussian_matrix(ell, a.shape[0], seed)
    return SampleMatrix(omega @ a, {"kind": GAUSSIAN, "samples": ell, "seed": seed})


def srft_parameters(m, ell, seed):
    """Random signs (length m) and sampled row indices (length ell) of the SRFT."""
    rng = generator(seed)
    signs = rng.integers(0, 2, size=m) * 2.0 - 1.0
    rows = rng.choice(m, size=ell, replace=False)
    return signs, rows


def hartley(x):
    """Orthonormal discrete Hartley transform along axis 0."""
    f = np.fft.fft(x, axis=0)
    return (f.real - f.imag) / np.sqrt(x.shape[0])


def srft_matrix(m, ell, seed):
    """Dense ``Omega = sqrt(m/ell) R H D`` built entrywise from ``cas(2 pi p q / m)``."""
    signs, rows = srft_parameters(m, ell, seed)
    angle = 2.0 * np.pi * np.outer(rows, np.arange(m)) / m
    h = (np.cos(angle) + np.sin(angle)) / np.sqrt(m)
    return np.sqrt(m / ell) * h * signs[None, :]


def sketch_srft(a, ell, seed):
    """``Y = sqrt(m/ell) R H D A`` via the FFT."""
    a = as_matrix(a)
    m = a.shape[0]
    ell = _check_samples(ell, m)
    signs, rows = srft_parameters(m, ell, seed)
    y = np.sqrt(m / ell) * hartley(signs[:, None] * a)[rows]
    return SampleMatrix(y, {"kind": SRFT, "samples": ell, "seed": seed})


def sketch_power(a, ell, q, reorth=True, seed=0, kind=GAUSSIAN):
    """``Y = Omega A (A^T A)^q`` by ``q`` rounds of ``Y <- Y A^T``, ``Y <- Y A``.

    With ``reorth`` the rows of ``Y`` are orthonormalized before every
    product, which keeps small singular directions from drowning in
    roundoff. ``q = 0`` returns the plain sketch.
    """
    if q < 0:
        raise ParameterError(f"power q must be >= 0, got {q}")
    a = as_matrix(a)
    base = sketch_srft(a, ell, seed) if kind == SRFT else sketch_gaussian(a, ell, seed)
    y = base.y
    for _ in range(q):
        if reorth:
            y = orth_rows(y, tol=0.0)
        y = y @ a.T
        if reorth:
            y = orth_rows(y, tol=0.0)
        y = y @ a
    provenance = dict(base.provenance, power=q, reorthonormalize=bool(reorth))
    return SampleMatrix(y, provenance)


def sketch(a, ell, config):
    """Sample ``a`` with ``ell`` rows according to ``config``."""
    return sketch_power(a, ell, config.power, config.reorth, config.seed, config.kind)


def randomized_id(a, k, config=SketchConfig(), strategy=DEFAULT_STRATEGY):
    """Rank-``k`` column ID whose skeleton and coefficients come from a sample of ``a``.

    Runs ``k`` pivoted QR steps on ``Y``; the first ``k`` steps of a full
    pivoted QR are the same, so this equals factoring ``Y`` completely and
    discarding the trailing ``l - k`` columns of ``Q`` and rows of ``S``.
    """
    a = as_matrix(a)
    m, n = a.shape
    k = check_rank(k, m, n)
    ell = config.samples(k, m)
    y = sketch(a, ell, config).y
    return column_id_from_qr(cpqr_partial(y, k), strategy, keep_qr=False)


def randomized_cur(a, k, config=SketchConfig(), strategy=DEFAULT_STRATEGY, pinv_threshold=DEFAULT_PINV_THRESHOLD):
    """CUR-ID on top of :func:`randomized_id`; the row step is exact as in ``cur_id``."""
    a = as_matrix(a)
    return cur_from_column_id(a, randomized_id(a, k, config, strategy), strategy, pinv_threshold)


def randomized_svd(a, k, config=SketchConfig()):
    """Rank-``k`` SVD restricted to the row space of a sample of ``a``."""
    a = as_matrix(a)
    m, n = a.shape
    k = check_rank(k, m, n)
    ell = config.samples(k, m)
    basis = orth_rows(sketch(a, ell, config).y)
    small = svd(a @ basis.T)
    r = min(k, small.sigma.size)
    return Svd(u=small.u[:, :r], sigma=small.sigma[:r], v=basis.T @ small.v[:, :r])
