"""Householder QR with and without column pivoting."""

from dataclasses import dataclass

import numpy as np

from ..errors import InputError, ParameterError

# A downdated column norm below this fraction of its last exact value is
# recomputed from scratch (cancellation guard).
NORM_RECOMPUTE_RATIO = 1e-3


def as_matrix(a, name="a"):
    """Validate ``a`` as a nonempty, finite, 2-D float64 array."""
    arr = np.asarray(a, dtype=np.float64)
    if arr.ndim != 2:
        raise InputError(f"{name} must be 2-D, got shape {arr.shape}")
    if arr.shape[0] == 0 or arr.shape[1] == 0:
        raise InputError(f"{name} must be nonempty, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise InputError(f"{name} contains non-finite entries")
    return arr


def check_rank(k, m, n):
    if isinstance(k, (bool, np.bool_)) or not isinstance(k, (int, np.integer)):
        raise ParameterError(f"rank must be an integer, got {k!r}")
    if not 1 <= k <= min(m, n):
        raise ParameterError(f"rank k={k} outside [1, {min(m, n)}] for a {m}x{n} matrix")
    return int(k)


@dataclass(frozen=True)
class PivotedQr:
    """Partial or full factorization ``a[:, pivots] ~= q @ s``.

    ``trailing`` is the unreduced block left after ``rank`` Householder
    steps, expressed in the reflected basis. Its norms (spectral and
    Frobenius) equal those of ``a[:, pivots] - q @ s``; it is empty for a
    full factorization.
    """

    q: np.ndarray
    s: np.ndarray
    pivots: np.ndarray
    rank: int
    trailing: np.ndarray

    @property
    def s11(self):
        return self.s[:, : self.rank]

    @property
    def s12(self):
        return self.s[:, self.rank :]


def _reflector(x):
    """Return ``(u, beta, alpha)`` with ``(I - beta u u^T) x = alpha e_1``."""
    scale = np.abs(x).max()
    if scale == 0.0:
        return None, 0.0, 0.0
    # work on x / scale so that u @ u neither underflows nor overflows
    u = x / scale
    norm = np.sqrt(u @ u)
    unit = -norm if u[0] >= 0 else norm
    u[0] -= unit
    return u, 2.0 / (u @ u), unit * scale


def _householder(a, k, pivot, form_q=True):
    m, n = a.shape
    r = np.array(a, dtype=np.float64, order="C", copy=True)
    perm = np.arange(n)
    reflectors = []
    if pivot:
        norms = np.sqrt(np.einsum("ij,ij->j", r, r))
        exact = norms.copy()

    for j in range(k):
        if pivot:
            rem = norms[j:]
            cand = np.flatnonzero(rem == rem.max())
            # ties go to the lowest original column index
            p = j + cand[np.argmin(perm[j + cand])]
            if p != j:
                r[:, [j, p]] = r[:, [p, j]]
                perm[[j, p]] = perm[[p, j]]
                norms[[j, p]] = norms[[p, j]]
                exact[[j, p]] = exact[[p, j]]

        u, beta, alpha = _reflector(r[j:, j])
        reflectors.append((u, beta))
        if u is not None and j + 1 < n:
            block = r[j:, j + 1 :]
            block -= np.outer(beta * u, u @ block)
        r[j, j] = alpha
        r[j + 1 :, j] = 0.0

        if pivot and j + 1 < n:
            nrm = norms[j + 1 :]
            with np.errstate(divide="ignore", invalid="ignore"):
                ratio = np.where(nrm > 0, r[j, j + 1 :] / nrm, 0.0)
            down = nrm * np.sqrt(np.maximum(0.0, 1.0 - ratio * ratio))
            stale = np.flatnonzero(down <= NORM_RECOMPUTE_RATIO * exact[j + 1 :])
            if stale.size:
                cols = j + 1 + stale
                tail = r[j + 1 :, cols]
                fresh = np.sqrt(np.einsum("ij,ij->j", tail, tail))
                down[stale] = fresh
                exact[cols] = fresh
            norms[j + 1 :] = down

    q = np.zeros((m, k))
    q[:k, :k] = np.eye(k)
    for j in range(k - 1 if form_q else -1, -1, -1):
        u, beta = reflectors[j]
        if u is not None:
            rows = q[j:, j:]
            rows -= np.outer(beta * u, u @ rows)

    s = np.triu(r[:k, :])
    trailing = r[k:, k:].copy()
    # normalize to a nonnegative diagonal
    sign = np.where(np.diag(s) < 0, -1.0, 1.0)
    s *= sign[:, None]
    q *= sign[None, :]
    return q, s, perm, trailing


def cpqr_partial(a, k):
    """First ``k`` steps of Householder QR with column pivoting.

    Each step moves the remaining column of largest norm to the front.
    Column norms are downdated between steps and recomputed when
    cancellation makes the downdated value unreliable.

    Parameters
    ----------
    a : (m, n) array_like
    k : int
        Number of steps, ``1 <= k <= min(m, n)``.

    Returns
    -------
    PivotedQr
        ``q`` is m x k with orthonormal columns, ``s`` is k x n upper
        triangular with a nonnegative diagonal, and ``pivots`` is a
        0-based permutation with ``a[:, pivots] = q @ s + residual``.
    """
    a = as_matrix(a)
    m, n = a.shape
    k = check_rank(k, m, n)
    q, s, perm, trailing = _householder(a, k, pivot=True)
    return PivotedQr(q=q, s=s, pivots=perm, rank=k, trailing=trailing)


def cpqr_full(a):
    """Complete column-pivoted QR: ``a[:, pivots] = q @ s`` with ``min(m, n)`` steps."""
    a = as_matrix(a)
    return cpqr_partial(a, min(a.shape))


def pivoted_triangle(a):
    """Triangular factor and pivots of a full pivoted QR, without forming ``q``."""
    a = as_matrix(a)
    _, s, perm, _ = _householder(a, min(a.shape), pivot=True, form_q=False)
    return s, perm


def householder_qr(a):
    """Thin unpivoted QR, returning ``(q, r)`` with ``r`` of shape min(m,n) x n."""
    a = as_matrix(a)
    q, r, _, _ = _householder(a, min(a.shape), pivot=False)
    return q, r


def orth_rows(y, tol=None):
    """Orthonormal basis for the row space of ``y``, one basis vector per row.

    Uses column-pivoted Householder QR of ``y.T``, whose diagonal is
    nonincreasing. Basis vectors whose diagonal entry falls below ``tol``
    times the first carry no part of ``y`` and are dropped, so the result
    may have fewer rows than ``y``. ``tol=0`` keeps all ``min(y.shape)``
    rows.
    """
    y = as_matrix(y, "y")
    qr = cpqr_full(y.T)
    if tol is None:
        tol = max(y.shape) * np.finfo(float).eps
    d = np.diag(qr.s)
    keep = d >= tol * d[0]
    keep[0] = True
    return np.ascontiguousarray(qr.q[:, keep].T)
