"""One-sided Jacobi SVD, norms and the pseudoinverse.

The SVD first reduces the matrix with column-pivoted QR, ``A P = Q S``,
then runs Hestenes one-sided Jacobi on the rows of the square factor
``S`` (equivalently the columns of ``S^T``). The preliminary QR keeps the
Jacobi stage square and speeds up convergence.
"""

from dataclasses import dataclass

import numba
import numpy as np

from ..errors import ConvergenceError, ParameterError
from .qr import as_matrix, cpqr_full, pivoted_triangle

MAX_SWEEPS = 60
JACOBI_TOL = 1e-14


@dataclass(frozen=True)
class Svd:
    """``a = u @ diag(sigma) @ v.T`` with ``sigma`` nonincreasing."""

    u: np.ndarray
    sigma: np.ndarray
    v: np.ndarray

    def truncate(self, k):
        return Svd(self.u[:, :k], self.sigma[:k], self.v[:, :k])

    def matrix(self):
        return (self.u * self.sigma) @ self.v.T


@numba.njit(cache=True)
def _jacobi(g, w, tol, max_sweeps):
    """Orthogonalize the rows of ``g`` in place, applying the same rotations to ``w``.

    Returns the number of sweeps used, or -1 if ``max_sweeps`` ran out.
    """
    n, m = g.shape
    sq = np.empty(n)
    for sweep in range(max_sweeps):
        for i in range(n):
            acc = 0.0
            for t in range(m):
                acc += g[i, t] * g[i, t]
            sq[i] = acc
        rotated = False
        for i in range(n - 1):
            for j in range(i + 1, n):
                alpha = sq[i]
                beta = sq[j]
                # rows below ~1e-145 have subnormal products; leave them be
                if alpha < 1e-290 or beta < 1e-290:
                    continue
                gamma = 0.0
                for t in range(m):
                    gamma += g[i, t] * g[j, t]
                # sqrt each factor: alpha * beta underflows for tiny rows
                if abs(gamma) <= tol * np.sqrt(alpha) * np.sqrt(beta):
                    continue
                rotated = True
                zeta = (beta - alpha) / (2.0 * gamma)
                if zeta >= 0.0:
                    tn = 1.0 / (zeta + np.sqrt(1.0 + zeta * zeta))
                else:
                    tn = -1.0 / (-zeta + np.sqrt(1.0 + zeta * zeta))
                c = 1.0 / np.sqrt(1.0 + tn * tn)
                s = c * tn
                for t in range(m):
                    gi = g[i, t]
                    gj = g[j, t]
                    g[i, t] = c * gi - s * gj
                    g[j, t] = s * gi + c * gj
                for t in range(w.shape[1]):
                    wi = w[i, t]
                    wj = w[j, t]
                    w[i, t] = c * wi - s * wj
                    w[j, t] = s * wi + c * wj
                sq[i] = alpha - tn * gamma
                sq[j] = beta + tn * gamma
        if not rotated:
            return sweep + 1
    return -1


def _complete(basis, filled):
    """Replace the columns of ``basis`` not flagged in ``filled`` by an orthonormal completion."""
    n, r = basis.shape
    out = basis.copy()
    good = list(np.flatnonzero(filled))
    cand = 0
    for col in np.flatnonzero(~filled):
        while True:
            e = np.zeros(n)
            e[cand % n] = 1.0
            cand += 1
            for _ in range(2):
                if good:
                    b = out[:, good]
                    e -= b @ (b.T @ e)
            nrm = np.linalg.norm(e)
            if nrm > 0.5:
                break
        out[:, col] = e / nrm
        good.append(col)
    return out


def _svd_tall(a):
    m, n = a.shape
    qr = cpqr_full(a)
    g = np.ascontiguousarray(qr.s)  # n x n; its rows are the columns of S^T
    w = np.eye(n)
    sweeps = _jacobi(g, w, JACOBI_TOL, MAX_SWEEPS)
    if sweeps < 0:
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps on a {m}x{n} matrix"
        )
    sigma = np.sqrt(np.einsum("ij,ij->i", g, g))
    order = np.argsort(-sigma, kind="stable")
    sigma = sigma[order]
    g = g[order]
    w = w[order]
    filled = sigma > 0
    ux = np.zeros((n, n))
    ux[:, filled] = (g[filled] / sigma[filled, None]).T
    ux = _complete(ux, filled)
    u = qr.q @ w.T
    v = np.empty((n, n))
    v[qr.pivots] = ux
    return Svd(u=u, sigma=sigma, v=v)


def svd(a):
    """Thin SVD of ``a`` by one-sided Jacobi.

    Returns ``Svd`` with ``u`` m x r, ``sigma`` of length r and ``v`` n x r,
    where ``r = min(m, n)``. Raises ``ConvergenceError`` if 60 sweeps do not
    bring every pairwise column cosine below 1e-14.
    """
    a = as_matrix(a)
    if a.shape[0] >= a.shape[1]:
        return _svd_tall(a)
    t = _svd_tall(a.T)
    return Svd(u=t.v, sigma=t.sigma, v=t.u)


def singular_values(a):
    """Singular values only; identical to ``svd(a).sigma`` but skips the vectors."""
    a = as_matrix(a)
    if a.shape[0] < a.shape[1]:
        a = a.T
    s, _ = pivoted_triangle(a)
    g = np.ascontiguousarray(s)
    if _jacobi(g, np.empty((g.shape[0], 0)), JACOBI_TOL, MAX_SWEEPS) < 0:
        raise ConvergenceError(
            f"one-sided Jacobi did not converge in {MAX_SWEEPS} sweeps on a {a.shape[0]}x{a.shape[1]} matrix"
        )
    return np.sort(np.sqrt(np.einsum("ij,ij->i", g, g)))[::-1]


def spectral_norm(a):
    """Largest singular value; 0 for the zero matrix."""
    a = as_matrix(a)
    if not a.any():
        return 0.0
    return float(singular_values(a)[0])


def frobenius_norm(a):
    a = as_matrix(a)
    return float(np.sqrt(np.einsum("ij,ij->", a, a)))


def pinv(a, threshold=1e-12):
    """Moore-Penrose pseudoinverse, dropping ``sigma_j < threshold * sigma_1``."""
    if not 0.0 < threshold < 1.0:
        raise ParameterError(f"threshold must lie in (0, 1), got {threshold}")
    a = as_matrix(a)
    dec = svd(a)
    if dec.sigma[0] == 0.0:
        return np.zeros(a.shape[::-1])
    keep = dec.sigma >= threshold * dec.sigma[0]
    return (dec.v[:, keep] / dec.sigma[keep]) @ dec.u[:, keep].T
