"""Numerical checks of the CUR-ID error bounds.

With ``E = A - C V^T`` (column ID error) and ``Et = A - W R`` (row ID
error induced by skeletonizing ``C``):

* ``||A - C U R|| <= ||E|| + ||Et||``                (two-error bound)
* ``Et = P [0; F E]`` with ``F = [-T^T I] P^T``       (row error identity)
* ``||Et|| <= (1 + ||T||) ||E||``
* ``||A - C U R|| <= (2 + ||T||) ||E||``

All residuals are formed by direct subtraction. Comparisons allow a
relative slack of 1e-8 plus an absolute floor of ``64 eps ||A||_2`` so
that both sides sitting at roundoff level do not register as failures.
"""

from dataclasses import dataclass

import numpy as np

from .core import as_matrix, spectral_norm
from .errors import ValidationError
from .factorize import reconstruct_cur, reconstruct_id

REL_SLACK = 1e-8
ROUNDOFF_FACTOR = 64 * np.finfo(float).eps


def _roundoff(a):
    return ROUNDOFF_FACTOR * spectral_norm(a)


@dataclass(frozen=True)
class Lemma1Check:
    lhs: float
    rhs: float
    e_norm: float
    etilde_norm: float
    holds: bool


@dataclass(frozen=True)
class Lemma2Check:
    etilde_norm: float
    fe_norm: float
    max_entry_gap: float
    t_norm: float
    e_norm: float
    bound: float
    bound_holds: bool
    holds: bool


@dataclass(frozen=True)
class CorollaryCheck:
    lhs: float
    bound: float
    t_norm: float
    e_norm: float
    ceiling: float
    holds: bool


def _leq(lhs, rhs, floor):
    return bool(lhs <= rhs * (1.0 + REL_SLACK) + floor)


def _row_id(cur):
    if cur.tsid is None:
        raise ValidationError("CUR factors carry no two-sided ID; build them with cur_id or randomized_cur")
    return cur.tsid.row_id


def _check_shapes(a, cur, col_id):
    m, n = a.shape
    k = cur.k
    if cur.c.shape != (m, k) or cur.r.shape != (k, n) or col_id.n != n or col_id.k != k:
        raise ValidationError(
            f"A is {m}x{n} but C {cur.c.shape}, U {cur.u.shape}, R {cur.r.shape}, ID rank {col_id.k}"
        )


def verify_lemma1(a, cur, col_id, row_basis_w=None):
    """Check ``||A - CUR||_2 <= ||E||_2 + ||Et||_2`` for one CUR-ID."""
    a = as_matrix(a)
    _check_shapes(a, cur, col_id)
    w = cur.tsid.w if row_basis_w is None else np.asarray(row_basis_w, dtype=float)
    if w.shape != (a.shape[0], cur.k):
        raise ValidationError(f"W has shape {w.shape}, expected {(a.shape[0], cur.k)}")
    e = a - reconstruct_id(a, col_id)
    etilde = a - w @ cur.r
    lhs = spectral_norm(a - reconstruct_cur(cur))
    e_norm, et_norm = spectral_norm(e), spectral_norm(etilde)
    rhs = e_norm + et_norm
    return Lemma1Check(lhs, rhs, e_norm, et_norm, _leq(lhs, rhs, _roundoff(a)))


def row_error_via_f(a, col_id, row_selection):
    """``P [0; F E]``: the row ID error rebuilt from the column ID error."""
    a = as_matrix(a)
    e = a - reconstruct_id(a, col_id)
    skel, res = row_selection.skeleton, row_selection.pivots[row_selection.k :]
    out = np.zeros_like(a)
    out[res] = e[res] - row_selection.t.T @ e[skel]
    return out


def verify_lemma2(a, col_id, row_selection):
    """Compare ``A - W R`` with ``P [0; F E]`` and check ``||Et|| <= (1 + ||T||) ||E||``.

    ``row_selection`` is the row ID of the column skeleton ``C``; ``holds``
    reports agreement of the two evaluations to within 1e-8 of ``||A||_F``.
    """
    a = as_matrix(a)
    if row_selection.m != a.shape[0] or col_id.n != a.shape[1] or row_selection.k != col_id.k:
        raise ValidationError("row selection, column ID and A have inconsistent shapes")
    r = a[row_selection.skeleton]
    direct = a - row_selection.w() @ r
    via_f = row_error_via_f(a, col_id, row_selection)
    e = a - reconstruct_id(a, col_id)

    gap = float(np.abs(direct - via_f).max())
    et_norm = spectral_norm(direct)
    fe_norm = spectral_norm(via_f)
    t_norm = spectral_norm(row_selection.t) if row_selection.t.size else 0.0
    e_norm = spectral_norm(e)
    bound = (1.0 + t_norm) * e_norm
    floor = _roundoff(a)
    a_f = float(np.linalg.norm(a))
    agree = float(np.linalg.norm(direct - via_f)) <= REL_SLACK * a_f
    return Lemma2Check(
        etilde_norm=et_norm,
        fe_norm=fe_norm,
        max_entry_gap=gap,
        t_norm=t_norm,
        e_norm=e_norm,
        bound=bound,
        bound_holds=_leq(et_norm, bound, floor),
        holds=bool(agree),
    )


def verify_corollary(a, cur, col_id, nu=1.0):
    """Check ``||A - CUR||_2 <= (2 + ||T||_2) ||E||_2``.

    ``T`` is the coefficient block of the row ID of ``C``. ``ceiling`` is
    ``(1 + nu) sqrt(k (m - k))``, the size ``||T||`` could be held to by a
    strongly rank-revealing QR; plain pivoted QR does not guarantee it, so
    it is reported and never tested.
    """
    a = as_matrix(a)
    _check_shapes(a, cur, col_id)
    row_id = _row_id(cur)
    e_norm = spectral_norm(a - reconstruct_id(a, col_id))
    t_norm = spectral_norm(row_id.t) if row_id.t.size else 0.0
    lhs = spectral_norm(a - reconstruct_cur(cur))
    bound = (2.0 + t_norm) * e_norm
    ceiling = (1.0 + nu) * np.sqrt(row_id.k * row_id.t.shape[1])
    return CorollaryCheck(lhs, bound, t_norm, e_norm, float(ceiling), _leq(lhs, bound, _roundoff(a)))


def frobenius_excess(a, approx, sigma, k):
    """``||A - approx||_F^2 / ||A - A_k||_F^2 - 1`` given the singular values of ``a``.

    Returns NaN when the optimal rank-``k`` error is below ``1e-12 ||A||_F^2``.
    """
    a = as_matrix(a)
    sigma = np.asarray(sigma, dtype=float)
    tail = float(np.sum(sigma[k:] ** 2))
    total = float(np.sum(sigma**2))
    if tail <= 1e-12 * total:
        return float("nan")
    diff = a - approx
    return float(np.einsum("ij,ij->", diff, diff)) / tail - 1.0
