"""Deterministic column ID, row ID, two-sided ID and CUR-ID.

Everything here is driven by a partial column-pivoted QR. Writing
``A[:, J] = Q1 S1 + Q2 S2`` and splitting ``S1 = [S11 S12]``, the column
ID keeps ``C = A[:, J[:k]]`` and interpolation coefficients ``T`` solving
``S11 T = S12``, so that ``A ~= C [I T] P^T``. A second, exact ID of the
rows of ``C`` yields the row skeleton, and ``U = V^T pinv(R)`` completes
the CUR factorization.

Index vectors are 0-based throughout.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .core import (
    DEFAULT_STRATEGY,
    PivotedQr,
    SolveStrategy,
    as_matrix,
    cpqr_partial,
    frobenius_norm,
    pinv,
    solve_escalates,
    spectral_norm,
    stabilized_coeff_solve,
)
from .core.qr import check_rank
from .core.solve import BACK_SUBSTITUTION
from .errors import ParameterError

DEFAULT_PINV_THRESHOLD = 1e-12


@dataclass(frozen=True)
class ColumnId:
    """Column ID ``A ~= A[:, pivots[:k]] @ v().T``.

    ``t`` is the k x (n-k) coefficient block. ``qr`` is the partial QR the
    ID came from when it was computed from ``A`` itself (None for
    randomized IDs, whose QR is of the sample matrix). ``escalated`` records
    whether back-substitution was replaced by the truncated pseudoinverse.
    """

    n: int
    k: int
    pivots: np.ndarray
    t: np.ndarray
    qr: PivotedQr | None = field(default=None, repr=False, compare=False)
    escalated: bool = False

    @property
    def skeleton(self):
        return self.pivots[: self.k]

    def v(self):
        """Interpolation matrix, n x k, with ``v()[skeleton] == I_k``."""
        v = np.empty((self.n, self.k))
        v[self.pivots[: self.k]] = np.eye(self.k)
        v[self.pivots[self.k :]] = self.t.T
        return v


@dataclass(frozen=True)
class RowId:
    """Row ID ``A ~= w() @ A[pivots[:k], :]``; the transpose of a column ID."""

    m: int
    k: int
    pivots: np.ndarray
    t: np.ndarray
    escalated: bool = False

    @property
    def skeleton(self):
        return self.pivots[: self.k]

    def w(self):
        """Basis matrix, m x k, with ``w()[skeleton] == I_k``."""
        w = np.empty((self.m, self.k))
        w[self.pivots[: self.k]] = np.eye(self.k)
        w[self.pivots[self.k :]] = self.t.T
        return w


@dataclass(frozen=True)
class TwoSidedId:
    """``A ~= w @ skel @ v.T`` with ``skel = A[row_pivots[:k]][:, col_pivots[:k]]``."""

    row_pivots: np.ndarray
    col_pivots: np.ndarray
    w: np.ndarray
    v: np.ndarray
    skel: np.ndarray
    col_id: ColumnId = field(repr=False, compare=False)
    row_id: RowId = field(repr=False, compare=False)

    @property
    def k(self):
        return self.skel.shape[0]


@dataclass(frozen=True)
class CurDecomposition:
    """``A ~= c @ u @ r`` with ``c`` actual columns and ``r`` actual rows of ``A``."""

    c: np.ndarray
    u: np.ndarray
    r: np.ndarray
    col_pivots: np.ndarray
    row_pivots: np.ndarray
    tsid: TwoSidedId | None = field(default=None, repr=False, compare=False)

    @property
    def k(self):
        return self.u.shape[0]


@dataclass(frozen=True)
class ErrorReport:
    abs_spectral: float
    rel_spectral: float
    abs_frob: float
    rel_frob: float
    # set when ``a`` is zero and the relative fields hold absolute values
    relative_is_absolute: bool = False

    def as_dict(self):
        return {
            "abs_spectral": self.abs_spectral,
            "rel_spectral": self.rel_spectral,
            "abs_frob": self.abs_frob,
            "rel_frob": self.rel_frob,
            "relative_is_absolute": self.relative_is_absolute,
        }


def column_id_from_qr(qr, strategy=DEFAULT_STRATEGY, keep_qr=True):
    """Finish a column ID from the first ``k`` steps of a pivoted QR."""
    s11, s12 = qr.s11, qr.s12
    t = stabilized_coeff_solve(s11, s12, strategy)
    return ColumnId(
        n=qr.s.shape[1],
        k=qr.rank,
        pivots=qr.pivots.copy(),
        t=t,
        qr=qr if keep_qr else None,
        escalated=solve_escalates(s11, strategy),
    )


def id_column(a, k, strategy=DEFAULT_STRATEGY):
    """Rank-``k`` column interpolative decomposition from a partial pivoted QR.

    The error ``A - C V^T`` equals ``Q2 S22``, the part of ``A`` the
    truncated QR leaves out.
    """
    a = as_matrix(a)
    k = check_rank(k, *a.shape)
    return column_id_from_qr(cpqr_partial(a, k), strategy)


def id_row(a, k, strategy=DEFAULT_STRATEGY):
    """Rank-``k`` row ID, computed as the column ID of ``a.T``."""
    a = as_matrix(a)
    cid = id_column(a.T, k, strategy)
    return RowId(m=cid.n, k=cid.k, pivots=cid.pivots, t=cid.t, escalated=cid.escalated)


def _skeleton_row_strategy(strategy):
    # C has at most k columns, so its row ID is exact; a numerically rank
    # deficient C keeps k and zeroes the coefficient rows of its null pivots.
    if strategy.kind == BACK_SUBSTITUTION:
        return replace(strategy, escalate=False)
    return strategy


def skeleton_row_id(c, strategy=DEFAULT_STRATEGY):
    """Full-rank row ID of the column skeleton ``c`` (m x k)."""
    c = as_matrix(c, "c")
    k = c.shape[1]
    if k > c.shape[0]:
        raise ParameterError(f"column skeleton has {k} columns but only {c.shape[0]} rows")
    return id_row(c, k, _skeleton_row_strategy(strategy))


def two_sided_from_column_id(a, col_id, strategy=DEFAULT_STRATEGY):
    k = col_id.k
    c = a[:, col_id.skeleton]
    row_id = skeleton_row_id(c, strategy)
    rows, cols = row_id.skeleton, col_id.skeleton
    return TwoSidedId(
        row_pivots=row_id.pivots,
        col_pivots=col_id.pivots,
        w=row_id.w(),
        v=col_id.v(),
        skel=a[np.ix_(rows, cols)].copy(),
        col_id=col_id,
        row_id=row_id,
    )


def id_two_sided(a, k, strategy=DEFAULT_STRATEGY):
    """Rank-``k`` two-sided ID ``A ~= W A[I, J] V^T``.

    A column ID of ``A`` followed by an exact row ID of its column
    skeleton, so the result has the same error as the column ID.
    """
    a = as_matrix(a)
    k = check_rank(k, *a.shape)
    return two_sided_from_column_id(a, id_column(a, k, strategy), strategy)


def cur_from_column_id(a, col_id, strategy=DEFAULT_STRATEGY, pinv_threshold=DEFAULT_PINV_THRESHOLD):
    tsid = two_sided_from_column_id(a, col_id, strategy)
    rows = tsid.row_pivots[: col_id.k]
    cols = tsid.col_pivots[: col_id.k]
    c = a[:, cols].copy()
    r = a[rows, :].copy()
    u = tsid.v.T @ pinv(r, pinv_threshold)
    return CurDecomposition(c=c, u=u, r=r, col_pivots=tsid.col_pivots, row_pivots=tsid.row_pivots, tsid=tsid)


def cur_id(a, k, strategy=DEFAULT_STRATEGY, pinv_threshold=DEFAULT_PINV_THRESHOLD):
    """Rank-``k`` CUR decomposition built on a two-sided ID.

    ``C`` and ``R`` are the skeleton columns and rows; ``U`` is the
    least-squares solution of ``U R = V^T`` through a truncated-SVD
    pseudoinverse of ``R``.
    """
    a = as_matrix(a)
    k = check_rank(k, *a.shape)
    return cur_from_column_id(a, id_column(a, k, strategy), strategy, pinv_threshold)


def cur_refined_u(a, cur, col_id, qr=None, pinv_threshold=DEFAULT_PINV_THRESHOLD):
    """Linking matrix from ``U R = V^T + pinv(C) E`` with ``E = A - Q S`` of the partial QR.

    Folds the truncation error of the column ID back into ``U``. ``qr``
    defaults to the factorization stored on ``col_id``.
    """
    a = as_matrix(a)
    qr = col_id.qr if qr is None else qr
    if qr is None:
        raise ParameterError("cur_refined_u needs the partial QR of A (col_id carries none)")
    m, n = a.shape
    k = cur.k
    if qr.q.shape != (m, k) or qr.s.shape != (k, n) or col_id.k != k or col_id.n != n:
        raise ParameterError(
            f"inconsistent factors: A {m}x{n}, k={k}, Q {qr.q.shape}, S {qr.s.shape}, ID rank {col_id.k}"
        )
    if not np.array_equal(qr.pivots, col_id.pivots) or not np.array_equal(col_id.pivots, cur.col_pivots):
        raise ParameterError("pivot vectors of the QR, column ID and CUR disagree")
    e = np.empty_like(a)
    e[:, qr.pivots] = a[:, qr.pivots] - qr.q @ qr.s
    rhs = col_id.v().T + pinv(cur.c, pinv_threshold) @ e
    return rhs @ pinv(cur.r, pinv_threshold)


def reconstruct_id(a, col_id):
    """Materialize ``C V^T`` without forming ``V``."""
    a = as_matrix(a)
    c = a[:, col_id.skeleton]
    out = np.empty((a.shape[0], col_id.n))
    out[:, col_id.skeleton] = c
    out[:, col_id.pivots[col_id.k :]] = c @ col_id.t
    return out


def reconstruct_tsid(a, tsid):
    return tsid.w @ tsid.skel @ tsid.v.T


def reconstruct_cur(cur):
    return cur.c @ cur.u @ cur.r


def error_report(a, approx):
    """Absolute and relative spectral/Frobenius norms of ``a - approx``.

    For a zero ``a`` the relative fields repeat the absolute ones and
    ``relative_is_absolute`` is set.
    """
    a = as_matrix(a)
    approx = as_matrix(approx, "approx")
    if approx.shape != a.shape:
        raise ParameterError(f"shape mismatch: {a.shape} vs {approx.shape}")
    diff = a - approx
    abs_2, abs_f = spectral_norm(diff), frobenius_norm(diff)
    a_2, a_f = spectral_norm(a), frobenius_norm(a)
    if a_f == 0.0:
        return ErrorReport(abs_2, abs_2, abs_f, abs_f, relative_is_absolute=True)
    return ErrorReport(abs_2, abs_2 / a_2, abs_f, abs_f / a_f)


def storage_units(kind, m, n, k):
    """Number of stored scalars for a rank-``k`` factorization of an m x n matrix.

    The column ID stores ``C`` and ``T`` (``V`` hides an identity), the
    two-sided ID stores ``T`` blocks on both sides plus the skeleton, and
    CUR stores ``C``, ``R`` and a dense ``U``.
    """
    if not (isinstance(k, (int, np.integer)) and 1 <= k <= min(m, n)):
        raise ParameterError(f"rank k={k} outside [1, {min(m, n)}] for a {m}x{n} matrix")
    if kind == "id":
        return m * k + k * (n - k)
    if kind == "tsid":
        return k * (m - k) + k * k + k * (n - k)
    if kind == "cur":
        return m * k + k * n + k * k
    raise ParameterError(f"unknown factorization kind {kind!r}; expected 'id', 'tsid' or 'cur'")


__all__ = [
    "ColumnId",
    "CurDecomposition",
    "ErrorReport",
    "RowId",
    "SolveStrategy",
    "TwoSidedId",
    "column_id_from_qr",
    "cur_from_column_id",
    "cur_id",
    "cur_refined_u",
    "error_report",
    "id_column",
    "id_row",
    "id_two_sided",
    "reconstruct_cur",
    "reconstruct_id",
    "reconstruct_tsid",
    "skeleton_row_id",
    "storage_units",
    "two_sided_from_column_id",
]
