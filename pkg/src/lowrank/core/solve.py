"""Solvers for the interpolation coefficients ``S11 @ T = S12``."""

from dataclasses import dataclass

import numpy as np

from ..errors import ConvergenceError, InputError, ParameterError, SingularityError
from .svd import pinv

BACK_SUBSTITUTION = "back-substitution"
TRUNCATED_PINV = "truncated-pseudoinverse"
TIKHONOV = "tikhonov"
KINDS = (BACK_SUBSTITUTION, TRUNCATED_PINV, TIKHONOV)

# |s11[0,0]| / |s11[k-1,k-1]| above this sends back-substitution to the
# truncated pseudoinverse when escalation is enabled.
ESCALATION_CONDITION = 1e10


@dataclass(frozen=True)
class SolveStrategy:
    """How to compute ``T`` from the triangular system ``S11 T = S12``.

    kind : {"back-substitution", "truncated-pseudoinverse", "tikhonov"}
    threshold : relative singular value (or pivot) cutoff in (0, 1)
    lam : Tikhonov weight, the penalty is ``lam**2 * ||T||_F**2``
    escalate : let back-substitution switch to the truncated
        pseudoinverse when the diagonal ratio exceeds 1e10
    """

    kind: str = BACK_SUBSTITUTION
    threshold: float = 1e-12
    lam: float = 0.0
    escalate: bool = True

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ParameterError(f"unknown solve strategy {self.kind!r}; expected one of {KINDS}")
        if not 0.0 < self.threshold < 1.0:
            raise ParameterError(f"threshold must lie in (0, 1), got {self.threshold}")
        if self.lam < 0:
            raise ParameterError(f"lam must be nonnegative, got {self.lam}")


DEFAULT_STRATEGY = SolveStrategy()


def triangular_condition(s11):
    """Cheap condition estimate ``|s11[0,0]| / |s11[-1,-1]|`` (inf on a zero pivot)."""
    d = np.abs(np.diag(s11))
    if d[-1] == 0.0:
        return np.inf
    return float(d[0] / d[-1])


def back_substitute(s11, s12, threshold=1e-12):
    """Solve the upper-triangular system row by row from the bottom.

    A pivot with ``|d_i| <= threshold * max|d|`` counts as zero. Its row of
    ``T`` is set to zero when the reduced right-hand side of that row is
    itself below ``threshold * max|d|``; otherwise the system is inconsistent
    and ``SingularityError`` names the row.
    """
    k = s11.shape[0]
    t = np.zeros((k, s12.shape[1]))
    diag = np.diag(s11)
    scale = np.abs(diag).max()
    cutoff = threshold * scale
    for i in range(k - 1, -1, -1):
        rhs = s12[i] - s11[i, i + 1 :] @ t[i + 1 :]
        if abs(diag[i]) <= cutoff:
            if rhs.size and np.abs(rhs).max() > cutoff:
                raise SingularityError(i)
            continue
        t[i] = rhs / diag[i]
    return t


def _tikhonov_cg(s11, s12, lam, tol=1e-13, maxiter=None):
    """Conjugate gradients on ``(S11^T S11 + lam^2 I) T = S11^T S12``, all columns at once."""
    k = s11.shape[0]
    if maxiter is None:
        maxiter = 20 * k + 100
    b = s11.T @ s12
    x = np.zeros_like(b)
    r = b.copy()
    p = r.copy()
    rr = np.einsum("ij,ij->j", r, r)
    stop = tol * tol * np.einsum("ij,ij->j", b, b)
    for _ in range(maxiter):
        active = rr > stop
        if not active.any():
            return x
        ap = s11.T @ (s11 @ p) + lam * lam * p
        pap = np.einsum("ij,ij->j", p, ap)
        live = active & (pap > 0)
        step = np.divide(rr, pap, out=np.zeros_like(rr), where=live)
        x += p * step
        r -= ap * step
        rr_new = np.einsum("ij,ij->j", r, r)
        beta = np.divide(rr_new, rr, out=np.zeros_like(rr), where=live)
        p = r + p * beta
        # finished or broken-down columns stay frozen
        rr = np.where(live, rr_new, 0.0)
    if np.any(rr > stop * 1e8):
        raise ConvergenceError(f"Tikhonov CG did not converge in {maxiter} iterations")
    return x


def stabilized_coeff_solve(s11, s12, strategy=DEFAULT_STRATEGY):
    """Coefficients ``T`` (k x (n-k)) minimizing ``||S11 T - S12||`` per ``strategy``.

    Back-substitution solves the triangular system exactly; zero pivots
    with consistent rows give zero rows of ``T``. With ``escalate`` on, a
    diagonal ratio above 1e10 switches to the truncated pseudoinverse
    ``V_hat D_hat^-1 U_hat^T S12``. The Tikhonov variant runs conjugate
    gradients on the regularized normal equations.
    """
    s11 = np.asarray(s11, dtype=np.float64)
    s12 = np.asarray(s12, dtype=np.float64)
    if s11.ndim != 2 or s11.shape[0] != s11.shape[1]:
        raise InputError(f"s11 must be square, got shape {s11.shape}")
    if s12.ndim != 2 or s12.shape[0] != s11.shape[0]:
        raise InputError(f"s12 must have {s11.shape[0]} rows, got shape {s12.shape}")
    if np.any(np.tril(s11, -1)):
        raise InputError("s11 must be upper triangular")
    k = s11.shape[0]
    if s12.shape[1] == 0:
        return np.zeros((k, 0))

    kind = strategy.kind
    if kind == BACK_SUBSTITUTION and strategy.escalate:
        if triangular_condition(s11) > ESCALATION_CONDITION:
            kind = TRUNCATED_PINV
    if kind == BACK_SUBSTITUTION:
        return back_substitute(s11, s12, strategy.threshold)
    if not s11.any():
        return np.zeros((k, s12.shape[1]))
    if kind == TRUNCATED_PINV:
        return pinv(s11, strategy.threshold) @ s12
    return _tikhonov_cg(s11, s12, strategy.lam)


def solve_escalates(s11, strategy=DEFAULT_STRATEGY):
    """True when ``strategy`` would leave back-substitution for this ``s11``."""
    return (
        strategy.kind == BACK_SUBSTITUTION
        and strategy.escalate
        and triangular_condition(s11) > ESCALATION_CONDITION
    )
