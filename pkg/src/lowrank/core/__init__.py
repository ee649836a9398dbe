"""Dense real kernels: pivoted QR, Jacobi SVD, solves and random matrices."""

from .qr import PivotedQr, as_matrix, cpqr_full, cpqr_partial, householder_qr, orth_rows
from .rng import derive_seed, gaussian_matrix, generator
from .solve import (
    DEFAULT_STRATEGY,
    SolveStrategy,
    back_substitute,
    solve_escalates,
    stabilized_coeff_solve,
)
from .svd import Svd, frobenius_norm, pinv, singular_values, spectral_norm, svd

__all__ = [
    "DEFAULT_STRATEGY",
    "PivotedQr",
    "SolveStrategy",
    "Svd",
    "as_matrix",
    "back_substitute",
    "cpqr_full",
    "cpqr_partial",
    "derive_seed",
    "frobenius_norm",
    "gaussian_matrix",
    "generator",
    "householder_qr",
    "orth_rows",
    "pinv",
    "singular_values",
    "solve_escalates",
    "spectral_norm",
    "stabilized_coeff_solve",
    "svd",
]
