import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from conftest import oracle_sigma, rank_k
from lowrank.core import (
    SolveStrategy,
    back_substitute,
    cpqr_full,
    cpqr_partial,
    derive_seed,
    frobenius_norm,
    gaussian_matrix,
    generator,
    householder_qr,
    orth_rows,
    pinv,
    singular_values,
    spectral_norm,
    stabilized_coeff_solve,
    svd,
)
from lowrank.core.solve import solve_escalates, triangular_condition
from lowrank.errors import ConvergenceError, InputError, ParameterError, SingularityError

finite = st.floats(-1e3, 1e3, allow_nan=False, allow_infinity=False)


def small_matrices(max_side=8):
    shapes = st.tuples(st.integers(1, max_side), st.integers(1, max_side))
    return shapes.flatmap(lambda s: arrays(np.float64, s, elements=finite))


def unpivoted_qr_oracle(a, pivots):
    """numpy's Householder QR of the already permuted matrix, signs normalized."""
    q, r = np.linalg.qr(a[:, pivots])
    signs = np.where(np.diag(r) < 0, -1.0, 1.0)
    return q * signs, r * signs[:, None]


# ---- pivoted QR ----


def test_cpqr_identity_ties_go_to_lowest_index():
    qr = cpqr_partial(np.eye(3), 2)
    np.testing.assert_array_equal(qr.pivots, [0, 1, 2])
    np.testing.assert_allclose(np.abs(qr.s), [[1, 0, 0], [0, 1, 0]], atol=1e-15)


def test_cpqr_picks_largest_column_first():
    qr = cpqr_full(np.diag([1.0, 2.0]))
    np.testing.assert_array_equal(qr.pivots, [1, 0])
    assert abs(qr.s[0, 0]) == pytest.approx(2.0)
    assert abs(qr.s[1, 1]) == pytest.approx(1.0)


def test_cpqr_one_by_one():
    qr = cpqr_full(np.array([[5.0]]))
    np.testing.assert_allclose(qr.q, [[1.0]])
    np.testing.assert_allclose(qr.s, [[5.0]])
    np.testing.assert_array_equal(qr.pivots, [0])


def test_cpqr_partial_matches_unpivoted_oracle_on_same_pivots():
    a = gaussian_matrix(10, 8, 7)
    qr = cpqr_partial(a, 5)
    q, r = unpivoted_qr_oracle(a, qr.pivots)
    np.testing.assert_allclose(qr.q, q[:, :5], atol=1e-12)
    np.testing.assert_allclose(qr.s, r[:5], atol=1e-12)
    resid = np.linalg.norm(a[:, qr.pivots] - qr.q @ qr.s, 2)
    oracle = np.linalg.norm(r[5:, 5:], 2)
    assert resid == pytest.approx(oracle, rel=1e-10)
    assert np.linalg.norm(qr.trailing, 2) == pytest.approx(oracle, rel=1e-10)


def test_cpqr_duplicate_columns_rank_deficiency():
    rng = np.random.default_rng(0)
    x = rng.standard_normal((6, 1))
    a = np.hstack([x, x, rng.standard_normal((6, 1))])
    qr = cpqr_full(a)
    d = np.abs(np.diag(qr.s))
    assert d[-1] < 1e-14 * d[0]
    for j in range(3):
        for ell in range(j, 3):
            assert d[j] >= np.linalg.norm(qr.s[j:, ell]) - 1e-12


def test_cpqr_determinant_against_lu():
    a = gaussian_matrix(12, 12, 3)
    qr = cpqr_full(a)
    assert np.prod(np.abs(np.diag(qr.s))) == pytest.approx(abs(np.linalg.det(a)), rel=1e-8)


@settings(max_examples=60, deadline=None)
@given(small_matrices())
def test_cpqr_full_invariants(a):
    qr = cpqr_full(a)
    r = min(a.shape)
    assert qr.q.shape == (a.shape[0], r) and qr.s.shape == (r, a.shape[1])
    assert np.linalg.norm(qr.q.T @ qr.q - np.eye(r)) <= 1e-12 * r
    assert np.all(np.tril(qr.s, -1) == 0.0)
    assert np.all(np.diag(qr.s) >= 0)
    assert sorted(qr.pivots) == list(range(a.shape[1]))
    scale = max(np.linalg.norm(a), 1.0)
    assert np.linalg.norm(a[:, qr.pivots] - qr.q @ qr.s) <= 1e-12 * scale
    d = np.diag(qr.s)
    for j in range(r):
        tail = np.linalg.norm(qr.s[j:, j:], axis=0)
        assert np.all(d[j] >= tail - 1e-12 * scale)


@settings(max_examples=40, deadline=None)
@given(small_matrices(), st.data())
def test_cpqr_partial_is_prefix_of_full(a, data):
    k = data.draw(st.integers(1, min(a.shape)))
    full = cpqr_full(a)
    part = cpqr_partial(a, k)
    np.testing.assert_array_equal(part.pivots[:k], full.pivots[:k])
    scale = max(np.linalg.norm(a), 1.0)
    err = np.linalg.norm(a[:, part.pivots] - part.q @ part.s)
    assert abs(err - np.linalg.norm(part.trailing)) <= 1e-10 * scale


def test_cpqr_rejects_bad_input():
    with pytest.raises(ParameterError):
        cpqr_partial(np.eye(3), 4)
    with pytest.raises(ParameterError):
        cpqr_partial(np.eye(3), 0)
    with pytest.raises(InputError):
        cpqr_full(np.array([[np.nan]]))
    with pytest.raises(InputError):
        cpqr_full(np.zeros((0, 3)))
    with pytest.raises(InputError):
        cpqr_full(np.ones(3))


def test_householder_qr_matches_numpy():
    a = gaussian_matrix(7, 4, 2)
    q, r = householder_qr(a)
    qo, ro = np.linalg.qr(a)
    signs = np.sign(np.diag(ro))
    np.testing.assert_allclose(q, qo * signs, atol=1e-12)
    np.testing.assert_allclose(r, ro * signs[:, None], atol=1e-12)


# ---- SVD and norms ----


def test_svd_diagonal():
    dec = svd(np.diag([3.0, 1.0]))
    np.testing.assert_allclose(dec.sigma, [3, 1])
    np.testing.assert_allclose(np.abs(dec.u), np.eye(2), atol=1e-15)
    np.testing.assert_allclose(np.abs(dec.v), np.eye(2), atol=1e-15)


def test_svd_rank_one():
    x = np.array([1.0, 2.0, 2.0])
    y = np.array([3.0, 4.0])
    dec = svd(np.outer(x, y))
    np.testing.assert_allclose(dec.sigma, [15.0, 0.0], atol=1e-12 * 15)
    np.testing.assert_allclose(dec.v.T @ dec.v, np.eye(2), atol=1e-12)


def test_svd_squares_match_eigenvalues_of_gram():
    a = gaussian_matrix(9, 6, 11)
    eig = np.sort(np.linalg.eigvalsh(a.T @ a))[::-1]
    np.testing.assert_allclose(svd(a).sigma ** 2, eig, rtol=1e-10)


@pytest.mark.parametrize("shape", [(30, 20), (20, 30), (25, 25), (1, 7), (7, 1)])
def test_svd_against_lapack(shape):
    a = gaussian_matrix(*shape, seed=5)
    dec = svd(a)
    r = min(shape)
    assert dec.u.shape == (shape[0], r) and dec.v.shape == (shape[1], r)
    np.testing.assert_allclose(dec.sigma, oracle_sigma(a), rtol=1e-12)
    np.testing.assert_allclose(dec.u.T @ dec.u, np.eye(r), atol=1e-12)
    np.testing.assert_allclose(dec.v.T @ dec.v, np.eye(r), atol=1e-12)
    assert np.linalg.norm(a - dec.matrix()) <= 1e-12 * np.linalg.norm(a)


def test_svd_rank_deficient_gets_complete_bases():
    a = rank_k(12, 9, 3, seed=1)
    dec = svd(a)
    assert np.all(dec.sigma[3:] < 1e-13 * dec.sigma[0])
    np.testing.assert_allclose(dec.u.T @ dec.u, np.eye(9), atol=1e-12)
    np.testing.assert_allclose(dec.v.T @ dec.v, np.eye(9), atol=1e-12)
    assert np.linalg.norm(a - dec.matrix()) <= 1e-12 * np.linalg.norm(a)


def test_svd_zero_matrix():
    dec = svd(np.zeros((4, 3)))
    np.testing.assert_array_equal(dec.sigma, 0.0)
    np.testing.assert_allclose(dec.v.T @ dec.v, np.eye(3), atol=1e-15)


def test_singular_values_with_tiny_rows_converge():
    # Rows near 1e-83 used to underflow the convergence test
    rng = np.random.default_rng(2)
    a = rng.standard_normal((30, 30)) * np.logspace(0, -160, 30)[:, None]
    np.testing.assert_allclose(singular_values(a)[:5], oracle_sigma(a)[:5], rtol=1e-12)


@settings(max_examples=50, deadline=None)
@given(small_matrices())
def test_svd_sigma_sorted_and_sums_to_frobenius(a):
    s = svd(a).sigma
    assert np.all(np.diff(s) <= 0) and np.all(s >= 0)
    fro = frobenius_norm(a)
    assert abs(np.sum(s**2) - fro**2) <= 1e-10 * max(fro**2, 1e-300)
    np.testing.assert_array_equal(singular_values(a), s)


def test_spectral_norm_examples():
    assert spectral_norm(np.diag([2.0, 5.0])) == pytest.approx(5.0)
    assert spectral_norm(np.zeros((4, 4))) == 0.0


def test_spectral_norm_power_iteration_oracle():
    a = gaussian_matrix(8, 8, 1)
    g = a.T @ a
    x = np.ones(8)
    for _ in range(500):
        x = g @ x
        x /= np.linalg.norm(x)
    assert spectral_norm(a) == pytest.approx(np.sqrt(x @ g @ x), rel=1e-8)


def test_frobenius_examples():
    assert frobenius_norm(np.eye(3)) == pytest.approx(np.sqrt(3))
    assert frobenius_norm(np.array([[3.0, 4.0]])) == pytest.approx(5.0)
    a = gaussian_matrix(5, 5, 0)
    assert frobenius_norm(a) == pytest.approx(np.sqrt(np.trace(a.T @ a)), rel=1e-13)


def test_pinv_examples():
    np.testing.assert_allclose(pinv(np.diag([2.0, 0.0])), np.diag([0.5, 0.0]))
    q, _ = np.linalg.qr(gaussian_matrix(6, 3, 4))
    np.testing.assert_allclose(pinv(q), q.T, atol=1e-12)
    a = gaussian_matrix(6, 4, 9)
    np.testing.assert_allclose(pinv(a) @ a, np.eye(4), atol=1e-10)
    np.testing.assert_allclose(pinv(a), np.linalg.pinv(a), atol=1e-10)


def test_pinv_twice_recovers_matrix():
    a = gaussian_matrix(7, 5, 3)
    np.testing.assert_allclose(pinv(pinv(a)), a, atol=1e-8 * spectral_norm(a))


def test_pinv_threshold_validation():
    with pytest.raises(ParameterError):
        pinv(np.eye(2), threshold=0.0)


# ---- coefficient solves ----


@pytest.mark.parametrize("kind", ["back-substitution", "truncated-pseudoinverse", "tikhonov"])
def test_coeff_solve_identity(kind):
    t = stabilized_coeff_solve(np.eye(2), np.array([[1.0], [2.0]]), SolveStrategy(kind=kind))
    np.testing.assert_allclose(t, [[1.0], [2.0]], atol=1e-12)


def test_coeff_solve_consistent_zero_pivot():
    t = stabilized_coeff_solve(np.diag([1.0, 0.0]), np.array([[1.0], [0.0]]))
    np.testing.assert_allclose(t, [[1.0], [0.0]])


def test_back_substitution_inconsistent_zero_pivot_raises():
    with pytest.raises(SingularityError) as info:
        back_substitute(np.diag([1.0, 0.0]), np.array([[1.0], [1.0]]))
    assert info.value.index == 1


def test_truncated_pinv_drops_tiny_direction():
    rng = np.random.default_rng(0)
    s11 = np.array([[1.0, 0.0], [0.0, 1e-14]])
    s12 = rng.standard_normal((2, 3))
    t = stabilized_coeff_solve(s11, s12, SolveStrategy(kind="truncated-pseudoinverse", threshold=1e-12))
    np.testing.assert_array_equal(t[1], 0.0)
    # oracle: least squares restricted to the retained direction
    oracle = np.zeros_like(t)
    oracle[0] = s12[0]
    assert np.linalg.norm(s11 @ t - s12) == pytest.approx(np.linalg.norm(s11 @ oracle - s12), rel=1e-10)


def test_tikhonov_matches_regularized_normal_equations():
    rng = np.random.default_rng(3)
    s11 = np.triu(rng.standard_normal((5, 5))) + 3 * np.eye(5)
    s12 = rng.standard_normal((5, 4))
    lam = 0.3
    t = stabilized_coeff_solve(s11, s12, SolveStrategy(kind="tikhonov", lam=lam))
    oracle = np.linalg.solve(s11.T @ s11 + lam**2 * np.eye(5), s11.T @ s12)
    np.testing.assert_allclose(t, oracle, atol=1e-10)


def test_back_substitution_matches_triangular_solve():
    rng = np.random.default_rng(4)
    s11 = np.triu(rng.standard_normal((6, 6))) + 4 * np.eye(6)
    s12 = rng.standard_normal((6, 3))
    np.testing.assert_allclose(stabilized_coeff_solve(s11, s12), np.linalg.solve(s11, s12), atol=1e-12)


def test_escalation_on_ill_conditioned_triangle():
    s11 = np.diag([1.0, 1e-11])
    assert triangular_condition(s11) == pytest.approx(1e11)
    assert solve_escalates(s11)
    assert not solve_escalates(s11, SolveStrategy(escalate=False))
    assert not solve_escalates(np.eye(3))


def test_coeff_solve_validation():
    with pytest.raises(ParameterError):
        SolveStrategy(kind="magic")
    with pytest.raises(ParameterError):
        SolveStrategy(threshold=2.0)
    with pytest.raises(ParameterError):
        SolveStrategy(lam=-1.0)
    with pytest.raises((InputError, ParameterError)):
        stabilized_coeff_solve(np.ones((2, 2)), np.ones((2, 1)))
    with pytest.raises((InputError, ParameterError)):
        stabilized_coeff_solve(np.eye(2), np.ones((3, 1)))


def test_convergence_error_is_arithmetic():
    assert issubclass(ConvergenceError, ArithmeticError)


# ---- orth_rows ----


def test_orth_rows_diagonal():
    q = orth_rows(np.array([[2.0, 0.0], [0.0, 3.0]]))
    # the rows of I_2, in pivot order
    np.testing.assert_allclose(np.abs(q), [[0, 1], [1, 0]], atol=1e-15)


def test_orth_rows_duplicate_rows_shrink():
    y = np.array([[1.0, 2.0, 3.0], [1.0, 2.0, 3.0], [0.0, 1.0, 0.0]])
    q = orth_rows(y)
    assert q.shape[0] <= 3
    np.testing.assert_allclose(q @ q.T, np.eye(q.shape[0]), atol=1e-12)
    assert q.shape[0] == 2


def test_orth_rows_spans_row_space():
    y = gaussian_matrix(5, 20, 8)
    q = orth_rows(y)
    assert np.linalg.norm(y - y @ q.T @ q) <= 1e-10


def test_orth_rows_tol_zero_keeps_all():
    y = np.vstack([np.ones((1, 4)), np.ones((1, 4))])
    assert orth_rows(y, tol=0.0).shape == (2, 4)


# ---- random matrices ----


def test_gaussian_matrix_reproducible():
    np.testing.assert_array_equal(gaussian_matrix(4, 3, 9), gaussian_matrix(4, 3, 9))
    assert not np.array_equal(gaussian_matrix(4, 3, 9), gaussian_matrix(4, 3, 10))


def test_gaussian_matrix_moments():
    x = gaussian_matrix(100, 100, 1)
    assert abs(x.mean()) < 0.05
    assert abs(x.var() - 1.0) < 0.1


def test_seed_validation_and_derivation():
    with pytest.raises(ParameterError):
        generator(-1)
    with pytest.raises(ParameterError):
        generator(1.5)
    assert derive_seed(3, 0) != derive_seed(3, 1)
    assert derive_seed(3, 0) == derive_seed(3, 0)
