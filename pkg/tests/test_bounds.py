import numpy as np
import pytest

from conftest import oracle_sigma, rank_k
from lowrank import (
    SpectrumSpec,
    cur_id,
    frobenius_excess,
    gen_logspace,
    reconstruct_cur,
    verify_corollary,
    verify_lemma1,
    verify_lemma2,
)
from lowrank.bounds import row_error_via_f
from lowrank.errors import ValidationError


def parts(a, k):
    cur = cur_id(a, k)
    return cur, cur.tsid.col_id, cur.tsid.row_id


def test_lemma1_exact_rank_both_sides_vanish():
    a = rank_k(12, 15, 4, seed=1)
    cur, cid, _ = parts(a, 4)
    chk = verify_lemma1(a, cur, cid)
    assert chk.holds
    assert chk.lhs <= 1e-10 * np.linalg.norm(a, 2)
    assert chk.rhs <= 1e-10 * np.linalg.norm(a, 2)


def test_lemma1_full_rank_k_all_zero():
    a = np.random.default_rng(0).standard_normal((8, 6))
    cur, cid, _ = parts(a, 6)
    chk = verify_lemma1(a, cur, cid)
    assert chk.holds and chk.e_norm <= 1e-12 * np.linalg.norm(a, 2)


@pytest.mark.parametrize("seed", range(1, 6))
def test_lemma1_against_direct_residuals(seed):
    a = gen_logspace(SpectrumSpec(40, 70, -4, seed))
    cur, cid, _ = parts(a, 10)
    chk = verify_lemma1(a, cur, cid)
    e = a - a[:, cid.skeleton] @ cid.v().T
    et = a - cur.tsid.w @ cur.r
    assert chk.e_norm == pytest.approx(np.linalg.norm(e, 2), rel=1e-10)
    assert chk.etilde_norm == pytest.approx(np.linalg.norm(et, 2), rel=1e-10)
    assert chk.lhs == pytest.approx(np.linalg.norm(a - cur.c @ cur.u @ cur.r, 2), rel=1e-10)
    assert chk.holds


def test_lemma1_rejects_bad_w():
    a = gen_logspace(SpectrumSpec(20, 30, -3, 1))
    cur, cid, _ = parts(a, 5)
    with pytest.raises(ValidationError):
        verify_lemma1(a, cur, cid, row_basis_w=np.ones((19, 5)))
    with pytest.raises(ValidationError):
        verify_lemma1(a[:, :29], cur, cid)


def test_lemma2_exact_rank_row_error_vanishes():
    a = rank_k(10, 12, 3, seed=4)
    _, cid, rid = parts(a, 3)
    chk = verify_lemma2(a, cid, rid)
    assert chk.holds and chk.etilde_norm <= 1e-10 * np.linalg.norm(a, 2)


def test_lemma2_zero_t_selects_rows_of_e():
    # C with orthogonal, disjointly supported columns: the row ID has T = 0
    rng = np.random.default_rng(2)
    a = rng.standard_normal((6, 9)) * 1e-3
    a[0, 0], a[1, 1] = 10.0, 9.0
    a[0, 1] = a[1, 0] = 0.0
    a[2:, :2] = 0.0
    cur, cid, rid = parts(a, 2)
    np.testing.assert_array_equal(rid.t, 0.0)
    e = a - a[:, cid.skeleton] @ cid.v().T
    via_f = row_error_via_f(a, cid, rid)
    res = rid.pivots[2:]
    np.testing.assert_allclose(via_f[res], e[res], atol=1e-15)
    assert verify_lemma2(a, cid, rid).holds


@pytest.mark.parametrize("shape", [(40, 60), (80, 50), (100, 100)])
def test_lemma2_dual_paths_agree(shape):
    for seed in (1, 2):
        a = gen_logspace(SpectrumSpec(*shape, -4, seed))
        for k in (5, 20):
            _, cid, rid = parts(a, k)
            chk = verify_lemma2(a, cid, rid)
            assert chk.max_entry_gap <= 1e-9 * np.linalg.norm(a, 2)
            assert chk.holds and chk.bound_holds


def test_lemma2_rejects_inconsistent_shapes():
    a = gen_logspace(SpectrumSpec(20, 30, -3, 1))
    _, cid, rid = parts(a, 5)
    _, _, rid6 = parts(a, 6)
    with pytest.raises(ValidationError):
        verify_lemma2(a, cid, rid6)


def test_corollary_exact_rank():
    a = rank_k(14, 9, 2, seed=3)
    cur, cid, _ = parts(a, 2)
    chk = verify_corollary(a, cur, cid)
    assert chk.holds and chk.lhs <= 1e-10 * np.linalg.norm(a, 2)
    assert chk.bound <= 1e-9 * np.linalg.norm(a, 2)


@pytest.mark.parametrize("k", [5, 10, 20])
def test_corollary_logspace_sweep(k):
    for seed in range(1, 6):
        a = gen_logspace(SpectrumSpec(60, 90, -3, seed))
        cur, cid, rid = parts(a, k)
        chk = verify_corollary(a, cur, cid)
        assert chk.holds
        assert chk.t_norm == pytest.approx(np.linalg.norm(rid.t, 2), rel=1e-10)
        assert chk.ceiling == pytest.approx(2 * np.sqrt(k * (60 - k)))


def test_frobenius_excess_nonnegative_and_nan_for_exact():
    a = gen_logspace(SpectrumSpec(50, 50, -3, 1))
    sigma = oracle_sigma(a)
    for k in (5, 10, 20):
        eps = frobenius_excess(a, reconstruct_cur(cur_id(a, k)), sigma, k)
        assert np.isfinite(eps) and eps >= -1e-8
    b = rank_k(10, 10, 3, seed=0)
    assert np.isnan(frobenius_excess(b, reconstruct_cur(cur_id(b, 3)), oracle_sigma(b), 3))


def test_frobenius_excess_zero_for_truncated_svd():
    a = gen_logspace(SpectrumSpec(30, 40, -2, 2))
    u, s, vt = np.linalg.svd(a, full_matrices=False)
    approx = (u[:, :7] * s[:7]) @ vt[:7]
    assert abs(frobenius_excess(a, approx, s, 7)) <= 1e-10
