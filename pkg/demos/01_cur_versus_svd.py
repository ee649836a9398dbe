"""
How close do skeleton factorizations get to the SVD?
====================================================

A truncated SVD gives the best rank-k approximation, but its factors are
dense mixtures of the data. The column ID, the two-sided ID and CUR-ID
keep actual columns and rows instead. This script measures the price of
that interpretability on a matrix with a known, logspaced spectrum.
"""

import numpy as np

from lowrank import (
    SpectrumSpec,
    cur_id,
    gen_logspace,
    id_column,
    id_row,
    id_two_sided,
    reconstruct_cur,
    reconstruct_id,
    reconstruct_tsid,
    spectral_norm,
    svd,
)

# singular values fall from 1 to 1e-4 across the 200 available directions
a = gen_logspace(SpectrumSpec(m=200, n=600, b=-4, seed=1))
sigma = svd(a).sigma
print(f"A is {a.shape[0]}x{a.shape[1]}, sigma_1 = {sigma[0]:.3g}, sigma_200 = {sigma[-1]:.3g}")

###############################################################################
# Relative spectral error of each method. ``sigma[k] / sigma[0]`` is the
# optimum: nothing of rank k does better.

print(f"\n{'k':>4} {'optimal':>10} {'ID':>10} {'two-sided':>10} {'CUR-ID':>10}")
for k in range(10, 101, 15):
    norm = sigma[0]
    ident = spectral_norm(a - reconstruct_id(a, id_column(a, k))) / norm
    tsid = spectral_norm(a - reconstruct_tsid(a, id_two_sided(a, k))) / norm
    cur = spectral_norm(a - reconstruct_cur(cur_id(a, k))) / norm
    print(f"{k:>4} {sigma[k] / norm:>10.2e} {ident:>10.2e} {tsid:>10.2e} {cur:>10.2e}")

###############################################################################
# The one-sided and two-sided IDs have identical error: the second step is
# an exact ID of the k chosen columns. CUR-ID pays a little more because
# U is fitted to rows of A rather than to the coefficient matrix V.

k = 40
cur = cur_id(a, k)
print(f"\nCUR-ID at k={k}: C is {cur.c.shape}, U is {cur.u.shape}, R is {cur.r.shape}")
print("first chosen columns:", cur.col_pivots[:8])
print("first chosen rows:   ", cur.row_pivots[:8])
print("C really is a slice of A:", np.array_equal(cur.c, a[:, cur.col_pivots[:k]]))

###############################################################################
# Rows chosen from C alone versus a row ID of all of A. The skeleton path
# only looks at k columns, so its row error tends to be a little higher;
# nothing guarantees an ordering either way.

for k in (20, 60):
    tsid = id_two_sided(a, k)
    from_c = spectral_norm(a - tsid.w @ a[tsid.row_pivots[:k]]) / sigma[0]
    rid = id_row(a, k)
    direct = spectral_norm(a - rid.w() @ a[rid.skeleton]) / sigma[0]
    print(f"k={k}: row error with rows picked from C {from_c:.3e}, from a row ID of A {direct:.3e}")
