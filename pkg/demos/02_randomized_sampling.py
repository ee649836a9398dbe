"""
Randomized skeletons: same columns, a fraction of the work
==========================================================

A pivoted QR of the whole matrix is the expensive step of every
deterministic ID. A random sample Y = Omega A with a few more rows than
the target rank has nearly the same row space, so factoring Y instead
picks almost as good a skeleton. On slowly decaying spectra a couple of
power iterations sharpen the sample.
"""

import time
from statistics import median

from lowrank import (
    SketchConfig,
    SpectrumSpec,
    cur_id,
    gen_logspace,
    randomized_cur,
    randomized_id,
    reconstruct_cur,
    reconstruct_id,
    spectral_norm,
)


def timed(fn, repeats=3):
    times = []
    for _ in range(repeats):
        start = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - start)
    return out, median(times)


a = gen_logspace(SpectrumSpec(1000, 2000, -4, seed=1))
norm = spectral_norm(a)
k = 50

###############################################################################
# Deterministic versus Gaussian-sampled CUR-ID (p = 10 extra samples, q = 2
# power iterations).

det, t_det = timed(lambda: cur_id(a, k))
cfg = SketchConfig(oversampling=10, power=2, seed=0)
rnd, t_rnd = timed(lambda: randomized_cur(a, k, cfg))
print(f"deterministic CUR-ID: error {spectral_norm(a - reconstruct_cur(det)) / norm:.3e} in {1e3 * t_det:.0f} ms")
print(f"randomized CUR-ID:    error {spectral_norm(a - reconstruct_cur(rnd)) / norm:.3e} in {1e3 * t_rnd:.0f} ms")

###############################################################################
# The structured SRFT sampler uses 2k samples by default and applies in
# O(m n log m) time through an FFT.

srft = randomized_cur(a, k, SketchConfig(kind="srft", seed=0))
print(f"SRFT-sampled CUR-ID:  error {spectral_norm(a - reconstruct_cur(srft)) / norm:.3e}")

###############################################################################
# Power iterations matter when the spectrum decays slowly.

slow = gen_logspace(SpectrumSpec(100, 100, -1, seed=3))
slow_norm = spectral_norm(slow)
for q in (0, 1, 2, 3):
    errs = []
    for seed in range(11):
        cid = randomized_id(slow, 10, SketchConfig(power=q, seed=seed))
        errs.append(spectral_norm(slow - reconstruct_id(slow, cid)) / slow_norm)
    print(f"q={q}: median ID error {median(errs):.3f}")
