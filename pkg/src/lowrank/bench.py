"""Benchmark harness: run methods over ranks and trials, collect result records."""

import os
import re
import time
from collections import defaultdict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from statistics import median

import numpy as np

from .core import frobenius_norm, pinv, singular_values, spectral_norm, svd
from .errors import ParameterError
from .factorize import cur_id, id_column, id_two_sided, reconstruct_cur, reconstruct_id, reconstruct_tsid, storage_units
from .io import ResultRecord, read_matrix, write_results_csv
from .matgen import SpectrumSpec, gen_logspace, gen_sorensen_embree
from .sketch import SketchConfig, randomized_cur, randomized_svd

METHODS = ("svd", "rsvd", "id", "tsid", "cur-id", "cur-id-rand", "cur-pinv")
THREADS_ENV = "LOWRANK_THREADS"


@dataclass(frozen=True)
class MatrixSource:
    """A generated family (``logspace`` or ``se``) with parameters, or a file path."""

    kind: str
    params: dict = field(default_factory=dict)
    path: str | None = None

    def build(self, seed):
        """Return ``(matrix_id, matrix)``; generated families use ``seed``."""
        if self.kind == "file":
            return Path(self.path).stem, read_matrix(self.path)
        p = self.params
        if self.kind == "logspace":
            spec = SpectrumSpec(int(p["m"]), int(p["n"]), float(p["b"]), seed)
            return f"logspace-m{spec.m}-n{spec.n}-b{spec.b:g}-s{seed}", gen_logspace(spec)
        if self.kind == "se":
            variant, m, n = int(p.get("variant", 1)), int(p["m"]), int(p["n"])
            nnz = int(p["nnz"]) if "nnz" in p else None
            return f"se{variant}-m{m}-n{n}-s{seed}", gen_sorensen_embree(variant, m, n, nnz, seed)
        raise ParameterError(f"unknown matrix family {self.kind!r}")


def parse_source(text):
    """``logspace:m=200,n=600,b=-4``, ``se:variant=2,m=3000,n=60`` or a file path."""
    match = re.fullmatch(r"(logspace|se):(.*)", text)
    if not match:
        return MatrixSource("file", path=text)
    params = {}
    for item in filter(None, match.group(2).split(",")):
        key, sep, value = item.partition("=")
        if not sep:
            raise ParameterError(f"bad generator parameter {item!r} in {text!r}")
        params[key.strip()] = value.strip()
    required = {"logspace": ("m", "n", "b"), "se": ("m", "n")}[match.group(1)]
    missing = [key for key in required if key not in params]
    if missing:
        raise ParameterError(f"{match.group(1)} generator needs {', '.join(missing)}")
    return MatrixSource(match.group(1), params)


@dataclass(frozen=True)
class BenchPlan:
    source: MatrixSource
    methods: tuple
    ranks: tuple
    trials: int = 5
    base_seed: int = 0
    sketch: SketchConfig = SketchConfig()
    csv_path: str | None = None
    plot_path: str | None = None
    time_plot_path: str | None = None

    def __post_init__(self):
        unknown = [m for m in self.methods if m not in METHODS]
        if unknown:
            raise ParameterError(f"unknown methods {unknown}; choose from {METHODS}")
        if not self.ranks or list(self.ranks) != sorted(self.ranks) or self.ranks[0] < 1:
            raise ParameterError(f"ranks must be positive and ascending, got {self.ranks}")
        if self.trials < 1:
            raise ParameterError(f"trials must be >= 1, got {self.trials}")

    def trial_seed(self, i):
        return self.base_seed + i


class TrialMatrix:
    """A matrix together with lazily computed reference quantities."""

    def __init__(self, matrix_id, a):
        self.matrix_id = matrix_id
        self.a = a
        self._svd = None
        self._svd_ms = None
        self.norm_2 = spectral_norm(a)
        self.norm_f = frobenius_norm(a)

    def full_svd(self):
        if self._svd is None:
            start = time.perf_counter()
            self._svd = svd(self.a)
            self._svd_ms = 1e3 * (time.perf_counter() - start)
        return self._svd, self._svd_ms

    @property
    def sigma(self):
        return self.full_svd()[0].sigma if self._svd is not None else singular_values(self.a)


def run_method(trial, method, k, config):
    """Factor ``trial.a`` with ``method`` at rank ``k``; return ``(approx, elapsed_ms, storage)``."""
    a = trial.a
    m, n = a.shape
    start = time.perf_counter()
    if method == "svd":
        dec, elapsed = trial.full_svd()
        approx = dec.truncate(k).matrix()
        return approx, elapsed, k * (m + n + 1)
    if method == "rsvd":
        dec = randomized_svd(a, k, config)
        elapsed = 1e3 * (time.perf_counter() - start)
        return dec.matrix(), elapsed, k * (m + n + 1)
    if method == "id":
        cid = id_column(a, k)
        elapsed = 1e3 * (time.perf_counter() - start)
        return reconstruct_id(a, cid), elapsed, storage_units("id", m, n, k)
    if method == "tsid":
        tsid = id_two_sided(a, k)
        elapsed = 1e3 * (time.perf_counter() - start)
        return reconstruct_tsid(a, tsid), elapsed, storage_units("tsid", m, n, k)
    if method == "cur-id":
        cur = cur_id(a, k)
        elapsed = 1e3 * (time.perf_counter() - start)
        return reconstruct_cur(cur), elapsed, storage_units("cur", m, n, k)
    if method == "cur-id-rand":
        cur = randomized_cur(a, k, config)
        elapsed = 1e3 * (time.perf_counter() - start)
        return reconstruct_cur(cur), elapsed, storage_units("cur", m, n, k)
    if method == "cur-pinv":
        # CUR-ID's rows and columns, but the ill-conditioned U = pinv(C) A pinv(R)
        cur = cur_id(a, k)
        u = pinv(cur.c) @ a @ pinv(cur.r)
        elapsed = 1e3 * (time.perf_counter() - start)
        return cur.c @ u @ cur.r, elapsed, storage_units("cur", m, n, k)
    raise ParameterError(f"unknown method {method!r}")


def _run_trial(plan, i, sink):
    # records go straight into ``sink`` so a later failure keeps them
    seed = plan.trial_seed(i)
    matrix_id, a = plan.source.build(seed)
    trial = TrialMatrix(matrix_id, a)
    config = plan.sketch.with_seed(seed)
    for method in plan.methods:
        for k in plan.ranks:
            if k > min(a.shape):
                raise ParameterError(f"rank {k} exceeds min{a.shape}")
            approx, elapsed, units = run_method(trial, method, k, config)
            diff = a - approx
            rel_2 = spectral_norm(diff) / trial.norm_2 if trial.norm_2 else spectral_norm(diff)
            rel_f = frobenius_norm(diff) / trial.norm_f if trial.norm_f else frobenius_norm(diff)
            sink.append(ResultRecord(matrix_id, method, k, seed, rel_2, rel_f, elapsed, units))


def thread_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def run_plan(plan, threads=None):
    """Run every (method, rank) cell for each trial and return the records.

    Trial ``i`` uses seed ``base_seed + i`` for both the generated matrix
    and the random sketches. Records are sorted by (method, k, seed), so
    the output does not depend on the order trials finish in. Whatever
    finished is written to ``plan.csv_path`` even if a trial fails.
    """
    threads = thread_count() if threads is None else threads
    records = []
    try:
        if threads > 1 and plan.trials > 1:
            with ThreadPoolExecutor(max_workers=min(threads, plan.trials)) as pool:
                list(pool.map(lambda i: _run_trial(plan, i, records), range(plan.trials)))
        else:
            for i in range(plan.trials):
                _run_trial(plan, i, records)
    finally:
        order = {m: j for j, m in enumerate(plan.methods)}
        records.sort(key=lambda r: (order[r.method], r.k, r.trial_seed))
        if plan.csv_path:
            write_results_csv(plan.csv_path, records)
    if plan.plot_path or plan.time_plot_path:
        from .plot import write_error_plot, write_time_plot

        if plan.plot_path:
            write_error_plot(plan.plot_path, records)
        if plan.time_plot_path:
            write_time_plot(plan.time_plot_path, records)
    return records


def medians(records, attr="rel_spectral"):
    """``{method: {k: median of attr}}`` over trials."""
    cells = defaultdict(list)
    for rec in records:
        cells[(rec.method, rec.k)].append(getattr(rec, attr))
    out = defaultdict(dict)
    for (method, k), values in sorted(cells.items(), key=lambda item: (item[0][0], item[0][1])):
        out[method][k] = float(median(values))
    return dict(out)


def optimal_error(sigma, k):
    """Smallest relative spectral error of any rank-``k`` approximation."""
    sigma = np.asarray(sigma)
    return float(sigma[k] / sigma[0]) if k < sigma.size else 0.0
