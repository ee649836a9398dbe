"""``lowrank`` command line: gen, factor, bench, verify.

Exit codes: 0 success, 1 a checked bound failed, 2 usage or parameter
error, 3 malformed input or inconsistent factors.
"""

import argparse
import json
import math
import sys
from pathlib import Path

import numpy as np

from . import bench as bench_mod
from .bounds import frobenius_excess, verify_corollary, verify_lemma1, verify_lemma2
from .core import SolveStrategy, pinv, singular_values, svd
from .errors import InputError, LowRankError, ParameterError, ParseError, ValidationError
from .factorize import (
    CurDecomposition,
    cur_id,
    error_report,
    id_column,
    id_two_sided,
    reconstruct_cur,
    reconstruct_id,
    reconstruct_tsid,
    storage_units,
)
from .io import read_matrix, read_matrix_market, write_binary, write_matrix_market
from .matgen import SpectrumSpec, gen_logspace, gen_sorensen_embree
from .sketch import SketchConfig, randomized_cur, randomized_svd

EXIT_OK, EXIT_CHECK_FAILED, EXIT_USAGE, EXIT_INPUT = 0, 1, 2, 3
FACTOR_METHODS = ("svd", "rsvd", "id", "tsid", "cur-id", "cur-id-rand", "cur-pinv")


class UsageError(LowRankError):
    pass


def _condition(a):
    sigma = singular_values(a)
    return float(sigma[0] / sigma[-1]) if sigma[-1] > 0 else math.inf


def _write(path, a, fmt="array"):
    if str(path).endswith(".bin"):
        write_binary(path, a)
    else:
        write_matrix_market(path, a, fmt)


def numerical_rank(a):
    sigma = singular_values(a)
    if sigma[0] == 0.0:
        return 1
    tol = max(a.shape) * np.finfo(float).eps * sigma[0]
    return max(1, int(np.count_nonzero(sigma > tol)))


def parse_rank(text, a):
    if text in ("full", "full-rank"):
        return numerical_rank(a)
    try:
        k = int(text)
    except ValueError:
        raise UsageError(f"--k must be an integer or 'full-rank', got {text!r}") from None
    if not 1 <= k <= min(a.shape):
        raise UsageError(f"--k {k} outside [1, {min(a.shape)}] for a {a.shape[0]}x{a.shape[1]} matrix")
    return k


def parse_ranks(text):
    """``5,10,20`` or ``start:stop:step`` (inclusive stop)."""
    try:
        if ":" in text:
            start, stop, step = (int(x) for x in text.split(":"))
            ranks = list(range(start, stop + 1, step))
        else:
            ranks = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise UsageError(f"bad rank list {text!r}") from None
    if not ranks or min(ranks) < 1:
        raise UsageError(f"bad rank list {text!r}")
    return sorted(set(ranks))


def _sketch_config(args, seed=None):
    return SketchConfig(
        kind=args.sketch,
        oversampling=args.p,
        power=args.q,
        seed=args.seed if seed is None else seed,
    )


def _strategy(args):
    return SolveStrategy(kind=args.solve, threshold=args.threshold, lam=args.lam)


def cmd_gen(args):
    if args.family == "logspace":
        a = gen_logspace(SpectrumSpec(args.m, args.n, args.b, args.seed))
        _write(args.output, a, "array")
    else:
        a = gen_sorensen_embree(args.variant, args.m, args.n, args.nnz, args.seed)
        _write(args.output, a, "coordinate")
    print(f"wrote {args.output}: {a.shape[0]}x{a.shape[1]}, condition number {_condition(a):.6g}")
    return EXIT_OK


def factor_matrix(a, method, k, strategy=SolveStrategy(), config=SketchConfig()):
    """Return ``(factors, approx, extra)``: named factor matrices, the product, verifier output."""
    extra = {}
    if method == "svd":
        dec = svd(a).truncate(k)
        factors = {"U": dec.u, "S": np.diag(dec.sigma), "V": dec.v}
        return factors, dec.matrix(), extra
    if method == "rsvd":
        dec = randomized_svd(a, k, config)
        factors = {"U": dec.u, "S": np.diag(dec.sigma), "V": dec.v}
        return factors, dec.matrix(), extra
    if method == "id":
        cid = id_column(a, k, strategy)
        extra["col_pivots"] = cid.pivots.tolist()
        return {"C": a[:, cid.skeleton], "V": cid.v()}, reconstruct_id(a, cid), extra
    if method == "tsid":
        tsid = id_two_sided(a, k, strategy)
        extra["col_pivots"] = tsid.col_pivots.tolist()
        extra["row_pivots"] = tsid.row_pivots.tolist()
        return {"W": tsid.w, "skel": tsid.skel, "V": tsid.v}, reconstruct_tsid(a, tsid), extra
    if method in ("cur-id", "cur-id-rand", "cur-pinv"):
        if method == "cur-id-rand":
            cur = randomized_cur(a, k, config, strategy)
        else:
            cur = cur_id(a, k, strategy)
        if method == "cur-pinv":
            cur = CurDecomposition(cur.c, pinv(cur.c) @ a @ pinv(cur.r), cur.r, cur.col_pivots, cur.row_pivots)
        else:
            col_id = cur.tsid.col_id
            extra["lemma1"] = vars(verify_lemma1(a, cur, col_id))
            extra["corollary"] = vars(verify_corollary(a, cur, col_id))
        extra["col_pivots"] = cur.col_pivots[:k].tolist()
        extra["row_pivots"] = cur.row_pivots[:k].tolist()
        return {"C": cur.c, "U": cur.u, "R": cur.r}, reconstruct_cur(cur), extra
    raise UsageError(f"unknown method {method!r}")


def _json_ready(obj):
    if isinstance(obj, dict):
        return {k: _json_ready(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_json_ready(v) for v in obj]
    if isinstance(obj, (np.bool_, bool)):
        return bool(obj)
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (float, np.floating)):
        x = float(obj)
        return x if math.isfinite(x) else None
    return obj


def _append_jsonl(path, record):
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(json.dumps(_json_ready(record), sort_keys=True) + "\n")


def cmd_factor(args):
    a = read_matrix(args.matrix)
    k = parse_rank(args.k, a)
    outdir = Path(args.outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    factors, approx, extra = factor_matrix(a, args.method, k, _strategy(args), _sketch_config(args))
    for name, mat in factors.items():
        write_matrix_market(outdir / f"{name}.mtx", mat)
    m, n = a.shape
    kind = {"id": "id", "tsid": "tsid"}.get(args.method, "cur")
    units = k * (m + n + 1) if args.method in ("svd", "rsvd") else storage_units(kind, m, n, k)
    record = {"matrix": str(args.matrix), "method": args.method, "k": k, "m": m, "n": n, "storage_units": units}
    record.update(error_report(a, approx).as_dict())
    record.update(extra)
    holds = all(extra[key]["holds"] for key in ("lemma1", "corollary") if key in extra)
    record["holds"] = holds
    report = Path(args.report) if args.report else outdir / "report.jsonl"
    _append_jsonl(report, record)
    print(
        f"{args.method} k={k}: rel_spectral={record['rel_spectral']:.3e} "
        f"rel_frob={record['rel_frob']:.3e} -> {', '.join(sorted(factors))} in {outdir}"
    )
    return EXIT_OK if holds else EXIT_CHECK_FAILED


def cmd_bench(args):
    source = bench_mod.parse_source(args.gen or args.matrix)
    methods = tuple(m.strip() for m in args.methods.split(",") if m.strip())
    plan = bench_mod.BenchPlan(
        source=source,
        methods=methods,
        ranks=tuple(parse_ranks(args.ranks)),
        trials=args.trials,
        base_seed=args.seed,
        sketch=_sketch_config(args),
        csv_path=args.csv,
        plot_path=args.plot,
        time_plot_path=args.time_plot,
    )
    records = bench_mod.run_plan(plan)
    errs = bench_mod.medians(records)
    times = bench_mod.medians(records, "elapsed_ms")
    print(f"{'method':<12} {'k':>5} {'median rel_2':>14} {'median ms':>11}")
    for method in methods:
        for k in plan.ranks:
            print(f"{method:<12} {k:>5} {errs[method][k]:>14.4e} {times[method][k]:>11.2f}")
    return EXIT_OK


def epsilon_table(a, ranks, method="cur-id", config=SketchConfig(), strategy=SolveStrategy()):
    """Rows of ``(k, eps, lemma1, lemma2, corollary)`` for each rank.

    ``eps`` is ``||A - CUR||_F^2 / ||A - A_k||_F^2 - 1``, NaN where the
    denominator is negligible.
    """
    sigma = singular_values(a)
    rows = []
    for k in ranks:
        if method == "cur-id-rand":
            cur = randomized_cur(a, k, config, strategy)
        else:
            cur = cur_id(a, k, strategy)
        col_id = cur.tsid.col_id
        rows.append(
            {
                "k": k,
                "epsilon": frobenius_excess(a, reconstruct_cur(cur), sigma, k),
                "lemma1": vars(verify_lemma1(a, cur, col_id)),
                "lemma2": vars(verify_lemma2(a, col_id, cur.tsid.row_id)),
                "corollary": vars(verify_corollary(a, cur, col_id)),
            }
        )
    return rows


def _verify_given_factors(a, paths):
    c, u, r = (read_matrix_market(p) for p in paths)
    m, n = a.shape
    k = u.shape[0]
    if c.shape != (m, k) or u.shape != (k, k) or r.shape != (k, n):
        raise ValidationError(f"A is {m}x{n} but C {c.shape}, U {u.shape}, R {r.shape}")
    sigma = singular_values(a)
    eps = frobenius_excess(a, c @ u @ r, sigma, k)
    return {"k": k, "epsilon": eps, "rel_spectral": error_report(a, c @ u @ r).rel_spectral}


def cmd_verify(args):
    sources = list(args.gen or [])
    if args.matrix:
        sources.append(args.matrix)
    if not sources:
        raise UsageError("verify needs a matrix path or at least one --gen spec")
    if args.factors and len(sources) != 1:
        raise UsageError("--factors takes exactly one matrix")
    ranks = parse_ranks(args.ranks)
    ok = True
    report_rows = []
    try:
        for text in sources:
            matrix_id, a = bench_mod.parse_source(text).build(args.seed)
            if args.factors:
                row = _verify_given_factors(a, args.factors)
                row["matrix"] = matrix_id
                report_rows.append(row)
                eps = row["epsilon"]
                print(f"{matrix_id} k={row['k']}: epsilon={'undefined' if math.isnan(eps) else f'{eps:.4e}'}")
                continue
            usable = [k for k in ranks if k <= min(a.shape)]
            print(f"# {matrix_id}")
            print(f"{'k':>5} {'epsilon':>12} {'lemma1':>7} {'lemma2':>7} {'corollary':>9}")
            for row in epsilon_table(a, usable, args.method, _sketch_config(args), _strategy(args)):
                checks = (row["lemma1"]["holds"], row["lemma2"]["holds"] and row["lemma2"]["bound_holds"], row["corollary"]["holds"])
                ok &= all(checks)
                eps = row["epsilon"]
                eps_text = "undefined" if math.isnan(eps) else f"{eps:.4e}"
                print(f"{row['k']:>5} {eps_text:>12} " + " ".join(f"{str(c).lower():>7}" for c in checks))
                row["matrix"] = matrix_id
                row["holds"] = all(checks)
                report_rows.append(row)
    finally:
        if args.report:
            with open(args.report, "w", encoding="utf-8") as fh:
                for row in report_rows:
                    fh.write(json.dumps(_json_ready(row), sort_keys=True) + "\n")
    return EXIT_OK if ok else EXIT_CHECK_FAILED


def _add_solver_args(p):
    p.add_argument("--solve", default="back-substitution", choices=("back-substitution", "truncated-pseudoinverse", "tikhonov"))
    p.add_argument("--threshold", type=float, default=1e-12, help="relative cutoff for the coefficient solve")
    p.add_argument("--lam", type=float, default=0.0, help="Tikhonov parameter")


def _add_sketch_args(p):
    p.add_argument("--p", type=int, default=10, help="Gaussian oversampling")
    p.add_argument("--q", type=int, default=0, help="power iterations")
    p.add_argument("--sketch", default="gaussian", choices=("gaussian", "srft"))
    p.add_argument("--seed", type=int, default=0)


def build_parser():
    parser = argparse.ArgumentParser(prog="lowrank", description="Interpolative and CUR decompositions of dense matrices.")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="generate a test matrix")
    fam = gen.add_subparsers(dest="family", required=True)
    logspace = fam.add_parser("logspace", help="U diag(d) V^T with logspaced d from 1 to 10^b")
    logspace.add_argument("--m", type=int, required=True)
    logspace.add_argument("--n", type=int, required=True)
    logspace.add_argument("--b", type=float, required=True)
    logspace.add_argument("--seed", type=int, default=0)
    logspace.add_argument("-o", "--output", required=True)
    se = fam.add_parser("se", help="sparse nonnegative sum of rank-one terms")
    se.add_argument("--variant", type=int, choices=(1, 2), required=True)
    se.add_argument("--m", type=int, required=True)
    se.add_argument("--n", type=int, required=True)
    se.add_argument("--nnz", type=int, default=None, help="nonzeros per vector (default 5%% of its length)")
    se.add_argument("--seed", type=int, default=0)
    se.add_argument("-o", "--output", required=True)

    factor = sub.add_parser("factor", help="factor a matrix file and report the error")
    factor.add_argument("matrix")
    factor.add_argument("--method", required=True, choices=FACTOR_METHODS)
    factor.add_argument("--k", required=True, help="rank, or 'full-rank' for the numerical rank")
    factor.add_argument("--outdir", default=".")
    factor.add_argument("--report", default=None, help="JSON-lines report (default OUTDIR/report.jsonl)")
    _add_sketch_args(factor)
    _add_solver_args(factor)

    bench = sub.add_parser("bench", help="median error and time over trials")
    src = bench.add_mutually_exclusive_group(required=True)
    src.add_argument("matrix", nargs="?")
    src.add_argument("--gen", help="generator spec, e.g. logspace:m=200,n=600,b=-4")
    bench.add_argument("--methods", default="svd,cur-id")
    bench.add_argument("--ranks", required=True, help="e.g. 10:100:10 or 5,10,20")
    bench.add_argument("--trials", type=int, default=5)
    bench.add_argument("--csv", default="results.csv")
    bench.add_argument("--plot", default="errors.svg")
    bench.add_argument("--time-plot", default="times.svg")
    _add_sketch_args(bench)

    verify = sub.add_parser("verify", help="epsilon(k) table and bound checks for CUR-ID")
    verify.add_argument("matrix", nargs="?")
    verify.add_argument("--gen", action="append", help="generator spec; may be repeated")
    verify.add_argument("--ranks", default="5,10,20")
    verify.add_argument("--method", default="cur-id", choices=("cur-id", "cur-id-rand"))
    verify.add_argument("--factors", nargs=3, metavar=("C", "U", "R"), help="check given CUR factor files")
    verify.add_argument("--report", default=None, help="JSON-lines output")
    _add_sketch_args(verify)
    _add_solver_args(verify)
    return parser


COMMANDS = {"gen": cmd_gen, "factor": cmd_factor, "bench": cmd_bench, "verify": cmd_verify}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, ParameterError) as exc:
        print(f"lowrank {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ParseError, ValidationError, InputError, OSError) as exc:
        print(f"lowrank {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
