"""Command-line front end.

Exit codes: 0 success, 1 a hard check failed, 2 usage error, 3 numerical error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from typing import Optional, Sequence

import numpy as np

from . import bounds as B
from . import rng as _rng
from .errors import EllZero, NumericalError, UsageError
from .exact import DEFAULT_CAP, conjecture_search, enumerate_exact
from .generators import KINDS, GeneratorSpec, generate
from .harness import cmd_figure3_data, cmd_verify, run_pipeline
from .io import format_matrix, read_matrix
from .sampling import SamplePlan, estimate_mean_entropy, sample_logminors

EXIT_OK, EXIT_ASSERT, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _dump(obj, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(obj, indent=2, sort_keys=True, default=_json_default) + "\n"
    raise UsageError(f"format {fmt!r} is not available for this subcommand")


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o).__name__}")


def _emit(args, text: str, summary: str) -> None:
    print(summary)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _scale(base: float) -> float:
    # divide natural-log quantities by this to express them in the chosen base
    if base == math.e:
        return 1.0
    if not base > 0 or base == 1:
        raise UsageError(f"log base must be positive and not 1, got {base}")
    return math.log(base)


def _parse_base(text: str) -> float:
    return math.e if text in ("e", "nat", "nats") else float(text)


def _rescale_estimate(d: dict, c: float) -> dict:
    if c == 1.0:
        return d
    for key in ("mean_logminor", "mean_entropy", "sample_std"):
        d[key] /= c
    for side in d["se_bounds"].values():
        for name in side:
            side[name] /= c
    return d


def _variance_bounds(n: int, k: int, kappa_hat: float, diagonal: bool, c: float) -> dict:
    """Variance and support-width bounds for the reported log-minor, in the output base."""
    bs = B.bound_set(B.BoundContext(n, k, kappa_hat, diagonal=diagonal))
    out = {
        "var_thm1": bs.var_thm1,
        "var_thm2": bs.var_thm2_quadratic,
        "var_thm2_table_variant": bs.var_thm2_table_variant,
        "var_thm3": bs.var_thm3,
    }
    out = {key: None if v is None else v / (c * c) for key, v in out.items()}
    out["support_width"] = bs.support_width / c
    return out


# subcommands


def cmd_gen(args) -> int:
    spec = GeneratorSpec(
        kind=args.kind, n=args.n, kappa=args.kappa, ell_split=args.ell, degrees_of_freedom=args.dof, seed=args.seed
    )
    m = generate(spec)
    text = format_matrix(m)
    summary = f"# {args.kind} n={m.n} kappa={m.condition_number:.10g} diagonal={m.is_diagonal} seed={args.seed}"
    if args.out:
        print(summary)
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_sample(args) -> int:
    m = read_matrix(args.matrix)
    plan = SamplePlan(k=args.k, q=args.q, seed=args.seed, with_replacement=not args.without_replacement)
    c = _scale(args.base)
    if args.dump_values:
        dist = sample_logminors(m, plan, workers=args.workers)
        with open(args.dump_values, "w", encoding="utf-8") as fh:
            fh.write("logminor\n")
            fh.writelines(f"{v / c!r}\n" for v in dist.values.tolist())
    report = estimate_mean_entropy(m, plan, kappa_hat=args.kappa_hat, workers=args.workers)
    d = _rescale_estimate(report.to_dict(), c)
    d["variance"] = d["sample_std"] ** 2
    d["bounds"] = _variance_bounds(m.n, plan.k, report.kappa_hat, report.diagonal, c)
    d["log_base"] = "e" if c == 1.0 else args.base
    summary = (
        f"# n={m.n} k={plan.k} q={plan.q}: S_Y={d['mean_logminor']:.6g} S_h={d['mean_entropy']:.6g} "
        f"se2(S_h)<={d['se_bounds']['entropy']['se2']:.3g}"
    )
    _emit(args, _dump(d, args.format), summary)
    return EXIT_OK


def cmd_exact(args) -> int:
    m = read_matrix(args.matrix)
    c = _scale(args.base)
    step = 100_000
    marks = {"next": step}

    def progress(done, total):
        if done >= marks["next"]:
            print(f"  {done}/{total} minors", file=sys.stderr)
            marks["next"] = (done // step + 1) * step

    s = enumerate_exact(m, args.k, cap=args.cap, progress=progress)
    d = s.to_dict()
    for key in ("mean", "min", "max"):
        d[key] /= c
    d["variance"] /= c * c
    d["kappa"] = m.condition_number
    d["bounds"] = _variance_bounds(m.n, args.k, m.condition_number, m.is_diagonal, c)
    d["log_base"] = "e" if c == 1.0 else args.base
    summary = f"# n={m.n} k={args.k} count={s.count}: mean={d['mean']:.6g} variance={d['variance']:.6g}"
    _emit(args, _dump(d, args.format), summary)
    return EXIT_OK


def _parse_grid(text: str) -> np.ndarray:
    try:
        start, stop, step = (float(x) for x in text.split(":"))
    except ValueError:
        raise UsageError(f"--r-grid wants start:stop:step, got {text!r}") from None
    if step <= 0 or stop < start:
        raise UsageError(f"bad r grid {text!r}")
    count = int(math.floor((stop - start) / step + 1e-9)) + 1
    return start + step * np.arange(count)


def cmd_bounds(args) -> int:
    ctx = B.BoundContext(args.n, args.k, args.kappa_hat, diagonal=args.diagonal, ell_of_m=args.ell, q=args.q)
    bs = B.bound_set(ctx)
    d = bs.as_dict()
    tails = []
    if args.r_grid:
        for r in _parse_grid(args.r_grid):
            r = float(r)
            row = {"r": r}
            if r > 0:
                row.update(bs.tails(r))
            else:
                row.update(
                    {
                        "tail_thm1": 1.0,
                        "tail_chebyshev_thm2_quadratic": 1.0,
                        "tail_chebyshev_thm2_table": 1.0,
                        "tail_chebyshev_thm3": 1.0 if ctx.diagonal else None,
                    }
                )
            tails.append(row)
        d["tails"] = tails
    summary = (
        f"# n={ctx.n} k={ctx.k} kappa_hat={ctx.kappa_hat}: var thm1={bs.var_thm1:.6g} "
        f"thm2={bs.var_thm2_quadratic:.6g} (table variant {bs.var_thm2_table_variant:.6g})"
        + (f" thm3={bs.var_thm3:.6g}" if bs.var_thm3 is not None else "")
    )
    if args.format == "csv":
        if not tails:
            raise UsageError("csv output needs --r-grid")
        keys = list(tails[0])
        lines = [",".join(keys)]
        lines += [",".join("" if row[k] is None else repr(row[k]) for k in keys) for row in tails]
        text = "\n".join(lines) + "\n"
    else:
        text = _dump(d)
    _emit(args, text, summary)
    return EXIT_OK


def cmd_plan(args) -> int:
    ctx = B.BoundContext(args.n, args.k, args.kappa_hat, diagonal=args.diagonal, ell_of_m=args.ell)
    q = B.plan_sample_size(ctx, args.target, args.metric, args.bound)
    value = B.metric_bound(ctx.with_q(q), args.metric, args.bound)
    d = {"n": ctx.n, "k": ctx.k, "kappa_hat": ctx.kappa_hat, "metric": args.metric, "bound": args.bound,
         "target": args.target, "q": q, "bound_at_q": value}
    _emit(args, _dump(d, args.format), f"# q={q} gives {args.metric} bound {value:.6g} <= {args.target}")
    return EXIT_OK


def cmd_conjecture(args) -> int:
    res = conjecture_search(
        args.n, args.k, args.kappa, args.trials, args.seed, spectrum=args.spectrum, conjugate=not args.no_conjugate
    )
    d = res.to_dict()
    verdict = "COUNTEREXAMPLE" if res.counterexample else "no counterexample"
    summary = (
        f"# {verdict}: best variance {res.best_variance:.6g} vs diagonal max "
        f"{res.diagonal_max:.6g} (ell={res.diagonal_argmax_ell}) over {res.trials} trials"
    )
    _emit(args, _dump(d, args.format), summary)
    return EXIT_ASSERT if res.counterexample else EXIT_OK


def cmd_verify_cli(args) -> int:
    report = cmd_verify(args.seed)
    outdir = args.out or "verify-output"
    os.makedirs(outdir, exist_ok=True)
    for name, text in report.figure_data.items():
        with open(os.path.join(outdir, name), "w", encoding="utf-8") as fh:
            fh.write(text)
    with open(os.path.join(outdir, "verify.json"), "w", encoding="utf-8") as fh:
        fh.write(_dump(report.to_dict()))
    for c in report.checks:
        if c.hard or not c.passed:
            print(c.line())
    for obs in report.observations:
        print(f"[{'yes' if obs['holds'] else 'no '}] k={obs['k']} {obs['claim']}")
    print(f"# {'all hard checks passed' if report.passed else f'{len(report.failures)} hard checks FAILED'}; "
          f"output in {outdir}/")
    return EXIT_OK if report.passed else EXIT_ASSERT


def cmd_figure_data(args) -> int:
    text = cmd_figure3_data(args.kappa_hat, args.ell, args.q_per_k)
    _emit(args, text, f"# bound sweeps: {text.count(chr(10)) - 1} rows")
    return EXIT_OK


def cmd_pipeline(args) -> int:
    m = read_matrix(args.matrix)
    try:
        res = run_pipeline(m, args.k, args.target, args.metric, args.bound, args.seed, args.kappa_hat, args.workers)
    except EllZero as exc:
        raise EllZero(
            f"{exc}. Rescale the matrix by a constant c != 1 so no extreme eigenvalue equals 1; "
            "rescaling shifts E[Y] by k*log(c) and leaves the variance unchanged."
        ) from None
    d = res.to_dict()
    c = _scale(args.base)
    est = _rescale_estimate(d["estimate"], c)
    est["variance"] = est["sample_std"] ** 2
    est["bounds"] = _variance_bounds(m.n, args.k, res.report.kappa_hat, res.report.diagonal, c)
    d["estimate"]["log_base"] = "e" if c == 1.0 else args.base
    est = d["estimate"]
    summary = (
        f"# planned q={res.q} ({res.metric} {res.bound_choice} bound {res.bound_at_q:.4g} <= {res.target}); "
        f"S_Y={est['mean_logminor']:.6g} S_h={est['mean_entropy']:.6g}"
    )
    _emit(args, _dump(d, args.format), summary)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=_rng.DEFAULT_SEED, help="64-bit seed (default %(default)s)")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", help="output path (directory for verify)")

    p = _Parser(prog="logminor", description="Log-minor sampling with error guarantees.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    g = sub.add_parser("gen", parents=[common], help="generate an example matrix")
    g.add_argument("--kind", choices=KINDS, required=True)
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--kappa", type=float, default=3.0)
    g.add_argument("--ell", type=int, help="number of eigenvalues at kappa (TwoLevelDiagonal)")
    g.add_argument("--dof", type=int, help="degrees of freedom (Wishart; default 2n)")
    g.set_defaults(func=cmd_gen)

    s = sub.add_parser("sample", parents=[common], help="Monte Carlo estimate of mean log-minor and entropy")
    s.add_argument("--matrix", required=True)
    s.add_argument("--k", type=int, required=True)
    s.add_argument("--q", type=int, required=True)
    s.add_argument("--kappa-hat", type=float)
    s.add_argument("--dump-values", help="write the sampled log-minors to this CSV")
    s.add_argument("--without-replacement", action="store_true")
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--base", type=_parse_base, default=math.e, help="log base for outputs (default e)")
    s.set_defaults(func=cmd_sample)

    e = sub.add_parser("exact", parents=[common], help="enumerate every principal minor")
    e.add_argument("--matrix", required=True)
    e.add_argument("--k", type=int, required=True)
    e.add_argument("--cap", type=int, default=DEFAULT_CAP)
    e.add_argument("--base", type=_parse_base, default=math.e)
    e.set_defaults(func=cmd_exact)

    def context_flags(sp, q=True):
        sp.add_argument("--n", type=int, required=True)
        sp.add_argument("--k", type=int, required=True)
        sp.add_argument("--kappa-hat", type=float, required=True)
        sp.add_argument("--ell", type=float)
        sp.add_argument("--diagonal", action="store_true")
        if q:
            sp.add_argument("--q", type=int)

    b = sub.add_parser("bounds", parents=[common], help="evaluate every bound")
    context_flags(b)
    b.add_argument("--r-grid", help="start:stop:step for tail bounds")
    b.set_defaults(func=cmd_bounds)

    pl = sub.add_parser("plan", parents=[common], help="smallest q meeting an accuracy target")
    context_flags(pl, q=False)
    pl.add_argument("--metric", choices=B.METRICS, default="se_logminor")
    pl.add_argument("--bound", choices=B.BOUND_CHOICES, default="thm2")
    pl.add_argument("--target", type=float, required=True)
    pl.set_defaults(func=cmd_plan)

    c = sub.add_parser("conjecture", parents=[common], help="search for non-diagonal variance maximizers")
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--k", type=int, required=True)
    c.add_argument("--kappa", type=float, default=3.0)
    c.add_argument("--trials", type=int, default=1000)
    c.add_argument("--spectrum", choices=("uniform", "vertex"), default="uniform")
    c.add_argument("--no-conjugate", action="store_true")
    c.set_defaults(func=cmd_conjecture)

    v = sub.add_parser("verify", parents=[common], help="reproduce the n=20 table and figure data")
    v.set_defaults(func=cmd_verify_cli)

    f = sub.add_parser("figure-data", parents=[common], help="standard-error / CV bound sweeps as CSV")
    f.add_argument("--kappa-hat", type=float, default=3.0)
    f.add_argument("--ell", type=float, default=1.0)
    f.add_argument("--q-per-k", type=int, default=2000)
    f.set_defaults(func=cmd_figure_data)

    pp = sub.add_parser("pipeline", parents=[common], help="plan q, sample, and report")
    pp.add_argument("--matrix", required=True)
    pp.add_argument("--k", type=int, required=True)
    pp.add_argument("--target", type=float, required=True)
    pp.add_argument("--metric", choices=B.METRICS, default="se_entropy")
    pp.add_argument("--bound", choices=B.BOUND_CHOICES, default="thm2")
    pp.add_argument("--kappa-hat", type=float)
    pp.add_argument("--workers", type=int, default=1)
    pp.add_argument("--base", type=_parse_base, default=math.e)
    pp.set_defaults(func=cmd_pipeline)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # argparse exits on --help and on bad flags; hand the code back instead
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return args.func(args)
    except NumericalError as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
