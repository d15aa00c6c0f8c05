"""Command-line front end for density evaluation, tabulation, verification,
the threshold-combining application, and sampling.

Exit codes are stable and documented:

* 0 success
* 1 verification suite failure
* 2 argument parsing or validation error
* 3 unsupported partition shape (the diagnostic names the nearest
  supported reshaping)
* 4 numeric non-convergence (the diagnostic reports the achieved error)

All tabular output is CSV with ``#``-prefixed metadata lines (command
line, version, seed, tolerance settings) so artifacts are reproducible
from their own headers.  Floats print with 17 significant digits, enough
to round-trip doubles exactly.  ``ORDSTAT_THREADS`` caps parallel grid
evaluation and sampling; results do not depend on it.
"""

import argparse
import math
import shlex
import sys
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from ordstat import __version__, exact_exp, generic_joint, verify
from ordstat.apps import MsGscConfig, msgsc_output_cdf, msgsc_stage_probability
from ordstat.distributions import Distribution, Exponential, HalfNormal
from ordstat.errors import (ConvergenceError, DivergentIntegralError,
                            DomainError, UnsupportedShapeError)
from ordstat.mc_oracle import SampleSpec, sample_partial_sums, thread_count
from ordstat.partition import Partition, match_theorem

__all__ = ["main", "RunConfig"]

EXIT_OK = 0
EXIT_VERIFY = 1
EXIT_USAGE = 2
EXIT_SHAPE = 3
EXIT_NUMERIC = 4

_COMMANDS = ("eval", "tabulate", "verify", "msgsc", "sample")


@dataclass(frozen=True)
class RunConfig:
    """Validated invocation record shared by the subcommand handlers."""

    command: str
    dist_spec: str
    grid: tuple
    output: str
    seed: int
    digits: int

    def __post_init__(self):
        if self.command not in _COMMANDS:
            raise DomainError(f"unknown command {self.command!r}")
        for axis in self.grid:
            lo, hi, n = axis
            if n < 2:
                raise DomainError("grid counts must be >= 2")
            if not hi > lo:
                raise DomainError("grid needs max > min")
        if self.digits < 1:
            raise DomainError("tolerance digits must be positive")


def _fmt(v):
    return format(float(v), ".17g")


def _parse_dist(text):
    name, _, arg = text.partition(":")
    name = name.strip().lower()
    try:
        value = float(arg) if arg else 1.0
    except ValueError:
        raise DomainError(f"bad distribution parameter in {text!r}")
    if name in ("exp", "exponential"):
        return Exponential(value)
    if name in ("halfnormal", "hnorm"):
        return HalfNormal(value)
    raise DomainError(f"unknown distribution {text!r}; expected "
                      "exp:<mean> or halfnormal:<sigma>")


def _parse_grid_axis(text):
    parts = text.split(":")
    if len(parts) != 3:
        raise DomainError(f"bad grid axis {text!r}; expected min:max:count")
    try:
        lo, hi, n = float(parts[0]), float(parts[1]), int(parts[2])
    except ValueError:
        raise DomainError(f"bad grid axis {text!r}; expected min:max:count")
    return lo, hi, n


def _parse_at(text, dim):
    vals = tuple(float(v) for v in text.split(","))
    if len(vals) != dim:
        raise DomainError(f"--at needs {dim} comma-separated value(s) for "
                          "this shape")
    return vals


def _meta_lines(argv, extra):
    lines = [f"# command: ordstat {shlex.join(argv)}",
             f"# version: {__version__}"]
    lines.extend(f"# {k}: {v}" for k, v in extra)
    return lines


def _write_text(path, text):
    if path == "-":
        sys.stdout.write(text)
    else:
        with open(path, "w") as fh:
            fh.write(text)


def _case_of(Ks, m):
    if m == Ks:
        return "d"
    if m == 1:
        return "d" if Ks == 2 else "a"
    if m == Ks - 1:
        return "c"
    return "b"


def _require(value, flag, context):
    if value is None:
        raise DomainError(f"{context} requires {flag}")
    return value


def _resolve_shape(args):
    """Selector flags -> (theorem id, K, Ks, m, swap)."""
    if args.partition:
        mt = match_theorem(Partition.parse(args.partition))
        return mt.id, mt.K, mt.Ks, mt.m, mt.swap
    tid = _require(args.theorem, "--theorem (or --partition)",
                   "shape selection")
    tid = tid.upper()
    if tid not in ("T1", "T2", "T3", "T4", "T5", "T6"):
        raise DomainError(f"unknown theorem {args.theorem!r}")
    K = _require(args.K, "--K", tid)
    if tid in ("T1", "T2", "T3"):
        Ks = K
    else:
        Ks = _require(args.Ks, "--Ks", tid)
    if tid in ("T1", "T4"):
        m = None
    elif tid == "T5":
        if args.case:
            case = args.case.lower()
            derived = {"a": 1, "c": Ks - 1, "d": Ks}.get(case)
            if args.m is not None:
                m = args.m
                if _case_of(Ks, m) != case:
                    raise DomainError(
                        f"--case {case} disagrees with m={m} at Ks={Ks} "
                        f"(that pair is case {_case_of(Ks, m)})")
            elif derived is None:
                raise DomainError("case b spans 2 <= m <= Ks-2; give --m")
            else:
                m = derived
        else:
            m = _require(args.m, "--m (or --case)", tid)
        tid = "T5" + _case_of(Ks, m)
    else:
        m = _require(args.m, "--m", tid)
    if args.case and not tid.startswith("T5"):
        raise DomainError("--case only applies to --theorem T5")
    return tid, K, Ks, m, False


def _evaluator(tid, K, Ks, m, dist, digits, method):
    """Bound density callable and its dimensionality for a resolved shape."""
    if method == "auto":
        method = "exact" if isinstance(dist, Exponential) else "generic"
    if method == "exact":
        if not isinstance(dist, Exponential):
            raise DomainError("the exact path covers the exponential "
                              "distribution only; use --method generic")
        gb = dist.gamma_bar
        if tid == "T1":
            return exact_exp.pdf_sum_all(K, gb), 1
        if tid == "T2":
            return exact_exp.jpdf_one_vs_rest_allK(K, m, gb), 2
        if tid == "T3":
            return exact_exp.jpdf_headsum_vs_tailsum_allK(K, m, gb), 2
        if tid == "T4":
            return exact_exp.pdf_gsc_sum(K, Ks, gb), 1
        if tid.startswith("T5"):
            return exact_exp.jpdf_one_vs_rest_bestKs(K, Ks, m, gb), 2
        return exact_exp.jpdf_headsum_vs_tailsum_bestKs(K, Ks, m, gb), 2
    if tid == "T1":
        return (lambda x: generic_joint.t1_pdf(dist, K, x, digits=digits)), 1
    if tid == "T2":
        return (lambda x, y:
                generic_joint.t2_jpdf(dist, K, m, x, y, digits=digits)), 2
    if tid == "T3":
        return (lambda x, y:
                generic_joint.t3_jpdf(dist, K, m, x, y, digits=digits)), 2
    if tid == "T4":
        return (lambda x:
                generic_joint.t4_pdf(dist, K, Ks, x, digits=digits)), 1
    if tid.startswith("T5"):
        return (lambda x, y:
                generic_joint.t5_jpdf(dist, K, Ks, m, x, y,
                                      digits=digits)), 2
    return (lambda x, y:
            generic_joint.t6_jpdf(dist, K, Ks, m, x, y, digits=digits)), 2


def _axis_points(axis):
    lo, hi, n = axis
    step = (hi - lo) / (n - 1)
    return [lo + i * step for i in range(n)]


def _grid_rows(fn, grid):
    if len(grid) == 1:
        points = [(x,) for x in _axis_points(grid[0])]
    else:
        xs, ys = _axis_points(grid[0]), _axis_points(grid[1])
        points = [(x, y) for x in xs for y in ys]
    workers = thread_count()
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            vals = list(pool.map(lambda p: fn(*p), points))
    else:
        vals = [fn(*p) for p in points]
    return [(*p, v) for p, v in zip(points, vals)]


def _csv(meta, header, rows):
    lines = list(meta)
    lines.append(",".join(header))
    lines.extend(",".join(_fmt(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def _cmd_eval(args, argv):
    dist = _parse_dist(args.dist)
    tid, K, Ks, m, swap = _resolve_shape(args)
    fn, dim = _evaluator(tid, K, Ks, m, dist, args.digits, args.method)
    at = _parse_at(_require(args.at, "--at", "eval"), dim)
    if swap:
        at = at[::-1]
    print(_fmt(fn(*at)))
    return EXIT_OK


def _cmd_tabulate(args, argv):
    dist = _parse_dist(args.dist)
    tid, K, Ks, m, swap = _resolve_shape(args)
    fn, dim = _evaluator(tid, K, Ks, m, dist, args.digits, args.method)
    grid = tuple(_parse_grid_axis(g) for g in args.grid or ())
    if len(grid) != dim:
        raise DomainError(f"shape {tid} needs {dim} --grid axis spec(s)")
    cfg = RunConfig("tabulate", args.dist, grid, args.output, 0, args.digits)
    eval_fn = fn if not swap else (lambda x, y: fn(y, x))
    rows = _grid_rows(eval_fn, grid)
    meta = _meta_lines(argv, [
        ("shape", tid), ("distribution", args.dist),
        ("grid", ";".join(f"{a[0]:g}:{a[1]:g}:{a[2]}" for a in grid)),
        ("digits", args.digits)])
    header = ("x", "pdf") if dim == 1 else ("x", "y", "pdf")
    _write_text(cfg.output, _csv(meta, header, rows))
    return EXIT_OK


def _cmd_verify(args, argv):
    report = verify.run_suites(seed=args.seed, quick=not args.full,
                               suites=args.suite or None, depth=args.depth)
    sys.stdout.write(verify.render_report(report))
    if args.json:
        _write_text(args.json, verify.report_json(report))
    return EXIT_OK if report["all_pass"] else EXIT_VERIFY


def _cmd_msgsc(args, argv):
    cfg = MsGscConfig(L=args.L, gamma_T=args.gamma_t,
                      gamma_bar=args.gamma_bar,
                      below_threshold=args.convention)
    if args.stage is not None:
        fn = lambda x: msgsc_stage_probability(cfg, x, args.stage)
        col = f"stage{args.stage}_probability"
    else:
        fn = lambda x: msgsc_output_cdf(cfg, x)
        col = "cdf"
    if args.at is not None:
        print(_fmt(fn(float(args.at))))
        return EXIT_OK
    grid = tuple(_parse_grid_axis(g) for g in args.grid or ())
    if len(grid) != 1:
        raise DomainError("msgsc tabulation needs exactly one --grid axis")
    run = RunConfig("msgsc", "exp:%g" % args.gamma_bar, grid, args.output,
                    0, 8)
    rows = _grid_rows(fn, grid)
    meta = _meta_lines(argv, [
        ("L", args.L), ("gamma_T", _fmt(args.gamma_t)),
        ("gamma_bar", _fmt(args.gamma_bar)),
        ("below_threshold", args.convention)])
    _write_text(run.output, _csv(meta, ("x", col), rows))
    return EXIT_OK


def _cmd_sample(args, argv):
    dist = _parse_dist(args.dist)
    if args.partition:
        part = Partition.parse(args.partition)
    else:
        K = _require(args.K, "--K (or --partition)", "sample")
        Ks = args.Ks if args.Ks is not None else K
        part = Partition(K, Ks, (tuple(range(1, Ks + 1)),))
    spec = SampleSpec(dist, part.K, part.Ks, part, args.n, args.seed)
    sums = sample_partial_sums(spec)
    cfg = RunConfig("sample", args.dist, (), args.output, args.seed, 8)
    meta = _meta_lines(argv, [
        ("distribution", args.dist), ("partition", part.format()),
        ("n_samples", args.n), ("seed", args.seed)])
    header = tuple(f"s{i + 1}" for i in range(sums.shape[1]))
    _write_text(cfg.output, _csv(meta, header, sums))
    return EXIT_OK


def _add_shape_flags(p):
    p.add_argument("--theorem", help="evaluator family T1..T6")
    p.add_argument("--case", choices=("a", "b", "c", "d"),
                   help="T5 reduction case (fixes m for a/c/d)")
    p.add_argument("--partition",
                   help="partition string K=..;Ks=..;groups=[..][..]")
    p.add_argument("--K", type=int, help="number of variables")
    p.add_argument("--Ks", type=int, help="number of selected (largest) ranks")
    p.add_argument("--m", type=int, help="rank or head length selector")
    p.add_argument("--dist", default="exp:1",
                   help="exp:<mean> or halfnormal:<sigma> (default exp:1)")
    p.add_argument("--method", choices=("auto", "exact", "generic"),
                   default="auto",
                   help="evaluation path (auto: exact for exponential)")
    p.add_argument("--digits", type=int, default=8,
                   help="accuracy target for numerical inversion")


def _build_parser():
    top = argparse.ArgumentParser(
        prog="ordstat",
        description="Distributions of partial sums of ordered variables.")
    top.add_argument("--version", action="version", version=__version__)
    sub = top.add_subparsers(dest="command", required=True)

    p = sub.add_parser("eval", help="evaluate one density value")
    _add_shape_flags(p)
    p.add_argument("--at", help="comma-separated evaluation point")
    p.set_defaults(handler=_cmd_eval)

    p = sub.add_parser("tabulate", help="evaluate a density on a grid")
    _add_shape_flags(p)
    p.add_argument("--grid", action="append",
                   help="axis spec min:max:count (repeat per axis)")
    p.add_argument("--output", default="-", help="CSV path (default stdout)")
    p.set_defaults(handler=_cmd_tabulate)

    p = sub.add_parser("verify", help="run the cross-validation suites")
    p.add_argument("--suite", action="append", choices=verify.SUITE_NAMES,
                   help="run only the named suite (repeatable)")
    p.add_argument("--depth", type=int,
                   help="restrict the identity suite to one nesting depth")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--full", action="store_true",
                   help="acceptance-size runs (default is the quick profile)")
    p.add_argument("--json", help="also write the JSON report here")
    p.set_defaults(handler=_cmd_verify)

    p = sub.add_parser("msgsc", help="threshold-combining output statistics")
    p.add_argument("--L", type=int, required=True, help="number of branches")
    p.add_argument("--gamma-t", type=float, required=True,
                   dest="gamma_t", help="combining threshold")
    p.add_argument("--gamma-bar", type=float, default=1.0, dest="gamma_bar",
                   help="mean branch value (default 1)")
    p.add_argument("--convention", choices=("sum", "outage"), default="sum",
                   help="below-threshold output convention")
    p.add_argument("--stage", type=int,
                   help="tabulate the probability of stopping at this stage")
    p.add_argument("--at", help="single evaluation point")
    p.add_argument("--grid", action="append",
                   help="axis spec min:max:count")
    p.add_argument("--output", default="-", help="CSV path (default stdout)")
    p.set_defaults(handler=_cmd_msgsc)

    p = sub.add_parser("sample", help="draw partial-sum samples")
    p.add_argument("--dist", default="exp:1")
    p.add_argument("--partition",
                   help="partition string K=..;Ks=..;groups=[..][..]")
    p.add_argument("--K", type=int)
    p.add_argument("--Ks", type=int)
    p.add_argument("--n", type=int, default=10000, help="number of rows")
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--output", default="-", help="CSV path (default stdout)")
    p.set_defaults(handler=_cmd_sample)
    return top


def main(argv=None):
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.handler(args, argv)
    except UnsupportedShapeError as exc:
        msg = str(exc)
        if exc.nearest:
            msg += f"; nearest supported: {exc.nearest}"
        print(f"error: {msg}", file=sys.stderr)
        return EXIT_SHAPE
    except (ConvergenceError, DivergentIntegralError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except (DomainError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
