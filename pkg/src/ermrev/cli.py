"""Command-line front end: ``ermrev {erm,bounds,reproduce,search,emit-curve}``."""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from dataclasses import dataclass

from . import bounds, experiments
from .curve import format_curve, opt, quadrilateral, read_curve, triangular, truncated_equal_revenue
from .engine import DEFAULT_TOL, erm1_exact, erm2_exact, erm_mc
from .errors import ErmError

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


@dataclass
class Output:
    rows: list[tuple[str, float]]
    passed: bool | None = None


class _UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise _UsageError(f"{self.prog.split()[-1]}: {message}")


def _format(out: Output, fmt: str, digits: int = 9) -> str:
    if fmt == "json":
        obj = {label: value for label, value in out.rows}
        if out.passed is not None:
            obj["pass"] = out.passed
        return json.dumps(obj) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["label", "value"])
        for label, value in out.rows:
            w.writerow([label, repr(float(value))])
        if out.passed is not None:
            w.writerow(["pass", "true" if out.passed else "false"])
        return buf.getvalue()
    width = max([len(label) for label, _ in out.rows] + [4])
    lines = [f"{label:<{width}}  {value:.{digits}g}" for label, value in out.rows]
    if out.passed is not None:
        lines.append(f"{'pass':<{width}}  {'true' if out.passed else 'false'}")
    return "\n".join(lines) + "\n"


def _report_output(rep: experiments.ExperimentReport) -> Output:
    return Output(list(rep.computed), rep.pass_)


def _cmd_erm(args) -> Output:
    curve = read_curve(args.curve)
    # without --exact/--mc, n <= 2 is computed exactly
    if args.mc or (not args.exact and args.n > 2):
        if args.trials < 1:
            raise _UsageError("--trials must be at least 1")
        est = erm_mc(curve, args.n, args.trials, args.seed)
    else:
        if args.n == 1:
            est = erm1_exact(curve)
        elif args.n == 2:
            est = erm2_exact(curve, args.tol)
        else:
            raise _UsageError("exact mode supports --n 1 or --n 2; use --mc for larger n")
    rows = [("value", est.value), ("std_error", est.std_error), ("trials", est.trials),
            ("n_samples", est.n_samples), ("opt", opt(curve).opt)]
    return Output(rows)


def _cmd_bounds(args) -> Output:
    if args.minimize:
        q, value = bounds.minimize_combined()
        d, lval = bounds.optimize_delta()
        return Output([("q_star", q), ("bound", value), ("delta", d), ("bound_L", lval)],
                      value > bounds.THEOREM_CONSTANT)
    rows = [("delta", args.delta), ("gamma", args.delta / (1 + args.delta)), ("bound_L(delta)", bounds.bound_L(args.delta))]
    if args.qstar is not None:
        rep = bounds.combined_bound(args.qstar, args.delta)
        rows = [("q_star", rep.q_star)] + rows + [
            ("bound_R", rep.bound_R), ("bound_L", rep.bound_L), ("bound_B", rep.bound_B), ("combined", rep.combined)]
    return Output(rows)


def _cmd_reproduce(args, stderr) -> Output:
    if args.which == "prop1":
        rep = experiments.reproduce_prop1(args.tol)
    elif args.which == "prop3":
        rep = experiments.reproduce_prop3(args.tol)
    elif args.which == "switch":
        try:
            rep = experiments.find_switch_pair(args.tol)[2]
        except experiments.SearchFailed as exc:
            print(f"ermrev: {exc}", file=stderr)
            return Output([], False)
    else:
        rep = experiments.theorem_check(args.curves, args.seed, args.tol)
    return _report_output(rep)


def _cmd_search(args) -> Output:
    q, ratio = experiments.triangular_worst_case(args.grid, args.tol)
    if args.which == "triangular":
        return Output([("q_star", q), ("ratio", ratio)])
    rep = experiments.quadrilateral_improves(q)
    return _report_output(rep)


def _cmd_emit(args) -> Output | str:
    p = args.params
    need = {"triangular": 1, "truncated-equal-revenue": 1, "quadrilateral": 2}[args.name]
    if len(p) != need:
        raise _UsageError(f"{args.name} takes {need} parameter(s)")
    if args.name == "triangular":
        curve = triangular(p[0])
    elif args.name == "truncated-equal-revenue":
        curve = truncated_equal_revenue(p[0])
    else:
        curve = quadrilateral(p[0], p[1])
    text = format_curve(curve, f"{args.name} {' '.join(map(repr, p))}")
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
        return Output([("breakpoints", curve.n_pieces + 1)])
    return text


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--format", choices=["table", "csv", "json"], default="table")
    common.add_argument("--digits", type=int, default=9, help="significant digits in table output")

    parser = _Parser(prog="ermrev", description="Revenue of empirical revenue maximization from few samples.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("erm", parents=[common], help="expected revenue of ERM on a curve file")
    p.add_argument("--curve", required=True)
    p.add_argument("--n", type=int, default=2)
    mode = p.add_mutually_exclusive_group()
    mode.add_argument("--exact", action="store_true")
    mode.add_argument("--mc", action="store_true")
    p.add_argument("--trials", type=int, default=1_000_000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=_cmd_erm)

    p = sub.add_parser("bounds", parents=[common], help="evaluate or minimise the lower bounds")
    p.add_argument("--qstar", type=float)
    p.add_argument("--delta", type=float, default=bounds.DELTA)
    p.add_argument("--minimize", action="store_true")
    p.set_defaults(func=_cmd_bounds)

    p = sub.add_parser("reproduce", parents=[common], help="rerun a canned reproduction")
    p.add_argument("which", choices=["prop1", "prop3", "switch", "theorem"])
    p.add_argument("--curves", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=DEFAULT_TOL)
    p.set_defaults(func=lambda a: _cmd_reproduce(a, a.stderr))

    p = sub.add_parser("search", parents=[common], help="worst-case searches over curve families")
    p.add_argument("which", choices=["triangular", "quadrilateral"])
    p.add_argument("--grid", type=int, default=200)
    p.add_argument("--tol", type=float, default=1e-7)
    p.set_defaults(func=_cmd_search)

    p = sub.add_parser("emit-curve", parents=[common], help="write a named curve in the text format")
    p.add_argument("name", choices=["triangular", "truncated-equal-revenue", "quadrilateral"])
    p.add_argument("params", type=float, nargs="*")
    p.add_argument("--out")
    p.set_defaults(func=_cmd_emit)
    return parser


def run(argv: list[str] | None = None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        args = build_parser().parse_args(argv)
        args.stderr = stderr
        if getattr(args, "n", 1) < 1:
            raise _UsageError("--n must be at least 1")
        out = args.func(args)
    except _UsageError as exc:
        print(f"ermrev: usage error: {exc}", file=stderr)
        return EXIT_USAGE
    except (ErmError, OSError) as exc:
        print(f"ermrev: {type(exc).__name__}: {exc}", file=stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return int(exc.code or 0)
    if isinstance(out, str):
        stdout.write(out)
        return EXIT_OK
    stdout.write(_format(out, args.format, args.digits))
    return EXIT_FAILED if out.passed is False else EXIT_OK


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
