"""``pwcvx`` command line: check, trace, eval and examples."""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from pathlib import Path

from . import corpus, documents
from .certifier import Convex, CertifyOptions, Inconclusive, NotConvex, certify, verdict_to_json
from .compatibility import NotCovered, trace_segment
from .exact.numbers import format_rational, format_vector, parse_vector
from .pieces import active_indices, evaluate
from .polyhedra import PreconditionError
from .sampling import Counterexample, SampleConfig, SamplingError, midpoint_convexity_test

EXIT_CODES = {"convex": 0, "not_convex": 1, "inconclusive": 2}
INPUT_ERROR = 3
INAPPLICABLE = "theorem inapplicable: E not finite"


class InputError(Exception):
    pass


def _load(path: str):
    try:
        return documents.load(path)
    except documents.DocumentError as exc:
        raise InputError(f"{path}: {exc}") from None


def _point(text: str, n: int, flag: str):
    parts = [p for p in text.strip().strip("()[]").replace(" ", "").split(",") if p]
    try:
        x = parse_vector([Fraction(p) for p in parts])
    except (ValueError, ZeroDivisionError):
        raise InputError(f"{flag}: cannot parse {text!r} as a point") from None
    if len(x) != n:
        raise InputError(f"{flag}: point has {len(x)} coordinates, the function lives in R^{n}")
    return x


def _fmt_point(x) -> str:
    return "(" + ", ".join(format_vector(x)) + ")"


def _fmt_value(v) -> str:
    if isinstance(v, Fraction):
        return format_rational(v)
    if v == math.inf:
        return "inf"
    return format(v, ".17g")


# -- check ----------------------------------------------------------------------


def _crosscheck(f, args) -> dict:
    try:
        res = midpoint_convexity_test(f, SampleConfig(n_samples=args.samples, seed=args.seed))
    except SamplingError as exc:
        return {"result": "error", "message": str(exc)}
    if isinstance(res, Counterexample):
        return {"result": "counterexample", "counterexample": res.violation.to_json()}
    return {"result": "pass", "n_pairs": res.n_pairs}


def _print_report(f, verdict, report: dict, out) -> None:
    print(f"function: {f.name or '<unnamed>'} (n = {f.n}, {len(f.pieces)} pieces)", file=out)
    if f.infinite_E is not None:
        print(INAPPLICABLE, file=out)
    for w in report["warnings"]:
        print(f"WARNING: {w}", file=out)
    print(f"verdict: {verdict.tag}", file=out)
    if report["route"]:
        print(f"route: {report['route']}", file=out)
    if report["exactness"]:
        print(f"exactness: {report['exactness']}", file=out)
    print("hypotheses:", file=out)
    for h in report["hypothesis_log"]:
        ev = f" ({h['evidence']})" if h["evidence"] else ""
        print(f"  [{h['status']}] {h['hypothesis']}{ev}", file=out)
    if isinstance(verdict, Convex) and verdict.certificate.exceptional_used:
        pts = ", ".join(_fmt_point(p) for p in verdict.certificate.exceptional_used)
        print(f"exceptional points used: {pts}", file=out)
    if isinstance(verdict, NotConvex):
        v = verdict.counterexample
        print(f"witness: {_fmt_point(verdict.witness)}", file=out)
        print("counterexample:", file=out)
        print(f"  x = {_fmt_point(v.x)}", file=out)
        print(f"  y = {_fmt_point(v.y)}", file=out)
        print(f"  t = {format_rational(v.t)}", file=out)
        print(f"  f((1-t)x + ty) = {_fmt_value(v.lhs)} > {_fmt_value(v.rhs)} = (1-t)f(x) + t f(y)", file=out)
    if isinstance(verdict, Inconclusive):
        for r in verdict.reasons:
            print(f"reason: {r}", file=out)
    oc = report.get("oracle")
    if oc is not None:
        if oc["result"] == "pass":
            print(f"oracle cross-check: pass ({oc['n_pairs']} pairs)", file=out)
        elif oc["result"] == "counterexample":
            c = oc["counterexample"]
            xs, ys = (", ".join(f"{float(Fraction(v)):.6g}" for v in c[k]) for k in ("x", "y"))
            print(f"oracle cross-check: counterexample x ~ ({xs}), y ~ ({ys}), t = {c['t']}", file=out)
        else:
            print(f"oracle cross-check: {oc['message']}", file=out)


def cmd_check(args) -> int:
    f = _load(args.path)
    verdict = certify(f, CertifyOptions(route=args.route, seed=args.seed))
    report = verdict_to_json(verdict)
    report["warnings"] = []
    if f.infinite_E is not None:
        report["theorem_note"] = INAPPLICABLE
    report["oracle"] = None
    if not args.no_oracle_crosscheck:
        oc = _crosscheck(f, args)
        report["oracle"] = oc
        if isinstance(verdict, Convex) and oc["result"] == "counterexample":
            report["warnings"].append("certifier says convex but the sampling oracle found a counterexample")
    if args.json:
        print(json.dumps(report, indent=2))
    else:
        _print_report(f, verdict, report, sys.stdout)
    return EXIT_CODES[verdict.tag]


# -- trace / eval ---------------------------------------------------------------------


def cmd_trace(args) -> int:
    f = _load(args.path)
    x = _point(args.from_, f.n, "--from")
    y = _point(args.to, f.n, "--to")
    try:
        dec = trace_segment(f, x, y)
    except PreconditionError:
        raise InputError("segment endpoints must lie in dom f") from None
    if isinstance(dec, NotCovered):
        print(f"segment leaves the domain at t = {format_rational(dec.t)} (point {_fmt_point(dec.point)})")
        return 1
    print(f"{len(dec.piece_of_segment)} spans")
    for k, i in enumerate(dec.piece_of_segment):
        a, b = dec.breakpoints[k], dec.breakpoints[k + 1]
        ta, tb = format_rational(dec.params[k]), format_rational(dec.params[k + 1])
        print(f"  t in [{ta}, {tb}]: {_fmt_point(a)} -> {_fmt_point(b)}  piece {i + 1}")
    print("pieces: " + ",".join(str(i + 1) for i in dec.piece_of_segment))
    return 0


def cmd_eval(args) -> int:
    f = _load(args.path)
    x = _point(args.at, f.n, "--at")
    print(_fmt_value(evaluate(f, x)))
    act = active_indices(f, x)
    print("active: {" + ", ".join(str(i + 1) for i in act) + "}")
    return 0


# -- examples ---------------------------------------------------------------------------


def cmd_examples(args) -> int:
    if args.list:
        for name in corpus.names():
            print(f"{name:12s} {corpus.EXPECTED[name]:12s} {corpus.fixture_filename(name)}")
        return 0
    try:
        f = corpus.builtin(args.emit)
    except corpus.UnknownNameError as exc:
        raise InputError(exc.args[0]) from None
    text = documents.dumps(f)
    if args.out is None:
        sys.stdout.write(text)
    else:
        Path(args.out).write_text(text, encoding="utf-8")
    return 0


# -- entry point ----------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pwcvx", description="Convexity checks for piecewise-defined functions.")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="certify or refute convexity")
    p.add_argument("path")
    p.add_argument("--json", action="store_true", help="print the report as JSON")
    p.add_argument("--route", choices=("auto", "plq", "subdiff", "limits"), default="auto")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=10_000, help="pairs for the sampling cross-check")
    p.add_argument("--no-oracle-crosscheck", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("trace", help="decompose a segment into pieces")
    p.add_argument("path")
    p.add_argument("--from", dest="from_", required=True, metavar="POINT")
    p.add_argument("--to", required=True, metavar="POINT")
    p.set_defaults(func=cmd_trace)

    p = sub.add_parser("eval", help="evaluate f at a point")
    p.add_argument("path")
    p.add_argument("--at", required=True, metavar="POINT")
    p.set_defaults(func=cmd_eval)

    p = sub.add_parser("examples", help="list or write the builtin fixtures")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--list", action="store_true")
    g.add_argument("--emit", metavar="NAME")
    p.add_argument("--out", metavar="PATH")
    p.set_defaults(func=cmd_examples)
    return ap


_POINT_FLAGS = ("--at", "--from", "--to")


def _glue_points(argv: list[str]) -> list[str]:
    # argparse reads "-1,2" as an option; bind it to the flag explicitly
    out, k = [], 0
    while k < len(argv):
        a = argv[k]
        if a in _POINT_FLAGS and k + 1 < len(argv):
            out.append(f"{a}={argv[k + 1]}")
            k += 2
        else:
            out.append(a)
            k += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = sys.argv[1:] if argv is None else list(argv)
    try:
        args = parser.parse_args(_glue_points(argv))
    except SystemExit as exc:  # argparse usage errors are input errors
        return INPUT_ERROR if exc.code else 0
    if getattr(args, "samples", 1) <= 0:
        print("pwcvx: error: --samples must be positive", file=sys.stderr)
        return INPUT_ERROR
    try:
        return args.func(args)
    except InputError as exc:
        print(f"pwcvx: error: {exc}", file=sys.stderr)
        return INPUT_ERROR


if __name__ == "__main__":
    sys.exit(main())
