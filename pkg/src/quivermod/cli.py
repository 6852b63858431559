"""``quivermod check|count|verify <file>``.

Exit codes: 0 success, 1 verification failure, 2 usage/parse error,
3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from pathlib import Path

from .correspondence import (Instance, VerificationReport, count_points_both_sides, faulty_quotient_to_rep,
                             quotient_points, quotient_to_rep, rational_spot_check,
                             stable_framed_points, orbit_classes, verify_instance)
from .framed import DEFAULT_BUDGET, gauge_group_order
from .graded import bigraded_component, validate_algebra
from .instance_file import ParseError, load_instance
from .parallel import BudgetExceeded

EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_BUDGET = 0, 1, 2, 3


def _load(path):
    parsed = load_instance(path)
    return parsed, parsed.build_algebra()


def _instance(parsed, algebra, path) -> Instance:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        inst = Instance(algebra, parsed.dim_vector("d"), parsed.dim_vector("v"), nilpotent_only=parsed.nilpotent,
                        name=Path(path).name)
    for msg in inst.warnings:
        print(f"warning: {msg}", file=sys.stderr)
    return inst


def _write(report: VerificationReport, out) -> None:
    if out:
        Path(out).write_text(report.to_json())


def cmd_check(args) -> int:
    parsed, a = _load(args.file)
    print(f"algebra: {parsed.algebra} over {a.field}, dim {a.dim}")
    print("basis: " + " ".join(b.label for b in a.basis))
    verts = list(a.vertices)
    width = max(len(str(v)) for v in verts) + 2
    print("bigraded dims (row = source, column = target):")
    print(" " * width + "".join(str(v).rjust(width) for v in verts))
    for i in verts:
        print(str(i).rjust(width) + "".join(str(len(bigraded_component(a, i, j))).rjust(width) for j in verts))
    report = validate_algebra(a)
    print(report)
    return EXIT_OK if report.ok else EXIT_FAIL


def cmd_count(args) -> int:
    parsed, a = _load(args.file)
    inst = _instance(parsed, a, args.file)
    if not inst.field.is_finite:
        print("error: counting needs a finite field (field: F<p>)", file=sys.stderr)
        return EXIT_USAGE
    if args.side == "both":
        report = count_points_both_sides(inst, budget=args.budget, threads=args.threads)
        verdict = "AGREE" if report.counts_agree else "DISAGREE"
        print(f"rep: {report.count_rep_orbits}  gr: {report.count_gr}  {verdict}")
        print(f"  stable points {report.stable_points} / |G_v| {report.gauge_group_order} "
              f"= {report.count_rep_free}")
        _write(report, args.out)
        return EXIT_OK if report.counts_agree else EXIT_FAIL
    report = VerificationReport(inst)
    if args.side == "gr":
        report.count_gr = len(quotient_points(inst, args.budget, args.threads))
        print(f"gr: {report.count_gr}")
    else:
        framed = stable_framed_points(inst, args.budget, args.threads)
        report.stable_points = len(framed)
        report.gauge_group_order = gauge_group_order(inst.v, inst.field.order)
        report.count_rep_free = len(framed) // report.gauge_group_order
        report.count_rep_orbits = len(orbit_classes(framed, inst.module))
        print(f"rep: {report.count_rep_orbits}")
    _write(report, args.out)
    return EXIT_OK


def _print_failures(failures) -> None:
    for f in failures:
        print(json.dumps(f, sort_keys=True, default=str))


def cmd_verify(args) -> int:
    parsed, a = _load(args.file)
    inst = _instance(parsed, a, args.file)
    to_rep = faulty_quotient_to_rep if args.inject_fault else quotient_to_rep
    if inst.field.is_finite:
        report = verify_instance(inst, budget=args.budget, threads=args.threads, to_rep=to_rep)
        print(f"rep: {report.count_rep_orbits}  gr: {report.count_gr}  "
              f"{'AGREE' if report.counts_agree else 'DISAGREE'}")
    else:
        report = VerificationReport(inst)
        report.round_trip_failures = rational_spot_check(inst, samples=args.samples, seed=args.seed, to_rep=to_rep)
        report.spot_checks = args.samples
        print(f"spot checks: {args.samples} random points over {inst.field} (seed {args.seed})")
    print(f"round-trip failures: {len(report.round_trip_failures)}")
    _print_failures(report.round_trip_failures)
    _write(report, args.out)
    ok = report.bijection_ok
    print("OK" if ok else "FAILED")
    return EXIT_OK if ok else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="quivermod",
                                     description="Framed representations vs quotient-module Grassmannians.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("file", help="instance file")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="max enumeration candidates")
        p.add_argument("--threads", type=int, default=1, help="worker processes for enumeration")
        p.add_argument("--out", help="write the JSON report here")

    p = sub.add_parser("check", help="build and validate the algebra")
    p.add_argument("file")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("count", help="count points on one or both sides")
    common(p)
    p.add_argument("--side", choices=("rep", "gr", "both"), default="both")
    p.set_defaults(func=cmd_count)

    p = sub.add_parser("verify", help="exhaustive round trips (finite fields) or random spot checks (Q)")
    common(p)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--samples", type=int, default=100)
    p.add_argument("--inject-fault", action="store_true", help=argparse.SUPPRESS)
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceeded as exc:
        print(f"budget exceeded: search space {exc.size} > budget {exc.budget}; "
              f"rerun with --budget {exc.size}", file=sys.stderr)
        return EXIT_BUDGET
    except (ValueError, KeyError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
