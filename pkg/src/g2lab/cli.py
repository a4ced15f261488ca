"""Command line entry point ``g2lab``."""

import argparse
import logging
import sys

from . import selftest
from .config import ScenarioConfig, load_config
from .errors import G2LabError
from .scenario import EXIT_ABORT, EXIT_CHECK, EXIT_OK, EXPECTED_VERDICTS, run_scenario


def _print_checks(results):
    for r in results:
        print(r.line())
    return EXIT_OK if all(r.passed for r in results) else EXIT_CHECK


def _report_summary(result):
    rep = result.report
    if rep is None:
        return
    agg = rep.aggregate("max")
    print(f"surface {rep.name} in {rep.model}: {rep.n_samples} samples, {rep.n_degenerate} degenerate, "
          f"tol {rep.tol:.2e}")
    print("max " + ", ".join(f"{k}={v:.3e}" for k, v in agg.items()))
    print(f"verdict: {rep.verdict}")


def cmd_run(args):
    try:
        cfg = load_config(args.config).with_overrides(args.grid, args.step, args.out)
    except G2LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORT
    if cfg.output is None:
        cfg = cfg.with_overrides(out="g2lab_report.csv")
    result = run_scenario(cfg)
    _report_summary(result)
    _print_checks(result.checks)
    if result.error:
        print(f"error: {result.error}", file=sys.stderr)
    return result.exit_code


def cmd_theorem_check(args):
    cfg = ScenarioConfig(surface=args.case, model="cy_x_s1" if args.case == "holomorphic_graph" else "flat_r7",
                         expect_verdict=EXPECTED_VERDICTS[args.case], output=args.out)
    result = run_scenario(cfg)
    _report_summary(result)
    _print_checks(result.checks)
    if result.error:
        print(f"error: {result.error}", file=sys.stderr)
    return result.exit_code


def build_parser():
    p = argparse.ArgumentParser(prog="g2lab", description="Numerical checks for Gauss lifts of surfaces in G2 geometry.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("algebra-selftest", help="cross product, phi0 table and Lambda^2 splitting")
    sub.add_parser("grassmann-selftest", help="plane splitting and holomorphy criterion")
    run = sub.add_parser("run", help="run a JSON scenario")
    run.add_argument("config")
    run.add_argument("--grid", type=int)
    run.add_argument("--step", type=float)
    run.add_argument("--out")
    tc = sub.add_parser("theorem-check", help="run a built-in case and assert its verdict")
    tc.add_argument("--case", required=True, choices=sorted(EXPECTED_VERDICTS))
    tc.add_argument("--out")
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        if args.command == "algebra-selftest":
            return _print_checks(selftest.algebra_selftest())
        if args.command == "grassmann-selftest":
            return _print_checks(selftest.grassmann_selftest())
        if args.command == "run":
            return cmd_run(args)
        return cmd_theorem_check(args)
    except G2LabError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ABORT


if __name__ == "__main__":
    sys.exit(main())
