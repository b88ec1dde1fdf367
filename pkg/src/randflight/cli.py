"""Command line entry point.

Exit codes: 0 success, 1 a verification check failed, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import json
import sys

from pydantic import ValidationError

from .checks import SUITES, format_table, run_suite
from .config import load_config
from .ensemble import THREADS_ENV, default_threads, run_simulate

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be >= 1")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="randflight",
        description="Simulate continuous-time conservative random walks and random flights.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sim = sub.add_parser("simulate", help="run a Monte Carlo ensemble described by a config file")
    sim.add_argument("--config", required=True, help="path to the JSON experiment config")
    sim.add_argument(
        "--threads",
        type=_positive_int,
        default=None,
        help=f"worker processes (default: ${THREADS_ENV}, else the CPU count)",
    )

    ver = sub.add_parser("verify", help="run an invariant suite and print a pass/fail table")
    ver.add_argument("--suite", required=True, choices=sorted(SUITES) + ["all"])
    ver.add_argument("--quick", action="store_true", help="10x fewer samples, widened tolerances")
    return parser


def _format_validation_error(err: ValidationError) -> str:
    lines = []
    for e in err.errors():
        field = ".".join(str(p) for p in e["loc"]) or "<config>"
        lines.append(f"  {field}: {e['msg']}")
    return "invalid config:\n" + "\n".join(lines)


def cmd_simulate(args) -> int:
    try:
        cfg = load_config(args.config)
    except ValidationError as err:
        print(_format_validation_error(err), file=sys.stderr)
        return EXIT_USAGE
    except (OSError, ValueError) as err:
        print(f"cannot read config {args.config}: {err}", file=sys.stderr)
        return EXIT_USAGE
    try:
        threads = args.threads or default_threads()
    except ValueError as err:
        print(str(err), file=sys.stderr)
        return EXIT_USAGE
    try:
        summary = run_simulate(cfg, threads)
    except OSError as err:
        print(f"cannot write outputs: {err}", file=sys.stderr)
        return EXIT_USAGE
    print(json.dumps({"outputs": cfg.outputs, "files": summary["files"]}, indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    results = run_suite(args.suite, quick=args.quick)
    print(format_table(results))
    failed = sum(not r.passed for r in results)
    print(f"\n{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if args.command == "simulate":
        return cmd_simulate(args)
    return cmd_verify(args)


if __name__ == "__main__":
    sys.exit(main())
