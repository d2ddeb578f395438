"""Command-line entry point.

    bolab <experiment> [--config PATH] [--out DIR] [--seed N] [--quiet]

Experiments: verify | spectrum | beta-curve | evolve | interaction |
stability | molecule.  Exit codes: 0 success, 1 check failure,
2 configuration error, 3 runtime blow-up.
"""

from __future__ import annotations

import argparse
import sys

from .experiments import EXPERIMENT_NAMES, ConfigError, load_spec, run_experiment

EXIT_OK = 0
EXIT_CHECK_FAILURE = 1
EXIT_CONFIG_ERROR = 2
EXIT_BLOW_UP = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="bolab",
        description="Benjamin-Ono multisoliton laboratory experiments",
    )
    sub = parser.add_subparsers(dest="experiment", required=True)
    for name in EXPERIMENT_NAMES:
        p = sub.add_parser(name, help=f"run the {name} experiment")
        p.add_argument("--config", default=None, help="TOML experiment file")
        p.add_argument("--out", default=None, help="output directory override")
        p.add_argument("--seed", type=int, default=None, help="seed override")
        p.add_argument("--quiet", action="store_true", help="suppress check lines")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        spec = load_spec(args.config, name=args.experiment,
                         out_dir=args.out, seed=args.seed)
        report = run_experiment(spec)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR

    if not args.quiet:
        for check in report.checks:
            print(check.line())
        verdict = "PASSED" if report.passed else "FAILED"
        print(f"{report.experiment}: {verdict} "
              f"({sum(c.passed for c in report.checks)}/{len(report.checks)} checks, "
              f"{report.wall_clock_seconds:.1f}s)")
        for f in report.files:
            print(f"  wrote {f}")

    if report.blow_up:
        return EXIT_BLOW_UP
    return EXIT_OK if report.passed else EXIT_CHECK_FAILURE


if __name__ == "__main__":
    sys.exit(main())
