"""Command-line entry point: run experiments, run verification suites, run
the likelihood-ratio audit.

Exit codes: 0 success, 1 gate failure (a verify check, the audit, or a
numeric failure mid-run), 2 configuration or I/O error.
"""

from __future__ import annotations

import argparse
import sys

from .harness import (
    ConfigError,
    likelihood_ratio_audit,
    load_audit_config,
    load_config,
    run_experiment,
    theory_scale,
)
from .osmd import NumericError
from .verify import run_verify

__all__ = ["main"]


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="barlab",
        description="Bandit retention experiments and verification suites.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run a Monte Carlo experiment from a JSON config")
    run_p.add_argument("--config", required=True, help="path to the experiment config")
    run_p.add_argument("--seed", type=int, default=None, help="override the config seed")
    run_p.add_argument("--out", default=None, help="write the trial records CSV here")

    verify_p = sub.add_parser("verify", help="run a verification suite")
    verify_p.add_argument("target", choices=("kl", "osmd", "all"))
    verify_p.add_argument("--seed", type=int, default=0, help="randomized-check seed")

    audit_p = sub.add_parser("audit-lb", help="run the likelihood-ratio audit from a JSON config")
    audit_p.add_argument("--config", required=True, help="path to the audit config")

    return parser


def _cmd_run(args: argparse.Namespace) -> int:
    config = load_config(args.config)
    if args.seed is not None:
        from dataclasses import replace

        if not 0 <= args.seed < 2**64:
            raise ConfigError(f"--seed must be a 64-bit unsigned integer, got {args.seed}")
        config = replace(config, seed=args.seed)
    run = run_experiment(config, out_path=args.out)
    print(f"algorithm:       {config.algorithm}  (n={config.instance.n}, seed={config.seed})")
    for line in run.summary.format_lines():
        print(line)
    scale = theory_scale(config)
    if scale is not None:
        label, value = scale
        print(f"theory scale:    {label} = {value:.6g}  (reported, not asserted)")
    if args.out is not None:
        print(f"records written: {args.out}")
    return 0


def _cmd_verify(args: argparse.Namespace) -> int:
    results = run_verify(args.target, seed=args.seed)
    for result in results:
        print(result.line())
    failed = sum(1 for r in results if not r.passed)
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return 0 if failed == 0 else 1


def _cmd_audit(args: argparse.Namespace) -> int:
    kwargs = load_audit_config(args.config)
    result = likelihood_ratio_audit(**kwargs)
    for line in result.format_lines():
        print(line)
    return 0 if result.passed else 1


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            return _cmd_run(args)
        if args.command == "verify":
            return _cmd_verify(args)
        return _cmd_audit(args)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except NumericError as exc:
        print(f"numeric failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
