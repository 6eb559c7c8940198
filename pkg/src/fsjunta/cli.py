"""Command-line entry point: one subcommand per experiment kind.

Exit codes: 0 on success, 2 on configuration errors, 3 when the optional
wall-clock budget truncated the run (partial outputs are still written).
"""
from __future__ import annotations

import argparse
import sys

from .harness import (
    EXIT_BUDGET,
    EXIT_CONFIG,
    EXIT_OK,
    KINDS,
    ConfigError,
    ExperimentConfig,
    config_from_mapping,
    parse_config_file,
    run_experiment,
    validate_config,
)


def _add_common(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="key = value config file; flags override it")
    sub.add_argument("--seed", type=int, help="master seed (default 0)")
    sub.add_argument("--trials", type=int, help="trial count (default 100)")
    sub.add_argument("--out", help="CSV output path (summary goes to <out>.summary)")
    sub.add_argument("--delta", type=float,
                     help="confidence level for the reported interval (default 0.05)")
    sub.add_argument("--eps", type=float, help="accuracy parameter (default 0.1)")
    sub.add_argument("--k", type=int, help="junta size bound")
    sub.add_argument("--n", type=int, help="ambient variable count")
    sub.add_argument("--r", type=int, help="address-variable count of the instance families")
    sub.add_argument("--num-draws", type=int, dest="num_draws",
                     help="oracle draws per transcript or distribution test")
    sub.add_argument("--c", type=float, help="scenario distinguisher constant (default 8)")
    sub.add_argument("--target", help="target family for test-junta/learn-junta/fs-dist")
    sub.add_argument("--max-ex", type=int, dest="max_ex",
                     help="learner stage-2 example cap override")
    sub.add_argument("--max-seconds", type=float, dest="max_seconds",
                     help="wall-clock budget; exceeding it exits with code 3")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fsjunta",
        description="Run seeded experiments on the junta tester, the hybrid "
                    "learner, and the hard-instance distinguishers.")
    subs = parser.add_subparsers(dest="kind", required=True)
    for kind in KINDS:
        _add_common(subs.add_parser(kind, help=f"run a {kind} experiment"))
    return parser


def _assemble(args: argparse.Namespace) -> ExperimentConfig:
    mapping: dict = {}
    if args.config:
        mapping.update(parse_config_file(args.config))
    file_kind = mapping.get("kind")
    if file_kind is not None and file_kind != args.kind:
        raise ConfigError(
            f"config file kind {file_kind!r} conflicts with subcommand {args.kind!r}")
    mapping["kind"] = args.kind
    for key in ("seed", "trials", "out", "delta", "eps", "k", "n", "r",
                "num_draws", "c", "target", "max_ex", "max_seconds"):
        value = getattr(args, key)
        if value is not None:
            mapping[key] = value
    cfg = config_from_mapping(mapping)
    if cfg.out is None:
        cfg.out = f"{cfg.kind}.csv"
    return validate_config(cfg)


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        cfg = _assemble(args)
    except (ConfigError, OSError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    result = run_experiment(cfg)
    for key, value in result.summary.items():
        print(f"{key} = {value}")
    print(f"rows -> {result.out_path}")
    print(f"summary -> {result.summary_path}")
    return EXIT_BUDGET if result.truncated else EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
