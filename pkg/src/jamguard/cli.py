"""Command-line entry point.

Subcommands map one-to-one onto the experiment campaigns plus a single-trial
inspector.  Results land in the output directory as a CSV and a metadata
sidecar JSON; summaries go to stderr.  Exit codes: 0 success, 1 validation
failure, 2 bad configuration or usage.
"""

import argparse
import json
import sys
from pathlib import Path

from .config import ConfigurationError, SystemConfig, load_config
from .experiments import (
    ResultTable,
    run_cdp_experiment,
    run_fap_experiment,
    run_se_vs_antennas,
    run_se_vs_jammer_power,
    run_validation_suite,
)
from .simulation import full_fidelity_trial


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="jamguard",
        description=(
            "Monte-Carlo simulator of a single-cell mmWave massive-MIMO uplink "
            "under a pilot-attacking jammer, with direction-based jamming "
            "detection and suppression."
        ),
    )
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH", help="JSON config file (powers in dBW)")
    common.add_argument("--out", metavar="DIR", default="results", help="output directory (default: results)")
    common.add_argument("--seed", type=int, help="master seed override")
    common.add_argument("--trials", type=int, help="trials per sweep point override")
    common.add_argument("--threads", type=int, default=1, help="parallel workers (default: 1)")

    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("cdp", parents=[common], help="detection probability vs jammer power")
    sub.add_parser("fap", parents=[common], help="false-alarm probability vs angular spread")
    sub.add_parser("se-jammer", parents=[common], help="sum spectral efficiency vs jammer power")
    sub.add_parser("se-antennas", parents=[common], help="sum spectral efficiency vs array size")
    sub.add_parser("validate", parents=[common], help="run the property-validation suite")
    single = sub.add_parser("single-trial", parents=[common], help="run one full trial")
    single.add_argument(
        "--dump-intermediates",
        action="store_true",
        help="write every intermediate set and metric to single_trial.json",
    )
    return parser


def _point_summaries(table: ResultTable) -> list[str]:
    """One line per sweep point, listing every arm's mean."""
    lines: list[str] = []
    param = None
    value = None
    parts: list[str] = []
    for row in table.rows:
        if (row.sweep_param, row.sweep_value) != (param, value):
            if parts:
                lines.append(f"{param}={value:g}: " + " ".join(parts))
            param, value, parts = row.sweep_param, row.sweep_value, []
        parts.append(f"{row.arm}={row.mean:.4g}")
    if parts:
        lines.append(f"{param}={value:g}: " + " ".join(parts))
    return lines


def _run_experiment(args: argparse.Namespace, config: SystemConfig) -> int:
    seed = args.seed if args.seed is not None else None
    overrides = {"seed": seed, "threads": args.threads}
    if args.trials is not None:
        overrides["trials"] = args.trials
    if args.command == "cdp":
        table = run_cdp_experiment(config, **overrides)
        stem = "cdp"
    elif args.command == "fap":
        table = run_fap_experiment(config, **overrides)
        stem = "fap"
    elif args.command == "se-jammer":
        table = run_se_vs_jammer_power(config, **overrides)
        stem = "se_jammer"
    else:
        table = run_se_vs_antennas(config, **overrides)
        stem = "se_antennas"
    csv_path, _ = table.write(args.out, stem)
    for line in _point_summaries(table):
        print(line, file=sys.stderr)
    print(f"wrote {csv_path}", file=sys.stderr)
    return 0


def _run_validate(args: argparse.Namespace, config: SystemConfig) -> int:
    table = run_validation_suite(config, seed=args.seed)
    csv_path, _ = table.write(args.out, "validate")
    failures = 0
    for row in table.rows:
        verdict = "PASS" if row.mean == 1.0 else "FAIL"
        failures += row.mean != 1.0
        print(f"{verdict} {row.arm} (slack {row.stderr:.3g})", file=sys.stderr)
    print(f"wrote {csv_path}", file=sys.stderr)
    return 0 if failures == 0 else 1


def _run_single_trial(args: argparse.Namespace, config: SystemConfig) -> int:
    seed = args.seed if args.seed is not None else config.seed
    result = full_fidelity_trial(config, seed)
    if args.dump_intermediates:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        path = out / "single_trial.json"
        path.write_text(json.dumps(result, indent=2) + "\n")
        print(f"wrote {path}", file=sys.stderr)
    print(
        f"jammer_detected={result['jammer_detected']} "
        f"threshold={result['threshold']:.4g} sum_se={result['sum_se']:.4g}",
        file=sys.stderr,
    )
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        config = load_config(args.config)
        if args.command == "validate":
            return _run_validate(args, config)
        if args.command == "single-trial":
            return _run_single_trial(args, config)
        return _run_experiment(args, config)
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
