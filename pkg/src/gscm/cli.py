"""Command line interface.

    gscm run [CONFIG] --out sweep.csv [--seed-list 1,2,3]
    gscm validate-config CONFIG
    gscm sos-selftest [--quick]

Exit codes: 0 success, 1 configuration error, 2 runtime or numerical error.
"""

from __future__ import annotations

import argparse
import sys

from .experiment import (ConfigError, default_config, load_config, run_sweep,
                         write_csv)
from .selftest import run_selftest


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="gscm",
        description="Spatially consistent channel simulator: two-user drift sweep.")
    sub = parser.add_subparsers(dest="command", required=True)

    run_p = sub.add_parser("run", help="run the sweep and write the metrics CSV")
    run_p.add_argument("config", nargs="?", default=None,
                       help="config file (omit for built-in defaults)")
    run_p.add_argument("--out", required=True, help="output CSV path")
    run_p.add_argument("--seed-list", default=None,
                       help="comma-separated seeds overriding the config")
    run_p.add_argument("--scenario-table", default=None,
                       help="parameter file overriding the bundled scenario table")

    val_p = sub.add_parser("validate-config", help="parse and validate a config file")
    val_p.add_argument("config")

    st_p = sub.add_parser("sos-selftest",
                          help="statistical checks of the correlated field engine")
    st_p.add_argument("--quick", action="store_true", help="smaller sample sizes")
    return parser


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        if args.command == "run":
            config = load_config(args.config) if args.config else default_config()
            if args.seed_list is not None:
                try:
                    config.seeds = tuple(int(s) for s in args.seed_list.split(",") if s.strip())
                except ValueError:
                    raise ConfigError(f"invalid --seed-list '{args.seed_list}'") from None
                config.validate()
            if args.scenario_table is not None:
                config.scenario_table = args.scenario_table
            records = run_sweep(config)
            write_csv(records, args.out)
            print(f"wrote {len(records)} records to {args.out}")
            return 0
        if args.command == "validate-config":
            config = load_config(args.config)
            config.table()
            print(f"config OK: {len(config.seeds)} seed(s), "
                  f"{len(config.d_lambda_list_m)} d_lambda value(s), "
                  f"{config.track_count} track position(s)")
            return 0
        if args.command == "sos-selftest":
            return 0 if run_selftest(quick=args.quick) else 2
        raise AssertionError(f"unhandled command {args.command}")
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # noqa: BLE001 - surface everything as exit 2
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
