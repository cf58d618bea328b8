#!/usr/bin/env python3
"""
Cayley Toolkit - numerical and algebraic checks for Cayley fibrations of Spin(7)
and G2 manifolds
Subcommands: quartic, k3, index, model, neck, tcs, verify-all, history
"""

import argparse
import logging
import sys
import time
from pathlib import Path
from typing import List, Optional

from cli import (
    history_cli, index_cli, k3_cli, model_cli, neck_cli, quartic_cli, tcs_cli, verify_cli,
)
from cli.report import RunReport
from data.report_store import ReportStore
from utils.config import ToolkitConfig
from utils.constants import APP_NAME, APP_VERSION, EXIT_CHECK_FAILED, EXIT_INPUT_ERROR, EXIT_OK, LOG_FORMAT, LOG_LEVEL

logger = logging.getLogger(__name__)

SUBCOMMANDS = (quartic_cli, k3_cli, index_cli, model_cli, neck_cli, tcs_cli, verify_cli, history_cli)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cayley", description=f"{APP_NAME} {APP_VERSION}")
    parser.add_argument("--config", help="Configuration JSON (default in the user config directory)")
    parser.add_argument("--out", help="Write the JSON report to this file")
    parser.add_argument("--json", action="store_true", help="Print the JSON report instead of a table")
    parser.add_argument("--tol-scale", dest="tol_scale", type=float, default=1.0,
                        help="Multiply every tolerance by this factor")
    parser.add_argument("--record", action="store_true", help="Store the report in the run history")
    parser.add_argument("--db", help="Run history database")
    parser.add_argument("--no-timing", dest="no_timing", action="store_true",
                        help="Report elapsed_ms as 0 for byte-identical reports")
    parser.add_argument("-v", "--verbose", action="store_true")
    parser.add_argument("--quiet", action="store_true")
    parser.add_argument("--version", action="version", version=f"{APP_NAME} {APP_VERSION}")

    subparsers = parser.add_subparsers(dest="command", required=True)
    for module in SUBCOMMANDS:
        module.register(subparsers)
    return parser


def setup_logging(verbose: bool, quiet: bool) -> None:
    level = logging.DEBUG if verbose else logging.WARNING if quiet else getattr(logging, LOG_LEVEL)
    logging.basicConfig(level=level, format=LOG_FORMAT, stream=sys.stderr, force=True)


def emit(report: RunReport, args) -> None:
    """Write the report to --out and print JSON or a table to stdout"""
    if args.out:
        Path(args.out).write_text(report.to_json() + "\n")
        logger.info(f"Report written to {args.out}")
    if args.json:
        print(report.to_json())
    else:
        formatter = getattr(args, "formatter", None)
        print(formatter(report) if formatter else report.table())


def record(report: RunReport, db: Optional[str]) -> None:
    store = ReportStore(db)
    changed = store.compare_to_latest(report)
    if changed:
        logger.warning(f"Checks changed since the last recorded '{report.command}': {', '.join(changed)}")
    store.record(report)


def run(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # --help and --version exit 0
        return EXIT_OK if e.code in (0, None) else EXIT_INPUT_ERROR

    setup_logging(args.verbose, args.quiet)
    try:
        config = ToolkitConfig(args.config)
        if args.tol_scale != 1.0:
            config.scale_tolerances(args.tol_scale)
        start = time.perf_counter()
        report = args.handler(args, config)
        report.elapsed_ms = 0 if args.no_timing else int((time.perf_counter() - start) * 1000)
    except (ValueError, KeyError, OSError) as e:
        logger.error(f"Input error: {e}")
        return EXIT_INPUT_ERROR
    except RuntimeError as e:
        logger.error(f"Run failed: {e}")
        return EXIT_CHECK_FAILED

    emit(report, args)
    if args.record:
        record(report, args.db)
    if not report.passed:
        logger.warning(f"{len(report.failed_checks())} check(s) failed: {', '.join(report.failed_checks())}")
        return EXIT_CHECK_FAILED
    return EXIT_OK


def main():
    """Main entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()
