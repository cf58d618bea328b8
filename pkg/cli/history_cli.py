#!/usr/bin/env python3
"""
history: recorded runs from the report store
"""

import logging

from tabulate import tabulate

from cli.common import echo_inputs
from cli.report import RunReport
from data.report_store import ReportStore
from utils.paths import get_runtime_info

logger = logging.getLogger(__name__)


def handle_history(args, config) -> RunReport:
    store = ReportStore(args.db)
    runs = store.history(args.limit, args.command_filter)
    report = RunReport("history", echo_inputs(args, "limit", "command_filter"))
    report.results = {"runs": runs, "locations": get_runtime_info() | {"database": store.db_path}}
    logger.debug(f"{len(runs)} runs listed from {store.db_path}")
    return report


def history_table(report: RunReport) -> str:
    runs = report.results.get("runs", [])
    if not runs:
        return "No recorded runs"
    rows = [[r["id"], r["command"], r["timestamp"], "PASS" if r["passed"] else "FAIL", r["elapsed_ms"],
             r["checks"]] for r in runs]
    return tabulate(rows, headers=["id", "command", "timestamp", "status", "ms", "checks"])


def register(subparsers) -> None:
    parser = subparsers.add_parser("history", help="List recorded runs")
    parser.add_argument("--limit", type=int, default=20)
    parser.add_argument("--command", dest="command_filter", help="Only runs of this command")
    parser.set_defaults(handler=handle_history, formatter=history_table)
