#!/usr/bin/env python3
"""
verify-all: every reference suite in sequence, aggregated into one report
"""

import logging
from typing import Optional

from cli.index_cli import index_suite, load_spectrum
from cli.k3_cli import lattice_suite
from cli.model_cli import calibration_suite, det_report, rates_suite
from cli.neck_cli import contraction_suite, fold_suite, norms_suite
from cli.quartic_cli import quartic_census, symmetric_control
from cli.report import RunReport
from cli.tcs_cli import tcs_suite
from core.index import RateSpectrum

logger = logging.getLogger(__name__)


def verify_all(config, spectrum: Optional[RateSpectrum] = None) -> RunReport:
    """Run the acceptance suites; an injected spectrum only reaches the index suite"""
    rmin, rmax = config.get("model.det_radii")
    suites = [
        ("quartic", lambda: quartic_census(config)),
        ("control", lambda: symmetric_control(config)),
        ("index", lambda: index_suite(config, spectrum)),
        ("lattice", lambda: lattice_suite(config)),
        ("norms", lambda: norms_suite(config)),
        ("fold", lambda: fold_suite(config)),
        ("contraction", lambda: contraction_suite(config)),
        ("calibration", lambda: calibration_suite(config)),
        ("rates", lambda: rates_suite(config)),
        ("det", lambda: det_report(config, -1.0, rmin, rmax)),
        ("tcs", lambda: tcs_suite(config)),
    ]
    report = RunReport("verify-all")
    for name, suite in suites:
        logger.info(f"Running {name} suite")
        sub = suite()
        report.merge(sub, name)
        if not sub.passed:
            logger.warning(f"Suite {name} failed: {', '.join(sub.failed_checks())}")
    logger.info(f"verify-all: {len(report.checks) - len(report.failed_checks())}/{len(report.checks)} checks passed")
    return report


def handle_verify_all(args, config) -> RunReport:
    spectrum = load_spectrum(args.spectrum) if args.spectrum else None
    report = verify_all(config, spectrum)
    report.inputs = {"spectrum": args.spectrum}
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify-all", help="Run every reference suite")
    parser.add_argument("--spectrum", help="Inject a spectrum JSON file into the index suite")
    parser.set_defaults(handler=handle_verify_all)
