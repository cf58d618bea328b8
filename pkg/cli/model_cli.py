#!/usr/bin/env python3
"""
model subcommands: calibration, decay rates and the nondegeneracy determinant
"""

import logging

import numpy as np

from cli.common import echo_inputs
from cli.report import RunReport
from core.model import (
    cayley_form_standard, calibration_sweep, cy4_cayley_form, cy_normalization_holds, det_sweep,
    df0, deformation_fields, dyadic_radii, fiber_calibration_defect, find_signed_permutation,
    fit_decay_rate, literal_s2, s2_decay_rate, sample_fiber_point,
)

logger = logging.getLogger(__name__)

SYNTHETIC_RATES = (-2.0, -1.0, 0.0, 1.0)


def _fiber_points(rng: np.random.Generator, count: int = 20):
    points = []
    for _ in range(count):
        eps = complex(*rng.uniform(-2, 2, size=2))
        r = float(np.sqrt(abs(eps))) * float(rng.uniform(1.0, 5.0))
        points.append(sample_fiber_point(eps, r, complex(rng.normal()), float(rng.uniform(0, 2 * np.pi))))
    return points


def calibration_suite(config, samples: int = None) -> RunReport:
    m = config.section("model")
    samples = samples or m["samples"]
    tol = m["calibration_tol"]
    report = RunReport("model calibrate")
    phi0 = cayley_form_standard()
    sweep = calibration_sweep(phi0, samples, m["seed"], tol)
    report.check("calibration_inequality", True, sweep["bounded"])

    cy4 = cy4_cayley_form()
    defect = fiber_calibration_defect(cy4, _fiber_points(np.random.default_rng(m["seed"])))
    report.check("fiber_frames_calibrated", 0.0, defect, tolerance=tol)

    found = find_signed_permutation(cy4, phi0)
    report.check("cy4_matches_standard_form", True, found is not None)
    normalization = {n: cy_normalization_holds(n) for n in (1, 2, 3, 4)}
    report.check("cy_normalization", True, all(normalization.values()))
    report.results = {
        "sweep": sweep,
        "fiber_defect": defect,
        "permutation": [i + 1 for i in found[0]] if found else None,
        "signs": list(found[1]) if found else None,
        "cy_normalization": normalization,
        "standard_terms": len(phi0),
    }
    return report


def rates_suite(config) -> RunReport:
    m = config.section("model")
    report = RunReport("model rates")
    slope = s2_decay_rate(1.0, m["rate_window"])
    report.check("s2_rate", -1.0, slope, tolerance=0.01)

    radii = dyadic_radii(m["rate_window"])
    fitted = {g: fit_decay_rate(radii, 3.0 * radii ** g) for g in SYNTHETIC_RATES}
    for g, value in fitted.items():
        report.check(f"synthetic_rate_{g:g}", g, value, tolerance=1e-3)

    p = sample_fiber_point(1.0, 2.0)
    s1, s2 = deformation_fields(p)
    lift_s2, lift_s1 = df0(p.point, s2), df0(p.point, s1)
    literal = df0(p.point, literal_s2(p))
    report.check("s2_lifts_d_eps", 0.0, float(np.abs(lift_s2 - [1, 0]).max()), tolerance=1e-10)
    report.check("s1_lifts_d_w", 0.0, float(np.abs(lift_s1 - [0, 1]).max()), tolerance=1e-10)
    report.results = {"s2_slope": slope, "synthetic": {f"{g:g}": v for g, v in fitted.items()},
                      "literal_s2_lift": [literal[0], literal[1]],
                      "literal_s2_lifts": bool(np.allclose(literal, [1, 0]))}
    return report


def det_report(config, zeta: float, rmin: float, rmax: float, eps: complex = 1.0) -> RunReport:
    report = RunReport("model det")
    sweep = det_sweep(eps, rmin, rmax, zeta)
    report.results = sweep
    report.check("bounded_away_from_zero", True, sweep["C"] > 0)
    if zeta == -1.0:
        report.check("det_constant", 0.25, sweep["C"], tolerance=1e-9)
    return report


def handle_calibrate(args, config) -> RunReport:
    report = calibration_suite(config, args.samples)
    report.inputs = echo_inputs(args, "samples")
    return report


def handle_rates(args, config) -> RunReport:
    return rates_suite(config)


def handle_det(args, config) -> RunReport:
    rmin, rmax = config.get("model.det_radii")
    report = det_report(config, args.zeta, args.rmin or rmin, args.rmax or rmax, args.eps)
    report.inputs = echo_inputs(args, "zeta", "rmin", "rmax", "eps")
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser("model", help="Flat Spin(7) local model")
    sub = parser.add_subparsers(dest="action", required=True)

    calibrate = sub.add_parser("calibrate", help="Calibration inequality and Cayley fibres")
    calibrate.add_argument("--samples", type=int, help="Random frames")
    calibrate.set_defaults(handler=handle_calibrate)

    rates = sub.add_parser("rates", help="Decay rates of the deformation fields")
    rates.set_defaults(handler=handle_rates)

    det = sub.add_parser("det", help="Nondegeneracy determinant over a radius sweep")
    det.add_argument("--zeta", type=float, default=-1.0)
    det.add_argument("--rmin", type=float, help="Smallest radius (default from config)")
    det.add_argument("--rmax", type=float, help="Largest radius (default from config)")
    det.add_argument("--eps", type=float, default=1.0, help="Fibre A_eps")
    det.set_defaults(handler=handle_det)
