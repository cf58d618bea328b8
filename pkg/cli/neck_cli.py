#!/usr/bin/env python3
"""
neck subcommands: weighted norms, the fold-over model and the contraction scheme
"""

import logging

import numpy as np

from cli.common import echo_inputs, load_json
from cli.report import RunReport
from core.analysis import (
    ContractionProblem, FoldModel, NormRegime, WeightedNormSpec, annulus_norm,
    annulus_norm_quadrature, contraction_solve, fold_blowup_exponent, fold_onset_scale,
    fold_scale_exponent, fold_width, glue_error_bound, measured_fold_scale, neck_norm_slopes,
    norm_regime, random_contraction_problem,
)

logger = logging.getLogger(__name__)

# zeta = -1 against weights below, at and above it
TRICHOTOMY_CASES = ((-1.0, -1.5), (-1.0, -1.0), (-1.0, -0.5))
FOLD_S_DECADES = (1e-1, 1e-2, 1e-3, 1e-4)
FOLD_GAMMA = 2.0
ORACLE_F0 = 0.1
ORACLE_ROOT = (-1 + np.sqrt(0.6)) / 2


def neck_ts(config) -> np.ndarray:
    lo, hi = config.get("neck.t_exponents")
    return 2.0 ** -np.arange(lo, hi + 1)


def slope_checks(report: RunReport, fits: dict, tol: float, prefix: str) -> None:
    if fits["regime"] == NormRegime.LOG.value:
        expected = fits["expected_log_linear_slope"]
        report.check(f"{prefix}_log_linear", expected, fits["log_linear_slope"], tolerance=tol * abs(expected))
    elif fits["regime"] == NormRegime.POWER.value:
        expected = fits["expected_slope"]
        report.check(f"{prefix}_power_slope", expected, fits["log_slope"], tolerance=tol * abs(expected))
    else:
        report.check(f"{prefix}_bounded_slope", 0.0, fits["log_slope"], tolerance=tol)


def norms_suite(config) -> RunReport:
    n = config.section("neck")
    report = RunReport("neck norms")
    ts = neck_ts(config)
    tol = 2.5 * n["fit_tol"]
    for zeta, weight in TRICHOTOMY_CASES:
        fits = neck_norm_slopes(zeta, weight, n["p"], n["k"], ts)
        prefix = fits["regime"].lower()
        report.results[prefix] = fits
        slope_checks(report, fits, tol, prefix)

    rng = np.random.default_rng(0)
    worst = 0.0
    for _ in range(100):
        zeta, weight = rng.uniform(-2, 2, size=2)
        spec = WeightedNormSpec(float(rng.uniform(1.5, 4.0)), int(rng.integers(0, 3)), float(weight))
        t = float(rng.uniform(1e-3, 0.5))
        closed = annulus_norm(float(zeta), spec, t, 1.0)
        quad = annulus_norm_quadrature(float(zeta), spec, t, 1.0)
        worst = max(worst, abs(closed - quad) / abs(closed))
    report.results["quadrature_max_rel_error"] = worst
    report.check("quadrature_agreement", 0.0, worst, tolerance=n["quad_rel_tol"])
    return report


def fold_suite(config) -> RunReport:
    n = config.section("neck")
    report = RunReport("neck fold")
    ts = 10.0 ** -np.arange(4, 9)
    for alpha in n["fold_alphas"]:
        exponent = fold_scale_exponent(alpha, FOLD_GAMMA, FOLD_S_DECADES, n["fold_ratio"])
        expected = 1.0 / (1.0 - alpha)
        report.check(f"fold_scale_exponent_{alpha:g}", expected, exponent, tolerance=n["fit_tol"] * expected)
        blowup = fold_blowup_exponent(FoldModel(alpha, FOLD_GAMMA, 0.1), ts)
        report.check(f"blowup_slope_{alpha:g}", alpha - 1.0, blowup, tolerance=n["fit_tol"] * (1.0 - alpha))
        widths = [measured_fold_scale(FoldModel(alpha, FOLD_GAMMA, s), n["fold_ratio"])
                  / fold_width(FoldModel(alpha, FOLD_GAMMA, s)) for s in FOLD_S_DECADES]
        report.check(f"width_within_factor_2_{alpha:g}", True, all(0.5 <= w <= 2.0 for w in widths))
        report.results[f"{alpha:g}"] = {"exponent": exponent, "blowup_slope": blowup, "width_ratios": widths}
    return report


def contraction_suite(config) -> RunReport:
    c = config.section("contraction")
    report = RunReport("neck iterate")
    oracle = ContractionProblem.from_tensors([[1.0]], [[[1.0]]], [ORACLE_F0])
    result = contraction_solve(oracle, c["max_iter"], c["tol"], c["divergence_factor"])
    report.check("oracle_converged", True, result.converged)
    report.check("oracle_fixed_point", ORACLE_ROOT, float(result.v_inf[0]), tolerance=1e-6)
    ratios = result.decay_ratios()
    report.check("oracle_geometric_decay", True,
                 bool(ratios) and max(ratios[:-1] or ratios) <= oracle.smallness() + 1e-6)

    escaping = ContractionProblem.from_tensors([[1.0]], [[[1.0]]], [1.0])
    bad = contraction_solve(escaping, c["max_iter"], c["tol"], c["divergence_factor"])
    report.check("large_f0_flags_divergence", True, bad.diverged and not bad.converged)

    rng = np.random.default_rng(c["seed"])
    within = True
    for _ in range(c["random_instances"]):
        prob = random_contraction_problem(rng, int(rng.integers(1, 6)))
        res = contraction_solve(prob, c["max_iter"], c["tol"], c["divergence_factor"])
        within &= res.converged and res.within_bound
    report.check("random_instances_within_bound", True, within)
    report.results = {"oracle": result.to_dict(), "escaping": bad.to_dict(),
                      "random_instances": c["random_instances"]}
    return report


def handle_norms(args, config) -> RunReport:
    n = config.section("neck")
    p = args.p if args.p is not None else n["p"]
    k = args.k if args.k is not None else n["k"]
    spec = WeightedNormSpec(p, k, args.weight, args.t)
    closed = annulus_norm(args.zeta, spec, args.t, 1.0)
    quad = annulus_norm_quadrature(args.zeta, spec, args.t, 1.0, n["quad_rel_tol"])
    report = RunReport("neck norms", echo_inputs(args, "zeta", "weight", "t", "p", "k"))
    fits = neck_norm_slopes(args.zeta, args.weight, p, k, neck_ts(config))
    report.results = {"norm": closed, "quadrature": quad,
                      "regime": norm_regime(args.zeta, args.weight).value, "fits": fits}
    report.check("quadrature_agreement", closed, quad, tolerance=n["quad_rel_tol"] * abs(closed))
    slope_checks(report, fits, 2.5 * n["fit_tol"], "trend")
    return report


def handle_fold(args, config) -> RunReport:
    n = config.section("neck")
    m = FoldModel(args.alpha, args.gamma, args.s)
    report = RunReport("neck fold", echo_inputs(args, "alpha", "gamma", "s"))
    width = fold_width(m)
    measured = measured_fold_scale(m, n["fold_ratio"])
    exponent = fold_scale_exponent(args.alpha, args.gamma, FOLD_S_DECADES, n["fold_ratio"])
    blowup = fold_blowup_exponent(m, 10.0 ** -np.arange(4, 9))
    report.results = {"width": width, "onset_scale": fold_onset_scale(m), "measured_scale": measured,
                      "scale_exponent": exponent, "blowup_slope": blowup}
    expected = 1.0 / (1.0 - args.alpha)
    report.check("width_within_factor_2", True, 0.5 <= measured / width <= 2.0)
    report.check("scale_exponent", expected, exponent, tolerance=n["fit_tol"] * expected)
    report.check("blowup_slope", args.alpha - 1.0, blowup, tolerance=n["fit_tol"] * (1.0 - args.alpha))
    return report


def handle_iterate(args, config) -> RunReport:
    c = config.section("contraction")
    if not args.problem:
        report = contraction_suite(config)
        report.inputs = {"problem": None}
        return report
    prob = ContractionProblem.from_json(load_json(args.problem))
    result = contraction_solve(prob, c["max_iter"], c["tol"], c["divergence_factor"])
    report = RunReport("neck iterate", echo_inputs(args, "problem"))
    report.results = result.to_dict() | {"C_D": prob.C_D, "C_Q": prob.C_Q,
                                         "residual": prob.residual(result.v_inf)}
    if prob.smallness() < c["smallness_threshold"]:
        report.check("converged", True, result.converged)
        report.check("within_bound", True, result.within_bound)
    return report


def handle_bound(args, config) -> RunReport:
    value = glue_error_bound(args.cf, args.t, args.nu, args.gamma_max, args.gamma)
    report = RunReport("neck bound", echo_inputs(args, "cf", "t", "nu", "gamma_max", "gamma"))
    report.results = {"bound": value}
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser("neck", help="Neck analysis")
    sub = parser.add_subparsers(dest="action", required=True)

    norms = sub.add_parser("norms", help="Weighted annulus norm of r^zeta")
    norms.add_argument("--zeta", type=float, default=-1.0)
    norms.add_argument("--weight", type=float, default=-1.0)
    norms.add_argument("--t", type=float, default=1e-3)
    norms.add_argument("--p", type=float)
    norms.add_argument("--k", type=int)
    norms.set_defaults(handler=handle_norms)

    fold = sub.add_parser("fold", help="Fold-over instability of h = t - s|t|^alpha|r|^gamma")
    fold.add_argument("--alpha", type=float, default=0.5)
    fold.add_argument("--gamma", type=float, default=FOLD_GAMMA)
    fold.add_argument("--s", type=float, default=0.01)
    fold.set_defaults(handler=handle_fold)

    iterate = sub.add_parser("iterate", help="Contraction scheme D v' = -F0 - Q(v)")
    iterate.add_argument("--problem", help="Problem JSON {\"D\": [[...]], \"Q\": [[[...]]], \"F0\": [...]}")
    iterate.set_defaults(handler=handle_iterate)

    bound = sub.add_parser("bound", help="Gluing error bound C_F t^(nu (gamma_max - gamma))")
    bound.add_argument("--cf", type=float, default=1.0)
    bound.add_argument("--t", type=float, default=0.01)
    bound.add_argument("--nu", type=float, default=0.5)
    bound.add_argument("--gamma-max", dest="gamma_max", type=float, default=1.5)
    bound.add_argument("--gamma", type=float, default=1.1)
    bound.set_defaults(handler=handle_bound)
