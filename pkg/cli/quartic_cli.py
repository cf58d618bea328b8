#!/usr/bin/env python3
"""
quartic subcommands: singular fibres of the anticanonical pencil
"""

import logging

from cli.common import echo_inputs, load_json, parse_int_list
from cli.report import RunReport
from core.poly import Polynomial
from core.quartic import PencilProblem, SolveReport, weighted_quartic, structured_solve
from utils.constants import ACCEPT_RESIDUAL, QUARTIC_SINGULAR_COUNT, SYMMETRIC_WEIGHTS

logger = logging.getLogger(__name__)


def solve_with_config(problem: PencilProblem, config) -> SolveReport:
    q = config.section("quartic")
    return structured_solve(problem, tol=q["newton_tol"], max_iter=q["max_iter"],
                            rank_tol=q["rank_tol"], fiber_tol=q["fiber_tol"],
                            cluster_tol=q["cluster_tol"], locus_tol=q["locus_tol"],
                            workers=q["workers"])


def census_report(solve: SolveReport, command: str, expect_distinct: bool = True,
                  full: bool = True) -> RunReport:
    report = RunReport(command)
    results = solve.to_dict()
    if not full:
        results.pop("solutions")
    report.results = results
    report.check("count_matches_bezout", solve.bezout, solve.count)
    report.check("max_residual_below", True,
                 all(s.residuals < ACCEPT_RESIDUAL for s in solve.solutions))
    report.check("all_hessian_rank_3", True, all(s.hessian_rank == 3 for s in solve.solutions))
    report.check("distinct_fibers", expect_distinct, solve.all_distinct_fibers)
    return report


def quartic_census(config, full: bool = False) -> RunReport:
    weights = config.get("quartic.weights")
    solve = solve_with_config(PencilProblem(weighted_quartic(weights)), config)
    report = census_report(solve, "quartic solve", full=full)
    report.check("singular_count", QUARTIC_SINGULAR_COUNT, solve.count)
    return report


def symmetric_control(config) -> RunReport:
    solve = solve_with_config(PencilProblem(weighted_quartic(SYMMETRIC_WEIGHTS)), config)
    report = RunReport("quartic control")
    report.results = {"weights": list(SYMMETRIC_WEIGHTS), "count": solve.count,
                      "all_distinct_fibers": solve.all_distinct_fibers}
    report.check("symmetric_distinct_fibers", False, solve.all_distinct_fibers)
    return report


def handle_solve(args, config) -> RunReport:
    if args.poly:
        P = Polynomial.from_json(load_json(args.poly))
        problem = PencilProblem(P)
    else:
        weights = parse_int_list(args.weights) if args.weights else config.get("quartic.weights")
        if len(weights) != 3:
            raise ValueError(f"expected three weights, got {weights}")
        problem = PencilProblem(weighted_quartic(weights))
    if args.workers:
        config.set("quartic.workers", args.workers)
    if args.tol:
        config.set("quartic.newton_tol", args.tol)
    solve = solve_with_config(problem, config)
    report = census_report(solve, "quartic solve", full=not args.summary)
    report.inputs = echo_inputs(args, "weights", "poly", "tol", "workers")
    return report


def handle_control(args, config) -> RunReport:
    return symmetric_control(config)


def register(subparsers) -> None:
    parser = subparsers.add_parser("quartic", help="Singular fibres of the quartic pencil")
    sub = parser.add_subparsers(dest="action", required=True)

    solve = sub.add_parser("solve", help="Structured solve of the singular system")
    solve.add_argument("--weights", help="Comma-separated weights of x3^3 (w0 x0 + w1 x1 + w2 x2)")
    solve.add_argument("--poly", help="Polynomial JSON file (overrides --weights)")
    solve.add_argument("--tol", type=float, help="Newton residual tolerance")
    solve.add_argument("--workers", type=int, help="Polishing threads")
    solve.add_argument("--summary", action="store_true", help="Omit the solution list")
    solve.set_defaults(handler=handle_solve)

    control = sub.add_parser("control", help="Symmetric weights (1,1,1): fibres coincide")
    control.set_defaults(handler=handle_control)
