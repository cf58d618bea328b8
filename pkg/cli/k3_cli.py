#!/usr/bin/env python3
"""
k3 subcommands: lattice invariants, roots, hyperkaehler triples and matching
"""

import logging

import numpy as np

from cli.common import echo_inputs, load_json
from cli.report import RunReport
from core.k3lattice import (
    GramLattice, HKTriple, SublatticeEmbedding, default_matching_example, e8_negative,
    enumerate_roots, hk_domain_report, hk_rotate, is_primitive_embedding, k3_lattice,
    matching_domain_check, matching_project, period_point_check, random_triple, separating_triple_example,
)
from utils.constants import E8_ROOT_COUNT, K3_RANK, K3_SIGNATURE

logger = logging.getLogger(__name__)


def _lattice(path) -> GramLattice:
    data = load_json(path)
    return GramLattice.from_json(data) if data else k3_lattice()


def _embedding(path, fallback: SublatticeEmbedding) -> SublatticeEmbedding:
    data = load_json(path)
    if data is None:
        return fallback
    return SublatticeEmbedding.from_json(data["basis"] if isinstance(data, dict) else data)


def lattice_suite(config) -> RunReport:
    report = RunReport("k3 lattice")
    L = k3_lattice()
    tol = config.get("lattice.tol")
    report.results = {"rank": L.rank, "signature": list(L.signature()), "even": L.is_even(),
                      "determinant": L.determinant()}
    report.check("rank", K3_RANK, L.rank)
    report.check("signature", list(K3_SIGNATURE), list(L.signature()))
    report.check("even", True, L.is_even())
    report.check("abs_determinant", 1, abs(L.determinant()))

    block = e8_negative("a")
    roots = enumerate_roots(block, [tuple(int(i == j) for j in range(8)) for i in range(8)])
    report.results["e8_roots"] = len(roots.roots)
    report.check("e8_root_count", E8_ROOT_COUNT, len(roots.roots))

    rng = np.random.default_rng(config.get("lattice.seed"))
    samples = config.get("lattice.random_triples")
    involution = projections = True
    for _ in range(samples):
        triple = random_triple(L, rng)
        involution &= hk_rotate(hk_rotate(triple)) == triple
        for side in ("+", "-"):
            projections &= period_point_check(L, *matching_project(side, triple), tol)
    report.results["random_triples"] = samples
    report.check("rotation_involution", True, involution)
    report.check("projections_in_period_domain", True, projections)

    _, n_plus, n_minus, triple = default_matching_example(L)
    hk = hk_domain_report(L, triple, tol, config.get("lattice.max_denominator"))
    report.results["standard_triple"] = hk
    report.check("standard_triple_blocked_by_e8_roots", False, hk["valid"])
    U3, separating = separating_triple_example()
    clean = hk_domain_report(U3, separating, tol, config.get("lattice.max_denominator"))
    report.results["separating_triple"] = clean
    report.check("separating_triple_valid", True, clean["valid"])
    report.check("separating_triple_periods", True,
                 all(period_point_check(U3, *matching_project(side, separating), tol) for side in ("+", "-")))
    matching = matching_domain_check(L, n_plus, n_minus, triple, triple.omega_plus, triple.omega_minus, tol)
    report.results["matching"] = matching
    report.check("matching_example", True, all(matching.values()))
    return report


def handle_lattice(args, config) -> RunReport:
    return lattice_suite(config)


def handle_roots(args, config) -> RunReport:
    if args.lattice:
        data = load_json(args.lattice)
        L = GramLattice.from_json(data)
        whole = SublatticeEmbedding(tuple(tuple(int(i == j) for j in range(L.rank)) for i in range(L.rank)))
        if "basis" in data:
            whole = SublatticeEmbedding.from_json(data["basis"])
        basis = _embedding(args.basis, whole).basis
    else:
        L = e8_negative("a")
        basis = [tuple(int(i == j) for j in range(8)) for i in range(8)]
    roots = enumerate_roots(L, basis, args.height)
    report = RunReport("k3 roots", echo_inputs(args, "lattice", "basis", "height"))
    report.results = {"count": len(roots.roots), "complete": roots.complete,
                      "roots": [list(r.coords) for r in roots.roots]}
    report.check("closed_under_negation", True,
                 {r.coords for r in roots.roots} == {(-r).coords for r in roots.roots})
    if not args.lattice:
        report.check("e8_root_count", E8_ROOT_COUNT, len(roots.roots))
    return report


def handle_check_triple(args, config) -> RunReport:
    L = _lattice(args.lattice)
    tol = config.get("lattice.tol")
    data = load_json(args.triple)
    triple = HKTriple.from_json(L, data, tol) if data else default_matching_example(L)[3]
    hk = hk_domain_report(L, triple, tol, config.get("lattice.max_denominator"))
    report = RunReport("k3 check-triple", echo_inputs(args, "lattice", "triple"))
    report.results = {"triple": triple.to_json(), "a": str(triple.a), "hk_domain": hk,
                      "rotated": hk_rotate(triple).to_json()}
    report.check("rotation_involution", True, hk_rotate(hk_rotate(triple)) == triple)
    for side in ("+", "-"):
        report.check(f"projection_{side}_period_point", True,
                     period_point_check(L, *matching_project(side, triple), tol))
    return report


def handle_match(args, config) -> RunReport:
    L, default_plus, default_minus, default_triple = default_matching_example(_lattice(args.lattice))
    tol = config.get("lattice.tol")
    data = load_json(args.triple)
    triple = HKTriple.from_json(L, data, tol) if data else default_triple
    n_plus = _embedding(args.n_plus, default_plus)
    n_minus = _embedding(args.n_minus, default_minus)
    checks = matching_domain_check(L, n_plus, n_minus, triple, triple.omega_plus, triple.omega_minus, tol)
    report = RunReport("k3 match", echo_inputs(args, "lattice", "triple", "n_plus", "n_minus"))
    report.results = {"matching": checks,
                      "n_plus_primitive": is_primitive_embedding(L, n_plus),
                      "n_minus_primitive": is_primitive_embedding(L, n_minus)}
    for name, value in checks.items():
        report.check(name, True, value)
    report.check("n_plus_primitive", True, report.results["n_plus_primitive"])
    report.check("n_minus_primitive", True, report.results["n_minus_primitive"])
    return report


def handle_primitive(args, config) -> RunReport:
    L = _lattice(args.lattice)
    data = load_json(args.basis)
    if data is None:
        raise ValueError("k3 primitive needs --basis FILE")
    emb = SublatticeEmbedding.from_json(data["basis"] if isinstance(data, dict) else data)
    report = RunReport("k3 primitive", echo_inputs(args, "lattice", "basis"))
    report.results = {"rank": emb.rank, "primitive": is_primitive_embedding(L, emb)}
    return report


def register(subparsers) -> None:
    parser = subparsers.add_parser("k3", help="K3 lattice and period-domain checks")
    sub = parser.add_subparsers(dest="action", required=True)

    lattice = sub.add_parser("lattice", help="Invariants of U^3 + E8(-1)^2 and random triples")
    lattice.set_defaults(handler=handle_lattice)

    roots = sub.add_parser("roots", help="Enumerate -2 vectors")
    roots.add_argument("--lattice", help="Lattice JSON {\"gram\": [[...]]}; default E8(-1)")
    roots.add_argument("--basis", help="Sublattice JSON {\"basis\": [[...]]}")
    roots.add_argument("--height", type=int, help="Coefficient bound for indefinite spans")
    roots.set_defaults(handler=handle_roots)

    triple = sub.add_parser("check-triple", help="Hyperkaehler K3 domain check")
    triple.add_argument("--lattice", help="Lattice JSON; default the K3 lattice")
    triple.add_argument("--triple", help="Triple JSON {omega_plus, omega_minus, omega_zero}")
    triple.set_defaults(handler=handle_check_triple)

    match = sub.add_parser("match", help="Matching condition of the twisted sum")
    match.add_argument("--lattice", help="Lattice JSON; default the K3 lattice")
    match.add_argument("--triple", help="Triple JSON")
    match.add_argument("--n-plus", dest="n_plus", help="Polarising lattice of the + block")
    match.add_argument("--n-minus", dest="n_minus", help="Polarising lattice of the - block")
    match.set_defaults(handler=handle_match)

    primitive = sub.add_parser("primitive", help="Primitivity of a sublattice embedding")
    primitive.add_argument("--lattice", help="Lattice JSON; default the K3 lattice")
    primitive.add_argument("--basis", help="Sublattice JSON {\"basis\": [[...]]}")
    primitive.set_defaults(handler=handle_primitive)
