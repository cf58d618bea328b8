#!/usr/bin/env python3
"""
Singular fibres of the anticanonical pencil on a quartic Fano threefold

The pencil f: [x0:x1:x2:x3:x4] -> [x3:x4] has a singular member through x
exactly when DP(x) lies in span{dx3, dx4}, i.e. P = d0P = d1P = d2P = 0.
The solver exploits the shape of the weighted family: each d_iP is
a_i x_i^3 + b_i x3^3, so the free coordinates are cube roots and x4 is a
fourth root, followed by Newton polishing on the chart x3 = 1.
"""

import itertools
import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from functools import reduce
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from core.poly import (ComplexRational, HomogeneousPoly, Polynomial, ProjectivePoint,
                       numerical_rank, variables)
from utils.constants import (CLUSTER_TOL, FIBER_TOL, LOCUS_TOL, NEWTON_MAX_ITER, NEWTON_TOL,
                             PENCIL_VARS, QUARTIC_WEIGHTS, RANK_TOL)

logger = logging.getLogger(__name__)


class PencilShapeError(ValueError):
    """The polynomial does not have the shape the structured solver needs"""


class NewtonDivergence(RuntimeError):
    """Newton polishing failed to reach the residual tolerance"""


class NotOnVariety(ValueError):
    """A point does not satisfy the singular system"""


def weighted_quartic(weights: Sequence[int] = QUARTIC_WEIGHTS) -> HomogeneousPoly:
    """x0^4 + ... + x4^4 + x3^3 (w0 x0 + w1 x1 + w2 x2)"""
    x = variables(5)
    linear = sum((w * xi for w, xi in zip(weights, x[:3])), Polynomial.zero(5))
    P = sum((xi ** 4 for xi in x), Polynomial.zero(5)) + x[3] ** 3 * linear
    return HomogeneousPoly(5, P.terms)


@dataclass(frozen=True)
class PencilProblem:
    P: HomogeneousPoly
    pencil_vars: Tuple[int, int] = PENCIL_VARS

    def __post_init__(self):
        if not isinstance(self.P, HomogeneousPoly):
            object.__setattr__(self, "P", HomogeneousPoly(self.P.num_vars, self.P.terms))
        if self.P.num_vars != 5 or self.P.degree != 4:
            raise ValueError(
                f"pencil problems need a quartic in 5 variables, got degree "
                f"{self.P.degree} in {self.P.num_vars}")
        a, b = self.pencil_vars
        if a == b or not {a, b} <= set(range(5)):
            raise ValueError(f"invalid pencil variables {self.pencil_vars}")

    @property
    def free_vars(self) -> Tuple[int, ...]:
        return tuple(i for i in range(5) if i not in self.pencil_vars)


@dataclass(frozen=True)
class SingularPoint:
    point: ProjectivePoint
    pencil_value: Tuple[complex, complex]
    hessian_rank: int
    residuals: float

    def to_dict(self) -> dict:
        return {
            "point": [[z.real, z.imag] for z in self.point.coords],
            "pencil_value": [[z.real, z.imag] for z in self.pencil_value],
            "hessian_rank": self.hessian_rank,
            "residuals": self.residuals,
        }


@dataclass
class SolveReport:
    solutions: List[SingularPoint]
    bezout: int
    count_matches_bezout: bool
    all_multiplicity_one: bool
    all_distinct_fibers: bool
    discarded: int = 0
    min_separation: float = float("nan")
    tolerances: Dict[str, float] = field(default_factory=dict)

    @property
    def count(self) -> int:
        return len(self.solutions)

    def to_dict(self) -> dict:
        return {
            "solutions": [s.to_dict() for s in self.solutions],
            "count": self.count,
            "bezout": self.bezout,
            "count_matches_bezout": self.count_matches_bezout,
            "all_multiplicity_one": self.all_multiplicity_one,
            "all_distinct_fibers": self.all_distinct_fibers,
            "discarded": self.discarded,
            "min_separation": self.min_separation,
            "tolerances": self.tolerances,
        }


def build_singular_system(prob: PencilProblem) -> List[HomogeneousPoly]:
    """[P, d_iP for i in free_vars]"""
    return [prob.P] + [prob.P.partial_derivative(i) for i in prob.free_vars]


def bezout_number(system: Sequence[Polynomial]) -> int:
    return reduce(lambda acc, p: acc * max(p.degree, 0), system, 1)


def pencil_value(prob: PencilProblem, z) -> Tuple[complex, complex]:
    """[x_a : x_b] normalized so the larger-modulus entry is 1"""
    a, b = prob.pencil_vars
    pair = ProjectivePoint((z[a], z[b]))
    return pair.coords


def _chordal(u: Sequence[complex], v: Sequence[complex]) -> float:
    return ProjectivePoint(tuple(u)).chordal_distance(ProjectivePoint(tuple(v)))


def _residual(system: Sequence[Polynomial], z: np.ndarray) -> Tuple[float, float]:
    """Absolute residual and residual relative to each equation's floating scale"""
    absolute = 0.0
    relative = 0.0
    for eq in system:
        value = abs(eq.evaluate(z))
        absolute = max(absolute, value)
        relative = max(relative, value / max(1.0, eq.magnitude(z)))
    return absolute, relative


def newton_polish(system: Sequence[Polynomial], z0, unknowns: Sequence[int],
                  tol: float = NEWTON_TOL, max_iter: int = NEWTON_MAX_ITER) -> np.ndarray:
    """Newton iteration on the listed coordinates, the others held fixed

    Converges when the scaled residual drops below tol or the step stops
    changing the point; raises NewtonDivergence otherwise.
    """
    z = np.array(z0, dtype=complex)
    jacobian_polys = [[eq.partial_derivative(j) for j in unknowns] for eq in system]

    def newton_step(z: np.ndarray) -> np.ndarray:
        F = np.array([eq.evaluate(z) for eq in system])
        J = np.array([[d.evaluate(z) for d in row] for row in jacobian_polys])
        try:
            return np.linalg.solve(J, -F)
        except np.linalg.LinAlgError as e:
            raise NewtonDivergence(f"singular Jacobian during polishing: {e}")

    for iteration in range(max_iter):
        _, relative = _residual(system, z)
        if relative < tol:
            # one more step to reach rounding level, kept only if it helps
            refined = z.copy()
            refined[list(unknowns)] += newton_step(z)
            if _residual(system, refined)[0] < _residual(system, z)[0]:
                z = refined
            logger.debug(f"Newton converged after {iteration} steps (scaled residual {relative:.2e})")
            return z
        step = newton_step(z)
        z[list(unknowns)] += step
        if np.linalg.norm(step) <= tol * max(1.0, np.linalg.norm(z)):
            _, relative = _residual(system, z)
            if relative < 10 * tol:
                return z
    _, relative = _residual(system, z)
    if relative < tol:
        return z
    raise NewtonDivergence(
        f"no convergence after {max_iter} iterations (scaled residual {relative:.2e})")


def _cubic_shape(prob: PencilProblem, i: int) -> Tuple[ComplexRational, ComplexRational]:
    """Coefficients (a_i, b_i) of d_iP = a_i x_i^3 + b_i x_a^3"""
    anchor = prob.pencil_vars[0]
    deriv = prob.P.partial_derivative(i)
    own = tuple(3 if j == i else 0 for j in range(5))
    cross = tuple(3 if j == anchor else 0 for j in range(5))
    if not set(deriv.terms) <= {own, cross} or own not in deriv.terms:
        raise PencilShapeError(
            f"d{i}P is not of the form a*x{i}^3 + b*x{anchor}^3: {deriv}")
    return deriv.terms[own], deriv.terms.get(cross, ComplexRational(0))


def _quartic_shape(prob: PencilProblem) -> ComplexRational:
    """Coefficient of x_b^4, the only monomial allowed to involve x_b"""
    other = prob.pencil_vars[1]
    pure = tuple(4 if j == other else 0 for j in range(5))
    for exp in prob.P.terms:
        if exp[other] and exp != pure:
            raise PencilShapeError(f"x{other} appears outside x{other}^4 in P")
    if pure not in prob.P.terms:
        raise PencilShapeError(f"P has no x{other}^4 term")
    return prob.P.terms[pure]


def _cube_roots(c: complex) -> List[complex]:
    if c == 0:
        return [0j]
    base = complex(np.abs(c) ** (1.0 / 3.0) * np.exp(1j * np.angle(c) / 3.0))
    return [base * np.exp(2j * np.pi * k / 3.0) for k in range(3)]


def _fourth_roots(c: complex) -> List[complex]:
    base = complex(np.abs(c) ** 0.25 * np.exp(1j * np.angle(c) / 4.0))
    return [base * 1j ** k for k in range(4)]


def candidate_points(prob: PencilProblem, tol: float = NEWTON_TOL) -> Tuple[List[np.ndarray], int]:
    """All cube-root / fourth-root candidates on the chart x_a = 1

    Returns the candidates and the number of triples discarded because the
    quartic equation degenerated to x_b^4 = 0.
    """
    anchor, other = prob.pencil_vars
    free = prob.free_vars
    shapes = {i: _cubic_shape(prob, i) for i in free}
    lead = complex(_quartic_shape(prob))
    roots_per_var = [_cube_roots(-complex(shapes[i][1]) / complex(shapes[i][0])) for i in free]

    candidates = []
    discarded = 0
    for triple in itertools.product(*roots_per_var):
        z = np.zeros(5, dtype=complex)
        z[anchor] = 1.0
        z[list(free)] = triple
        c = -prob.P.evaluate(z) / lead
        if abs(c) <= tol * max(1.0, prob.P.magnitude(z)):
            logger.warning(f"Discarding free-coordinate triple {triple}: x{other}^4 = 0")
            discarded += 1
            continue
        for w in _fourth_roots(c):
            point = z.copy()
            point[other] = w
            candidates.append(point)
    return candidates, discarded


def classify_singularity(prob: PencilProblem, pt: SingularPoint,
                         rank_tol: float = RANK_TOL, locus_tol: float = LOCUS_TOL) -> int:
    """Rank of the Hessian of P restricted to the hyperplane section through pt

    On the chart x_a = 1 the section is x_b = lambda with lambda fixed by pt,
    so the restricted function's second partials are those of P in the free
    variables.
    """
    anchor = prob.pencil_vars[0]
    if abs(pt.point.coords[anchor]) <= locus_tol:
        raise ValueError(f"chart x{anchor} = 1 degenerate at {pt.point.coords}")
    z = pt.point.affine(anchor)
    _, relative = _residual(build_singular_system(prob), z)
    if relative > locus_tol:
        raise NotOnVariety(f"point is not on the singular locus (scaled residual {relative:.2e})")
    H = prob.P.hessian(z, prob.free_vars)
    return numerical_rank(H, rank_tol)


def hyperplane_section(prob: PencilProblem, pt: SingularPoint) -> Polynomial:
    """f = P(x_free, x_a = 1, x_b = lambda) as a polynomial in the free variables"""
    anchor, other = prob.pencil_vars
    z = pt.point.affine(anchor)
    lam = complex(z[other])
    restricted = prob.P.substitute({anchor: 1, other: ComplexRational.of(lam)})
    for i in sorted(prob.pencil_vars, reverse=True):
        restricted = restricted.dehomogenize(i)
    return restricted


def distinct_fibers(solutions: Sequence[SingularPoint], tol: float = FIBER_TOL) -> bool:
    """True iff all pencil values are pairwise more than tol apart on CP^1"""
    values = [s.pencil_value for s in solutions]
    for u, v in itertools.combinations(values, 2):
        if _chordal(u, v) <= tol:
            return False
    return True


def min_pairwise_separation(solutions: Sequence[SingularPoint]) -> float:
    if len(solutions) < 2:
        return float("inf")
    return min(a.point.chordal_distance(b.point)
               for a, b in itertools.combinations(solutions, 2))


def _cluster(points: List[np.ndarray], tol: float) -> List[np.ndarray]:
    kept: List[np.ndarray] = []
    for z in points:
        pz = ProjectivePoint(tuple(z))
        if all(pz.chordal_distance(ProjectivePoint(tuple(k))) > tol for k in kept):
            kept.append(z)
    return kept


def _sort_key(z: np.ndarray):
    return tuple(v for c in z for v in (round(c.real, 10), round(c.imag, 10)))


def structured_solve(prob: PencilProblem, tol: float = NEWTON_TOL,
                     max_iter: int = NEWTON_MAX_ITER, rank_tol: float = RANK_TOL,
                     fiber_tol: float = FIBER_TOL, cluster_tol: float = CLUSTER_TOL,
                     locus_tol: float = LOCUS_TOL, workers: int = 1) -> SolveReport:
    """Enumerate, polish and classify every singular point of the pencil"""
    anchor, other = prob.pencil_vars
    system = build_singular_system(prob)
    bezout = bezout_number(system)
    candidates, discarded = candidate_points(prob, tol)
    logger.info(f"Polishing {len(candidates)} candidates (Bezout bound {bezout})")

    unknowns = list(prob.free_vars) + [other]

    def polish(z0):
        return newton_polish(system, z0, unknowns, tol, max_iter)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            polished = list(pool.map(polish, candidates))
    else:
        polished = [polish(z) for z in candidates]

    polished = sorted(_cluster(polished, cluster_tol), key=_sort_key)
    if len(polished) < len(candidates):
        logger.warning(f"{len(candidates) - len(polished)} candidates merged while clustering")

    solutions = []
    for z in polished:
        point = ProjectivePoint(tuple(z))
        if abs(point.coords[anchor]) <= tol:
            raise NotOnVariety(f"solution with vanishing x{anchor}: {point.coords}")
        absolute, _ = _residual(system, z)
        provisional = SingularPoint(point, pencil_value(prob, point.coords), 0, absolute)
        rank = classify_singularity(prob, provisional, rank_tol, locus_tol)
        solutions.append(SingularPoint(point, provisional.pencil_value, rank, absolute))

    all_rank_three = all(s.hessian_rank == len(prob.free_vars) for s in solutions)
    report = SolveReport(
        solutions=solutions,
        bezout=bezout,
        count_matches_bezout=len(solutions) == bezout,
        all_multiplicity_one=all_rank_three and len(solutions) == bezout,
        all_distinct_fibers=distinct_fibers(solutions, fiber_tol),
        discarded=discarded,
        min_separation=min_pairwise_separation(solutions),
        tolerances={"newton": tol, "rank": rank_tol, "fiber": fiber_tol, "cluster": cluster_tol,
                    "locus": locus_tol},
    )
    logger.info(f"Found {report.count} singular points; distinct fibres: {report.all_distinct_fibers}")
    return report
