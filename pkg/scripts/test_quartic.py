#!/usr/bin/env python3
"""
Tests for the singular-fibre census of the quartic pencil
"""

import numpy as np
import pytest

from core.poly import Polynomial, variables
from core.quartic import (
    NotOnVariety, PencilProblem, PencilShapeError, SingularPoint, bezout_number,
    build_singular_system, candidate_points, classify_singularity, distinct_fibers,
    hyperplane_section, newton_polish, weighted_quartic, pencil_value, structured_solve,
)
from core.poly import ProjectivePoint
from utils.constants import ACCEPT_RESIDUAL, LOCUS_TOL, MIN_SEPARATION, QUARTIC_SINGULAR_COUNT


@pytest.fixture(scope="module")
def census():
    return structured_solve(PencilProblem(weighted_quartic()))


def test_bezout_number_is_108():
    system = build_singular_system(PencilProblem(weighted_quartic()))
    assert [p.degree for p in system] == [4, 3, 3, 3]
    assert bezout_number(system) == QUARTIC_SINGULAR_COUNT


def test_census_finds_108_simple_points(census):
    assert census.count == QUARTIC_SINGULAR_COUNT
    assert census.count_matches_bezout
    assert census.all_multiplicity_one
    assert all(s.residuals < ACCEPT_RESIDUAL for s in census.solutions)
    assert all(s.hessian_rank == 3 for s in census.solutions)
    assert census.discarded == 0


def test_census_fibres_are_distinct(census):
    assert census.all_distinct_fibers
    assert census.min_separation > MIN_SEPARATION


def test_symmetric_weights_share_fibres():
    report = structured_solve(PencilProblem(weighted_quartic((1, 1, 1))))
    assert report.count == QUARTIC_SINGULAR_COUNT
    assert not report.all_distinct_fibers


def test_solve_is_deterministic(census):
    again = structured_solve(PencilProblem(weighted_quartic()), workers=4)
    assert again.count == census.count
    assert np.allclose([s.point.coords for s in again.solutions],
                       [s.point.coords for s in census.solutions])


def test_newton_polish_is_idempotent(census):
    prob = PencilProblem(weighted_quartic())
    system = build_singular_system(prob)
    z = census.solutions[0].point.affine(3)
    polished = newton_polish(system, z, [0, 1, 2, 4])
    assert np.allclose(polished, z, atol=1e-12)


def test_hyperplane_section_is_a_quadric_cone(census):
    prob = PencilProblem(weighted_quartic())
    pt = census.solutions[5]
    f = hyperplane_section(prob, pt)
    z = pt.point.affine(3)[:3]
    assert f.num_vars == 3
    assert abs(f.evaluate(z)) < 1e-8
    gradient = [f.partial_derivative(i).evaluate(z) for i in range(3)]
    assert np.allclose(gradient, 0, atol=1e-8)
    assert np.linalg.matrix_rank(f.hessian(z, [0, 1, 2]), tol=1e-8) == 3


def test_classify_rejects_points_off_the_locus():
    prob = PencilProblem(weighted_quartic())
    z = (0.1, 0.2, 0.3, 1.0, 0.5)
    point = ProjectivePoint(z)
    bogus = SingularPoint(point, pencil_value(prob, point.coords), 0, 1.0)
    with pytest.raises(NotOnVariety):
        classify_singularity(prob, bogus)


def test_locus_tolerance_is_configurable(census):
    prob = PencilProblem(weighted_quartic())
    z = census.solutions[0].point.affine(3)
    z[0] += 1e-5
    point = ProjectivePoint(tuple(z))
    nudged = SingularPoint(point, pencil_value(prob, point.coords), 0, 0.0)
    with pytest.raises(NotOnVariety):
        classify_singularity(prob, nudged)
    assert classify_singularity(prob, nudged, locus_tol=1e-3) == 3
    assert census.tolerances["locus"] == LOCUS_TOL


def test_reference_quartic_value():
    P = weighted_quartic()
    assert P.num_vars == 5
    assert P.degree == 4
    assert len(P.terms) == 8
    assert P.evaluate([1, 0, 0, 0, 0]) == pytest.approx(1)
    assert P.evaluate([1, 0, 0, 0, 1j]) == pytest.approx(2)


def test_distinct_fibers_detects_collisions():
    a = SingularPoint(ProjectivePoint((1, 0, 0, 1, 2)), (0.5, 1), 3, 0.0)
    b = SingularPoint(ProjectivePoint((0, 1, 0, 1, 2)), (0.5, 1), 3, 0.0)
    assert not distinct_fibers([a, b])
    assert distinct_fibers([a])
    assert distinct_fibers([])


def test_pencil_problem_rejects_non_quartics():
    x = variables(5)
    with pytest.raises(ValueError):
        PencilProblem(x[0] ** 3)
    with pytest.raises(ValueError):
        PencilProblem(weighted_quartic(), pencil_vars=(3, 3))


def test_unstructured_quartic_is_rejected():
    x = variables(5)
    P = sum((xi ** 4 for xi in x), Polynomial.zero(5)) + x[0] * x[1] * x[2] * x[4]
    with pytest.raises(PencilShapeError):
        candidate_points(PencilProblem(P))
