#!/usr/bin/env python3
"""
Tests for exact polynomial arithmetic and projective points
"""

from fractions import Fraction

import numpy as np
import pytest

from core.poly import (
    ComplexRational, DimensionMismatch, HomogeneousPoly, Polynomial, ProjectivePoint,
    numerical_rank, variables,
)


def test_partial_derivative_of_quartic_term():
    x = variables(5)
    P = x[3] ** 3 * x[0] * 10
    d0 = P.partial_derivative(0)
    assert d0 == x[3] ** 3 * 10
    assert P.partial_derivative(3) == x[3] ** 2 * x[0] * 30


def test_partial_derivative_out_of_range():
    with pytest.raises(IndexError):
        variables(3)[0].partial_derivative(3)


def test_derivative_of_constant_is_zero():
    assert Polynomial.constant(2, 7).partial_derivative(1).is_zero()


def test_evaluate_matches_hand_value():
    x = variables(2)
    P = x[0] ** 2 + x[1] * 3
    assert P.evaluate([2, 1j]) == pytest.approx(4 + 3j)


def test_evaluate_rejects_wrong_dimension():
    with pytest.raises(DimensionMismatch):
        variables(3)[0].evaluate([1, 2])


def test_homogeneous_rejects_mixed_degrees():
    with pytest.raises(ValueError):
        HomogeneousPoly(2, {(2, 0): 1, (0, 1): 1})


def test_sums_of_equal_degree_stay_homogeneous():
    x = variables(3)
    assert isinstance(x[0] ** 2 + x[1] * x[2], HomogeneousPoly)
    assert not isinstance(x[0] ** 2 + x[1], HomogeneousPoly)


def test_cancelling_terms_are_dropped():
    x = variables(2)
    assert (x[0] - x[0]).is_zero()
    assert (x[0] - x[0]).degree == -1


def test_dehomogenize_drops_variable():
    x = variables(3)
    P = x[0] ** 2 + x[2] ** 2
    Q = P.dehomogenize(2)
    assert Q.num_vars == 2
    assert Q.evaluate([3, 5]) == pytest.approx(10)


def test_substitute_keeps_variable_count():
    x = variables(3)
    P = x[0] * x[1] + x[2] ** 2
    Q = P.substitute({2: 2})
    assert Q.num_vars == 3
    assert Q.evaluate([1, 1, 99]) == pytest.approx(5)


def test_complex_rational_arithmetic_is_exact():
    a = ComplexRational("1/3", 1)
    b = ComplexRational(Fraction(2, 3), -1)
    assert (a + b) == ComplexRational(1, 0)
    assert (a * a.conjugate()) == ComplexRational(Fraction(10, 9), 0)
    assert (a / a) == ComplexRational(1, 0)


def test_json_round_trip_preserves_rationals():
    P = Polynomial(2, {(1, 1): ComplexRational("1/7", "-2/3"), (0, 2): 5})
    assert Polynomial.from_json(P.to_json()) == P


def test_hessian_of_sum_of_squares():
    x = variables(3)
    P = x[0] ** 2 + x[1] ** 2 + x[2] ** 2
    H = P.hessian([0.3, 0.1, 2.0], [0, 1, 2])
    assert np.allclose(H, 2 * np.eye(3))


def mixed_quartic():
    x = variables(4)
    return (x[0] ** 4 + x[1] ** 3 * x[2] * ComplexRational("2/3", 1) + x[3] ** 2 * x[0] * x[1] * 5
            - x[2] ** 2 * x[3] ** 2 * ComplexRational(0, "1/7"))


def test_euler_identity():
    P = mixed_quartic()
    x = variables(4)
    euler = sum((x[i] * P.partial_derivative(i) for i in range(4)), Polynomial.zero(4))
    assert euler == P * P.degree


def test_homogeneous_scaling():
    P = mixed_quartic()
    z = np.array([0.3 - 1j, 1.2, -0.7 + 0.4j, 2.0])
    lam = 1.5 - 0.5j
    assert P.evaluate(lam * z) == pytest.approx(lam ** 4 * P.evaluate(z))


@pytest.mark.parametrize("i,j", [(0, 1), (1, 2), (2, 3), (0, 3), (1, 1)])
def test_partial_derivatives_commute(i, j):
    P = mixed_quartic()
    assert P.partial_derivative(i).partial_derivative(j) == P.partial_derivative(j).partial_derivative(i)


def test_variables_are_homogeneous():
    assert all(isinstance(v, HomogeneousPoly) and v.degree == 1 for v in variables(3))


def test_numerical_rank():
    assert numerical_rank(np.diag([1.0, 1e-3, 1e-12]), 1e-8) == 2
    assert numerical_rank(np.zeros((2, 2)), 1e-8) == 0


def test_projective_point_normalization_and_distance():
    p = ProjectivePoint((2, 4))
    q = ProjectivePoint((1j, 2j))
    assert p.coords == (0.5, 1)
    assert p.chordal_distance(q) == pytest.approx(0.0, abs=1e-12)
    assert ProjectivePoint((1, 0)).chordal_distance(ProjectivePoint((0, 1))) == pytest.approx(1.0)


def test_projective_point_rejects_zero():
    with pytest.raises(ValueError):
        ProjectivePoint((0, 0))


def test_affine_chart():
    p = ProjectivePoint((1, 2, 4))
    assert np.allclose(p.affine(1), [0.5, 1, 2])
    with pytest.raises(ZeroDivisionError):
        ProjectivePoint((1, 0)).affine(1)
