#!/usr/bin/env python3
"""
Tests for the neck analysis: norms, partition of unity, contraction and fold-over
"""

import math

import numpy as np
import pytest

from core.analysis import (
    ContractionFailure, ContractionProblem, FoldModel, GluingSchedule, NormRegime, WeightedNormSpec,
    annulus_norm, annulus_norm_quadrature, contraction_family_smoothness, contraction_solve, cutoff,
    fold_blowup_exponent, fold_dt, fold_height, fold_intersection, fold_onset_scale, fold_scale_exponent,
    fold_width, glue_error_bound, measured_fold_scale, neck_norm_slopes, norm_regime, partition_phi,
    random_contraction_problem,
)

TS = 2.0 ** -np.arange(4, 21)
ORACLE_ROOT = (-1 + math.sqrt(0.6)) / 2


def oracle(f0=0.1):
    return ContractionProblem.from_tensors([[1.0]], [[[1.0]]], [f0])


# -- cut-off and schedule

def test_cutoff_is_a_smooth_step():
    assert cutoff(-1.0) == 0.0
    assert cutoff(0.0) == 0.0
    assert cutoff(1.0) == 1.0
    assert cutoff(0.5) == pytest.approx(0.5)
    xs = np.linspace(0, 1, 101)
    values = [cutoff(x) for x in xs]
    assert all(a <= b for a, b in zip(values, values[1:]))


def test_schedule_radii_are_ordered():
    sched = GluingSchedule(0.01, 0.5, 0.3, 0.1)
    radii = list(sched.radii().values())
    assert radii == sorted(radii)


def test_schedule_rejects_bad_exponents():
    with pytest.raises(ValueError):
        GluingSchedule(0.01, 0.5, 0.1, 0.3)
    with pytest.raises(ValueError):
        GluingSchedule(1.5, 0.5, 0.3, 0.1)
    with pytest.raises(ValueError):
        GluingSchedule(0.9, 0.5, 0.3, 0.1)


def test_partition_of_unity():
    sched = GluingSchedule(0.01, 0.5, 0.3, 0.1)
    assert partition_phi(sched, 0.005) == 1.0
    assert partition_phi(sched, sched.t ** sched.nu_p) == pytest.approx(1.0)
    assert partition_phi(sched, sched.t ** sched.nu_pp) == pytest.approx(0.0)
    assert partition_phi(sched, 2.0) == 0.0
    mid = partition_phi(sched, 0.4)
    assert 0.0 < mid < 1.0
    with pytest.raises(ValueError):
        partition_phi(sched, 0.0)


# -- norms

def test_norm_regimes():
    assert norm_regime(-1, -1.5) is NormRegime.BOUNDED
    assert norm_regime(-1, -1) is NormRegime.LOG
    assert norm_regime(-1, -0.5) is NormRegime.POWER


def test_power_regime_slope():
    fit = neck_norm_slopes(-1.0, -0.5, 2.0, 1, TS)
    assert fit["regime"] == "POWER"
    assert fit["log_slope"] == pytest.approx(-0.5, abs=0.02)


def test_bounded_regime_slope():
    fit = neck_norm_slopes(-1.0, -1.5, 2.0, 1, TS)
    assert fit["regime"] == "BOUNDED"
    assert fit["log_slope"] == pytest.approx(0.0, abs=0.02)


def test_log_regime_is_linear_in_log_t():
    fit = neck_norm_slopes(-1.0, -1.0, 2.0, 2, TS)
    assert fit["regime"] == "LOG"
    assert fit["log_linear_slope"] == pytest.approx(fit["expected_log_linear_slope"], rel=1e-9)


@pytest.mark.parametrize("zeta,weight", [(-1.0, -1.5), (-1.0, -1.0), (-1.0, -0.5), (0.5, 0.2)])
def test_closed_form_agrees_with_quadrature(zeta, weight):
    spec = WeightedNormSpec(2.0, 2, weight)
    exact = annulus_norm(zeta, spec, 0.01, 1.0)
    assert annulus_norm_quadrature(zeta, spec, 0.01, 1.0) == pytest.approx(exact, rel=1e-6)


def test_norm_input_checks():
    with pytest.raises(ValueError):
        WeightedNormSpec(1.0, 1, 0.0)
    with pytest.raises(ValueError):
        WeightedNormSpec(2.0, -1, 0.0)
    with pytest.raises(ValueError):
        annulus_norm(-1.0, WeightedNormSpec(2.0, 1, 0.0), 1.0, 0.5)


def test_glue_error_bound():
    assert glue_error_bound(2.0, 0.01, 0.5, 3.0, 2.0) == pytest.approx(0.2)
    with pytest.raises(ValueError):
        glue_error_bound(2.0, 0.01, 0.5, 3.0, 1.0)
    with pytest.raises(ValueError):
        glue_error_bound(2.0, 0.01, 1.5, 3.0, 2.0)


# -- contraction

def test_oracle_converges_to_the_small_root():
    prob = oracle()
    assert prob.smallness() == pytest.approx(0.4)
    result = contraction_solve(prob)
    assert result.converged
    assert not result.diverged
    assert result.v_inf[0] == pytest.approx(ORACLE_ROOT, abs=1e-10)
    assert result.within_bound
    assert max(result.decay_ratios()[:10]) <= 0.4


def test_large_f0_diverges():
    result = contraction_solve(oracle(1.0))
    assert result.diverged
    assert not result.converged


def test_random_problems_stay_within_bound():
    rng = np.random.default_rng(7)
    for dim in (2, 4, 6):
        prob = random_contraction_problem(rng, dim, 0.5)
        assert prob.smallness() == pytest.approx(0.5)
        assert prob.verify_constants(rng)
        result = contraction_solve(prob)
        assert result.converged
        assert result.within_bound
        assert prob.residual(result.v_inf) < 1e-10


def test_problem_input_checks():
    with pytest.raises(ValueError):
        ContractionProblem.from_tensors([[0.0]], [[[1.0]]], [0.1])
    with pytest.raises(ValueError):
        ContractionProblem.from_tensors(np.eye(2), np.zeros(8), [0.1, 0.2, 0.3])
    with pytest.raises(ValueError):
        ContractionProblem.from_json({"D": [[1.0]], "F0": [0.1]})


def test_problem_from_json():
    prob = ContractionProblem.from_json({"D": [[2.0]], "Q": [[[1.0]]], "F0": [0.1]})
    assert prob.C_D == pytest.approx(0.5)
    assert prob.C_Q == pytest.approx(1.0)


def test_family_is_smooth_in_the_parameter():
    def family(s):
        return oracle(0.1 + 0.01 * s)

    assert contraction_family_smoothness(family, [-1.0, 0.0, 1.0], 0.1) < 1e-3
    with pytest.raises(ValueError):
        contraction_family_smoothness(family, [0.0], 0.0)


def test_family_reports_divergent_members():
    with pytest.raises(ContractionFailure):
        contraction_family_smoothness(lambda s: oracle(1.0 + s), [0.0], 0.1)


# -- fold-over

def test_fold_model_validation():
    with pytest.raises(ValueError):
        FoldModel(1.0, 2.0, 0.1)
    with pytest.raises(ValueError):
        FoldModel(0.5, 0.5, 0.1)
    with pytest.raises(ValueError):
        FoldModel(0.5, 2.0, -0.1)


def test_no_fold_without_deformation():
    m = FoldModel(0.5, 2.0, 0.0)
    assert fold_intersection(m, 0.1, 0.01) is None
    with pytest.raises(ValueError):
        fold_width(m)
    with pytest.raises(ValueError):
        fold_onset_scale(m)


def test_fold_width_and_onset():
    m = FoldModel(0.5, 2.0, 0.01)
    assert fold_width(m) == pytest.approx(1e-4)
    t = fold_onset_scale(m)
    assert fold_dt(m, 1.0, t) == pytest.approx(0.0, abs=1e-9)
    with pytest.raises(ValueError):
        fold_dt(m, 1.0, 0.0)


def test_fibers_meet_where_heights_agree():
    m = FoldModel(0.5, 2.0, 0.1)
    r = fold_intersection(m, 0.01, 0.001)
    eta_height = 0.01 - m.s * 0.01 ** m.alpha * r ** m.gamma
    eps_height = 0.001 - m.s * 0.001 ** m.alpha * r ** m.gamma
    assert eta_height == pytest.approx(eps_height)
    with pytest.raises(ValueError):
        fold_intersection(m, 0.001, 0.01)


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_fold_scale_follows_the_width_law(alpha):
    ss = [1e-1, 1e-2, 1e-3, 1e-4]
    assert fold_scale_exponent(alpha, 2.0, ss) == pytest.approx(1 / (1 - alpha), abs=1e-6)
    for s in ss:
        m = FoldModel(alpha, 2.0, s)
        assert 0.5 <= measured_fold_scale(m) / fold_width(m) <= 2.0


@pytest.mark.parametrize("alpha", [0.25, 0.5, 0.75])
def test_fold_derivative_blows_up(alpha):
    m = FoldModel(alpha, 2.0, 0.1)
    assert fold_blowup_exponent(m, TS) == pytest.approx(alpha - 1, abs=1e-3)


def test_fold_height_and_intersection_values():
    m = FoldModel(0.5, 2.0, 0.1)
    assert fold_height(m, 1.0, 0.04) == pytest.approx(0.02)
    assert fold_height(m, 0.7, 0.0) == 0.0
    # sqrt(0.3), not 0.09
    assert fold_intersection(m, 0.0004, 0.0001) == pytest.approx(math.sqrt(0.3))
