#!/usr/bin/env python3
"""
Tests for the flat Spin(7) model: forms, calibration and the quadric fibration
"""

import numpy as np
import pytest

from core.model import (
    AltForm, Frame4, QuadricFiberPoint, calibration_sweep, cayley_form_standard, complex_to_real,
    cy4_cayley_form, cy_normalization_holds, deformation_det, deformation_fields, det_sweep, df0,
    dyadic_radii, f0, fiber_calibration_defect, fiber_tangent_frame, find_signed_permutation,
    fit_decay_rate, kahler_form, literal_s2, nondegeneracy_det, real_to_complex, restrict_ratio,
    s2_decay_rate, sample_fiber_point,
)


def e(i, dim=8):
    v = np.zeros(dim)
    v[i] = 1.0
    return v


def test_standard_form_has_fourteen_terms():
    phi = cayley_form_standard()
    assert len(phi) == 14
    assert phi.coefficient((0, 1, 2, 3)) == 1
    assert phi.coefficient((1, 0, 2, 3)) == -1


def test_coordinate_planes_are_calibrated():
    phi = cayley_form_standard()
    assert restrict_ratio(phi, Frame4(np.array([e(0), e(1), e(2), e(3)]))) == pytest.approx(1.0)
    assert restrict_ratio(phi, Frame4(np.array([e(4), e(5), e(6), e(7)]))) == pytest.approx(1.0)


def test_orientation_flips_the_ratio():
    phi = cayley_form_standard()
    assert restrict_ratio(phi, Frame4(np.array([e(1), e(0), e(2), e(3)]))) == pytest.approx(-1.0)


def test_degenerate_frame_is_rejected():
    with pytest.raises(ValueError):
        restrict_ratio(cayley_form_standard(), Frame4(np.array([e(0), e(0), e(2), e(3)])))


def test_calibration_inequality_on_random_frames():
    sweep = calibration_sweep(cayley_form_standard(), 2000, seed=5)
    assert sweep["bounded"]
    assert sweep["max"] <= 1 + 1e-10


def test_wedge_is_graded_commutative():
    a = AltForm(1, 4, {(0,): 1})
    b = AltForm(1, 4, {(1,): 1})
    assert a.wedge(b).is_close(b.wedge(a).scale(-1))
    assert a.wedge(a).coeffs == {}


def test_cy_normalization_in_every_dimension():
    for n in (1, 2, 3, 4):
        assert cy_normalization_holds(n)


def test_kahler_power_is_a_volume_multiple():
    top = kahler_form(4).power(4)
    assert top.coeffs == {tuple(range(8)): 24}


def test_cy4_form_matches_standard_form():
    found = find_signed_permutation(cy4_cayley_form(), cayley_form_standard())
    assert found is not None
    perm, signs = found
    assert sorted(perm) == list(range(8))
    assert cy4_cayley_form().pullback(perm, signs).is_close(cayley_form_standard(), 1e-12)


def test_no_permutation_between_unequal_forms():
    assert find_signed_permutation(kahler_form(2), AltForm(2, 4, {(0, 1): 1})) is None


def test_complex_real_conversion():
    z = np.array([1 + 2j, 3 - 1j])
    assert np.allclose(complex_to_real(z), [1, 2, 3, -1])
    assert np.allclose(real_to_complex(complex_to_real(z)), z)


def test_sampled_points_lie_on_the_fiber():
    p = sample_fiber_point(2 + 1j, 3.0, w0=0.5j, theta=0.7)
    assert np.allclose(f0(p.point), [2 + 1j, 0.5j])
    assert p.radius == pytest.approx(3.0)


def test_radius_below_the_fiber_is_rejected():
    with pytest.raises(ValueError):
        sample_fiber_point(4.0, 1.0)


def test_point_off_the_fiber_is_rejected():
    with pytest.raises(ValueError):
        QuadricFiberPoint(1.0, 0.0, np.array([1, 1, 0, 0], dtype=complex))


def test_fiber_frames_are_calibrated():
    rng = np.random.default_rng(3)
    points = [sample_fiber_point(complex(*rng.uniform(-2, 2, 2)), float(rng.uniform(2, 5)))
              for _ in range(10)]
    assert fiber_calibration_defect(cy4_cayley_form(), points) < 1e-10


def test_tangent_frame_is_orthonormal():
    fr = fiber_tangent_frame(sample_fiber_point(1.0, 2.0))
    assert np.allclose(fr.gram(), np.eye(4))


def test_deformation_fields_lift_the_base_directions():
    p = sample_fiber_point(1 - 1j, 4.0, w0=2.0)
    s1, s2 = deformation_fields(p)
    assert np.allclose(df0(p.point, s1), [0, 1])
    assert np.allclose(df0(p.point, s2), [1, 0])
    assert not np.allclose(df0(p.point, literal_s2(p)), [1, 0])


def test_s2_decays_like_inverse_radius():
    assert s2_decay_rate(1.0) == pytest.approx(-1.0, abs=0.01)


def test_fit_recovers_synthetic_rates():
    radii = dyadic_radii((0, 10))
    for g in (-2.0, -1.0, 0.0, 1.0):
        assert fit_decay_rate(radii, 3.0 * radii ** g) == pytest.approx(g, abs=1e-9)
    with pytest.raises(ValueError):
        fit_decay_rate([1.0], [1.0])


def test_determinant_constant():
    sweep = det_sweep(1.0, 0.1, 10.0, zeta=-1.0)
    assert sweep["rmin"] == pytest.approx(1.0)
    assert sweep["C"] == pytest.approx(0.25, abs=1e-9)
    assert abs(deformation_det(sample_fiber_point(1.0, 7.0))) == pytest.approx(0.25)


def test_wrong_weight_degenerates_at_large_radius():
    small = abs(deformation_det(sample_fiber_point(1.0, 1e3), zeta=0.0))
    assert small < 1e-6


def test_nondegeneracy_det_input_checks():
    fields = [e(i, 4) for i in range(4)]
    assert nondegeneracy_det(fields, -1.0, 2.0, n_fixed=2) == pytest.approx(4.0)
    with pytest.raises(ValueError):
        nondegeneracy_det(fields[:3], -1.0, 2.0)
    with pytest.raises(ValueError):
        nondegeneracy_det(fields, -1.0, 0.0)
