#!/usr/bin/env python3
"""
Tests for the twisted-connected-sum bookkeeping
"""

import math

import pytest

from core.tcs import (
    FormalForm, GluingMatrix, TCSPiece, glued_singular_count, identity_substitution,
    literal_substitution, matching_verdicts, neck_form_matching, no_dt_flip_substitution,
    phi_infinity, reference_betti, rotation_substitution, torsion_threshold, torus_gluing_homology,
)
from utils.constants import QUARTIC_SINGULAR_COUNT, TCS_SINGULAR_COUNT


def test_swap_gluing_kills_h1():
    assert torus_gluing_homology(GluingMatrix.swap()) == []


def test_identity_gluing_leaves_a_free_summand():
    assert torus_gluing_homology(GluingMatrix(((1, 0), (0, 1)))) == [0]


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_lens_space_gluing(p):
    assert torus_gluing_homology(GluingMatrix(((1, 0), (p, 1)))) == [p]


def test_gluing_matrix_validation():
    assert GluingMatrix.parse("0, 1, 1, 0") == GluingMatrix.swap()
    with pytest.raises(ValueError):
        GluingMatrix.parse("1,2,3")
    with pytest.raises(ValueError):
        GluingMatrix(((2, 0), (0, 1)))
    with pytest.raises(ValueError):
        GluingMatrix(((1, 0, 0), (0, 1, 0)))


def test_wedge_signs():
    dt = FormalForm.generator("dt")
    da = FormalForm.generator("dtheta_a")
    w = FormalForm.generator("w1+")
    assert da.wedge(dt) == -dt.wedge(da)
    assert dt.wedge(dt) == FormalForm()
    assert w.wedge(dt) == dt.wedge(w)
    with pytest.raises(ValueError):
        FormalForm.generator("dx")


def test_phi_infinity_has_four_terms():
    assert len(phi_infinity("+").terms) == 4
    with pytest.raises(ValueError):
        phi_infinity("0")


def test_matching_verdicts():
    verdicts = matching_verdicts()
    assert verdicts == {"rotation": True, "literal": False, "identity": False, "no_dt_flip": False}


def test_default_matching_uses_rotation():
    assert neck_form_matching()


def test_rotation_twice_is_identity_on_generators():
    rotation = rotation_substitution()
    for name in ("w1-", "w2-", "w3-", "dt", "dtheta_a"):
        g = FormalForm.generator(name)
        assert g.substitute(rotation).substitute(rotation) == g


def test_failing_substitutions_differ_from_the_target():
    target = phi_infinity("+")
    for mapping in (literal_substitution(), identity_substitution(), no_dt_flip_substitution()):
        assert phi_infinity("-").substitute(mapping) != target


def test_singular_counts_add():
    pieces = [TCSPiece("a", QUARTIC_SINGULAR_COUNT), TCSPiece("b", QUARTIC_SINGULAR_COUNT)]
    assert glued_singular_count(pieces) == TCS_SINGULAR_COUNT == 216
    assert glued_singular_count([TCSPiece("a", 108), TCSPiece("b", 0)]) == 108
    assert glued_singular_count([]) == 0
    with pytest.raises(ValueError):
        TCSPiece("a", -1)


def test_torsion_threshold():
    assert torsion_threshold(-1.0) == pytest.approx(math.log(2))
    assert torsion_threshold(-math.log(2)) == pytest.approx(1.0)
    T = torsion_threshold(-0.5)
    assert math.exp(-0.5 * T) == pytest.approx(1 - math.exp(-0.5 * T))
    with pytest.raises(ValueError):
        torsion_threshold(0.0)


def test_reference_betti_is_a_copy():
    betti = reference_betti()
    betti["b2"] = 99
    assert reference_betti() == {"b2": 0, "b3": 155}
