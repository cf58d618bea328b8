#!/usr/bin/env python3
"""
Tests for the Fredholm index bookkeeping
"""

import json

import pytest
import sympy

from core.index import (
    CriticalRateError, IndexProblem, RateSpectrum, Side, TopologicalData, as_rate, compact_index,
    critical_weight_zeta, cs_index_by_gluing, index_at, is_semistable, is_simple, quadric_spectrum,
    spectrum_from_pairs, virtual_dimension_flag,
)


def test_quadric_spectrum_values():
    spectrum = quadric_spectrum()
    assert spectrum.multiplicity(-1) == 2
    assert spectrum.multiplicity(0) == 8
    assert spectrum.multiplicity(1) == 22
    assert spectrum.multiplicity("-1 + sqrt(5)") == 6
    assert spectrum.multiplicity("1/2") == 0
    assert spectrum.total_multiplicity() == 38


def test_irrational_rate_sorts_between_zero_and_one_and_a_half():
    rates = quadric_spectrum().rates
    assert rates[-1] == -1 + sympy.sqrt(5)
    assert 1 < float(rates[-1]) < 1.5


def test_spectrum_must_increase():
    with pytest.raises(ValueError):
        RateSpectrum((("1", 2), ("0", 1)))
    with pytest.raises(ValueError):
        RateSpectrum((("0", 0),))


def test_as_rate_rejects_garbage():
    with pytest.raises(ValueError):
        as_rate("not a rate")
    with pytest.raises(ValueError):
        as_rate("I")


def test_ac_crossing_of_zero():
    prob = IndexProblem(Side.AC, "-1/2", 2)
    assert index_at(prob, quadric_spectrum(), "1/2") == 10


def test_cs_crossing_subtracts():
    prob = IndexProblem("CS", "1/2", 10)
    assert index_at(prob, quadric_spectrum(), "-1/2") == 18
    assert index_at(IndexProblem("CS", "-1/2", 4), quadric_spectrum(), "1/2") == -4


def test_crossing_down_reverses_the_change():
    prob = IndexProblem(Side.AC, "1/2", 10)
    assert index_at(prob, quadric_spectrum(), "-1/2") == 2


GRID = ["-3/2", "-11/10", "-1/2", "1/2", "11/10", "3/2", "19/10"]


@pytest.mark.parametrize("side", [Side.AC, Side.CS])
def test_index_is_transitive(side):
    spectrum = quadric_spectrum()
    for r1 in GRID:
        for r2 in GRID:
            mid = index_at(IndexProblem(side, r1, 7), spectrum, r2)
            for r3 in GRID:
                via = index_at(IndexProblem(side, r2, mid), spectrum, r3)
                assert via == index_at(IndexProblem(side, r1, 7), spectrum, r3)


def test_index_is_monotone_in_the_rate():
    spectrum = quadric_spectrum()
    ac = [index_at(IndexProblem(Side.AC, GRID[0], 0), spectrum, r) for r in GRID]
    cs = [index_at(IndexProblem(Side.CS, GRID[0], 0), spectrum, r) for r in GRID]
    assert ac == sorted(ac)
    assert cs == sorted(cs, reverse=True)
    assert ac == [-c for c in cs]


def test_crossing_the_whole_window_jumps_by_32():
    spectrum = quadric_spectrum()
    assert index_at(IndexProblem(Side.AC, "-11/10", 0), spectrum, "11/10") == 32
    assert index_at(IndexProblem(Side.CS, "-11/10", 0), spectrum, "11/10") == -32
    assert index_at(IndexProblem(Side.AC, "11/10", 0), spectrum, "-11/10") == -32


def test_compact_index_is_constant():
    prob = IndexProblem(Side.COMPACT, "-1/2", 4)
    assert index_at(prob, quadric_spectrum(), "3/2") == 4


def test_critical_rates_are_rejected():
    with pytest.raises(CriticalRateError):
        index_at(IndexProblem(Side.AC, "0", 2), quadric_spectrum(), "1/2")
    with pytest.raises(CriticalRateError):
        index_at(IndexProblem(Side.AC, "-1/2", 2), quadric_spectrum(), "-1 + sqrt(5)")


def test_crossing_the_irrational_rate():
    prob = IndexProblem(Side.AC, "11/10", 0)
    assert index_at(prob, quadric_spectrum(), "3/2") == 6


def test_compact_index_of_k3_fibre():
    assert compact_index(TopologicalData(-16, 24, 0)) == 4
    assert compact_index(TopologicalData(-16, 24, 0, 2)) == 6
    with pytest.raises(ValueError):
        compact_index(TopologicalData(-16, 23, 0))


def test_gluing_bookkeeping():
    assert cs_index_by_gluing(4, [2]) == 2
    assert cs_index_by_gluing(4, [2, 2]) == 0
    assert cs_index_by_gluing(4, []) == 4
    assert cs_index_by_gluing(4, [2, 2, 2]) == -2
    assert virtual_dimension_flag(-2) == "negative virtual dimension"
    assert virtual_dimension_flag(0) == "ok"


def test_semistability():
    assert is_semistable(quadric_spectrum())
    assert not is_semistable(spectrum_from_pairs([("1/2", 1), (-1, 2)]))


def test_critical_weight_and_simplicity():
    spectrum = quadric_spectrum()
    assert critical_weight_zeta(spectrum) == -1
    assert is_simple(spectrum, 4)
    assert not is_simple(spectrum, 2)
    with pytest.raises(ValueError):
        critical_weight_zeta(spectrum_from_pairs([(1, 1)]))


def test_side_parse():
    assert Side.parse("ac") is Side.AC
    with pytest.raises(ValueError):
        Side.parse("left")


def test_spectrum_file_round_trip(tmp_path):
    path = tmp_path / "spectrum.json"
    path.write_text(json.dumps(quadric_spectrum().to_json()))
    assert RateSpectrum.load(path) == quadric_spectrum()


def test_malformed_spectrum_json():
    with pytest.raises(ValueError):
        RateSpectrum.from_json({"rates": [{"mult": 2}]})
