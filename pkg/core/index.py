#!/usr/bin/env python3
"""
Fredholm index bookkeeping for Cayley operators

The index of the linearized operator on a weighted space is constant
between critical rates. Crossing a critical rate upward changes it by the
multiplicity d(rate): up on the asymptotically conical side, down on the
conically singular side, not at all on a compact submanifold.
"""

import json
import logging
from dataclasses import dataclass
from enum import Enum
from pathlib import Path
from typing import Iterable, List, Mapping, Sequence, Tuple, Union

import sympy

from utils.constants import QUADRIC_SPECTRUM, SIMPLE_INDEX

logger = logging.getLogger(__name__)

Rate = sympy.Expr


class CriticalRateError(ValueError):
    """A rate required to be non-critical lies in the spectrum"""


class Side(Enum):
    CS = "CS"
    AC = "AC"
    COMPACT = "COMPACT"

    @classmethod
    def parse(cls, value: Union[str, "Side"]) -> "Side":
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).upper())
        except ValueError:
            raise ValueError(f"side must be one of CS, AC, COMPACT, got {value!r}")


def as_rate(value) -> Rate:
    """Exact for integers, fractions and strings like '-1 + sqrt(5)'; Float otherwise"""
    if isinstance(value, sympy.Basic):
        return value
    if isinstance(value, bool):
        raise ValueError(f"not a rate: {value!r}")
    if isinstance(value, int):
        return sympy.Integer(value)
    if isinstance(value, float):
        return sympy.Float(value)
    try:
        rate = sympy.sympify(str(value), rational=True)
    except (sympy.SympifyError, SyntaxError, TypeError) as e:
        raise ValueError(f"cannot parse rate {value!r}: {e}")
    if not rate.is_real:
        raise ValueError(f"rate {value!r} is not a real number")
    return rate


def _less(a: Rate, b: Rate) -> bool:
    return bool(sympy.simplify(a - b).is_negative) if not (a.is_Float or b.is_Float) \
        else float(a) < float(b)


def _equal(a: Rate, b: Rate) -> bool:
    if a.is_Float or b.is_Float:
        return float(a) == float(b)
    return sympy.simplify(a - b) == 0


@dataclass(frozen=True)
class RateSpectrum:
    entries: Tuple[Tuple[Rate, int], ...]

    def __post_init__(self):
        entries = tuple((as_rate(r), int(m)) for r, m in self.entries)
        for rate, mult in entries:
            if mult < 1:
                raise ValueError(f"multiplicity of rate {rate} must be >= 1, got {mult}")
        for (r1, _), (r2, _) in zip(entries, entries[1:]):
            if not _less(r1, r2):
                raise ValueError(f"rates must be strictly increasing: {r1} then {r2}")
        object.__setattr__(self, "entries", entries)

    @property
    def rates(self) -> List[Rate]:
        return [r for r, _ in self.entries]

    def multiplicity(self, rate) -> int:
        rate = as_rate(rate)
        for r, m in self.entries:
            if _equal(r, rate):
                return m
        return 0

    def is_critical(self, rate) -> bool:
        return self.multiplicity(rate) > 0

    def crossed(self, lo, hi) -> List[Tuple[Rate, int]]:
        """Entries with lo < rate < hi"""
        lo, hi = as_rate(lo), as_rate(hi)
        return [(r, m) for r, m in self.entries if _less(lo, r) and _less(r, hi)]

    def total_multiplicity(self, lo=None, hi=None) -> int:
        if lo is None and hi is None:
            return sum(m for _, m in self.entries)
        return sum(m for _, m in self.crossed(lo, hi))

    def to_json(self) -> dict:
        return {"rates": [{"rate": str(r), "mult": m} for r, m in self.entries]}

    @classmethod
    def from_json(cls, data: Mapping) -> "RateSpectrum":
        try:
            rows = data["rates"]
            entries = [(row["rate"], row["mult"]) for row in rows]
        except (KeyError, TypeError) as e:
            raise ValueError(f"malformed spectrum JSON: {e}")
        return cls(tuple(entries))

    @classmethod
    def load(cls, path: Union[str, Path]) -> "RateSpectrum":
        with open(path, "r") as f:
            return cls.from_json(json.load(f))


@dataclass(frozen=True)
class IndexProblem:
    side: Side
    base_rate: Rate
    base_index: int

    def __post_init__(self):
        object.__setattr__(self, "side", Side.parse(self.side))
        object.__setattr__(self, "base_rate", as_rate(self.base_rate))
        object.__setattr__(self, "base_index", int(self.base_index))


@dataclass(frozen=True)
class TopologicalData:
    sigma: int
    chi: int
    self_int: int
    dim_family: int = 0


def quadric_spectrum() -> RateSpectrum:
    """Critical rates of the quadric cone on (-2, 2)"""
    return RateSpectrum(tuple(QUADRIC_SPECTRUM))


def index_at(prob: IndexProblem, spectrum: RateSpectrum, target_rate) -> int:
    target = as_rate(target_rate)
    if spectrum.is_critical(prob.base_rate):
        raise CriticalRateError(f"base rate {prob.base_rate} is critical")
    if spectrum.is_critical(target):
        raise CriticalRateError(f"target rate {target} is critical")
    if prob.side is Side.COMPACT:
        return prob.base_index
    if _less(prob.base_rate, target):
        change = spectrum.total_multiplicity(prob.base_rate, target)
    else:
        change = -spectrum.total_multiplicity(target, prob.base_rate)
    sign = 1 if prob.side is Side.AC else -1
    result = prob.base_index + sign * change
    logger.debug(f"{prob.side.value} index {prob.base_index} at {prob.base_rate} -> {result} at {target}")
    return result


def compact_index(t: TopologicalData) -> int:
    """(sigma + chi)/2 - [N].[N] + dim S"""
    if (t.sigma + t.chi) % 2:
        raise ValueError(f"sigma + chi must be even, got {t.sigma} + {t.chi}")
    return (t.sigma + t.chi) // 2 - t.self_int + t.dim_family


def virtual_dimension_flag(value: int) -> str:
    return "negative virtual dimension" if value < 0 else "ok"


def cs_index_by_gluing(ind_F: int, ind_AC_list: Sequence[int]) -> int:
    result = ind_F - sum(ind_AC_list)
    if result < 0:
        logger.warning(f"Gluing {len(ind_AC_list)} AC pieces into index {ind_F}: "
                       f"{virtual_dimension_flag(result)} ({result})")
    return result


def is_semistable(spectrum: RateSpectrum) -> bool:
    """No critical rate strictly between the translations at 0 and the rotations at 1"""
    return not spectrum.crossed(0, 1)


def critical_weight_zeta(spectrum: RateSpectrum) -> Rate:
    negative = [r for r in spectrum.rates if _less(r, sympy.Integer(0))]
    if not negative:
        raise ValueError("spectrum has no negative rate")
    return negative[-1]


def is_simple(spectrum: RateSpectrum, index_below_zeta: int) -> bool:
    critical_weight_zeta(spectrum)
    return index_below_zeta == SIMPLE_INDEX


def spectrum_from_pairs(pairs: Iterable[Tuple[object, int]]) -> RateSpectrum:
    return RateSpectrum(tuple(sorted(((as_rate(r), m) for r, m in pairs), key=lambda e: float(e[0]))))
