#!/usr/bin/env python3
"""
Twisted-connected-sum bookkeeping

Forms on the neck are handled symbolically: dt, dtheta_a, dtheta_b are
degree-1 generators, the hyperkaehler triples w1, w2, w3 of either K3
end are degree-2 symbols. Swapping adjacent generators of degrees p and q
costs (-1)^(pq).
"""

import logging
import math
from dataclasses import dataclass, field
from typing import Dict, Iterable, List, Mapping, Sequence, Tuple

from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from utils.constants import REFERENCE_BETTI, SWAP_MATRIX

logger = logging.getLogger(__name__)

ONE_FORMS = ("dt", "dtheta_a", "dtheta_b")
TWO_FORMS = tuple(f"w{i}{side}" for side in ("+", "-") for i in (1, 2, 3))
GENERATOR_ORDER = ONE_FORMS + TWO_FORMS
DEGREE = {g: 1 for g in ONE_FORMS} | {g: 2 for g in TWO_FORMS}

Word = Tuple[str, ...]


def _normalize(word: Sequence[str]) -> Tuple[int, Word]:
    """Sort a wedge word into generator order; sign 0 when a 1-form repeats"""
    word = list(word)
    for g in word:
        if g not in DEGREE:
            raise ValueError(f"unknown generator {g!r}")
    sign = 1
    for i in range(len(word)):
        for j in range(len(word) - 1 - i):
            a, b = word[j], word[j + 1]
            if GENERATOR_ORDER.index(a) > GENERATOR_ORDER.index(b):
                word[j], word[j + 1] = b, a
                if DEGREE[a] * DEGREE[b] % 2:
                    sign = -sign
    for a, b in zip(word, word[1:]):
        if a == b and DEGREE[a] == 1:
            return 0, ()
    return sign, tuple(word)


@dataclass(frozen=True)
class FormalForm:
    terms: Mapping[Word, int] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Word, int] = {}
        for word, c in self.terms.items():
            sign, key = _normalize(word)
            if sign:
                clean[key] = clean.get(key, 0) + sign * c
        object.__setattr__(self, "terms", {k: v for k, v in sorted(clean.items()) if v})

    @classmethod
    def generator(cls, name: str, coeff: int = 1) -> "FormalForm":
        return cls({(name,): coeff})

    @classmethod
    def wedge_word(cls, *names: str, coeff: int = 1) -> "FormalForm":
        return cls({tuple(names): coeff})

    def __add__(self, other: "FormalForm") -> "FormalForm":
        terms = dict(self.terms)
        for w, c in other.terms.items():
            terms[w] = terms.get(w, 0) + c
        return FormalForm(terms)

    def __neg__(self) -> "FormalForm":
        return FormalForm({w: -c for w, c in self.terms.items()})

    def wedge(self, other: "FormalForm") -> "FormalForm":
        terms: Dict[Word, int] = {}
        for w1, c1 in self.terms.items():
            for w2, c2 in other.terms.items():
                sign, key = _normalize(w1 + w2)
                if sign:
                    terms[key] = terms.get(key, 0) + sign * c1 * c2
        return FormalForm(terms)

    def substitute(self, mapping: Mapping[str, "FormalForm"]) -> "FormalForm":
        """Pull back generator by generator; unmapped generators are fixed"""
        result = FormalForm()
        for word, c in self.terms.items():
            term = FormalForm({(): c})
            for g in word:
                term = term.wedge(mapping.get(g, FormalForm.generator(g)))
            result = result + term
        return result

    def __str__(self):
        if not self.terms:
            return "0"
        return " ".join(f"{c:+d} " + "^".join(w) for w, c in self.terms.items())


def phi_infinity(side: str) -> FormalForm:
    """dtheta_a^dt^dtheta_b + dtheta_a^w1 + dtheta_b^w2 + dt^w3 on the given end"""
    if side not in ("+", "-"):
        raise ValueError(f"side must be '+' or '-', got {side!r}")
    return (FormalForm.wedge_word("dtheta_a", "dt", "dtheta_b")
            + FormalForm.wedge_word("dtheta_a", f"w1{side}")
            + FormalForm.wedge_word("dtheta_b", f"w2{side}")
            + FormalForm.wedge_word("dt", f"w3{side}"))


def _gluing_part(flip_dt: bool = True) -> Dict[str, FormalForm]:
    """t -> 2T + 1 - t and the circle swap theta_a <-> theta_b"""
    return {
        "dt": FormalForm.generator("dt", -1 if flip_dt else 1),
        "dtheta_a": FormalForm.generator("dtheta_b"),
        "dtheta_b": FormalForm.generator("dtheta_a"),
    }


def _symmetric(pairs: Mapping[Tuple[int, str], Tuple[int, str, int]]) -> Dict[str, FormalForm]:
    """K3 part acting on both ends: w(i)- -> sign w(j)+ together with w(j)+ -> sign w(i)-"""
    mapping = {}
    for (i, src), (j, dst, sign) in pairs.items():
        mapping[f"w{i}{src}"] = FormalForm.generator(f"w{j}{dst}", sign)
        mapping.setdefault(f"w{j}{dst}", FormalForm.generator(f"w{i}{src}", sign))
    return mapping


def rotation_substitution() -> Dict[str, FormalForm]:
    """Hyperkaehler rotation: w1- -> w2+, w2- -> w1+, w3- -> -w3+"""
    return _gluing_part() | _symmetric({(1, "-"): (2, "+", 1), (2, "-"): (1, "+", 1),
                                        (3, "-"): (3, "+", -1)})


def literal_substitution() -> Dict[str, FormalForm]:
    """w1- -> w2+, w2- -> w2+, w3- -> -w3+ read at face value"""
    mapping = _gluing_part()
    mapping["w1-"] = FormalForm.generator("w2+")
    mapping["w2-"] = FormalForm.generator("w2+")
    mapping["w3-"] = FormalForm.generator("w3+", -1)
    return mapping


def identity_substitution() -> Dict[str, FormalForm]:
    """Gluing map with the K3 ends identified without rotation"""
    return _gluing_part() | _symmetric({(i, "-"): (i, "+", 1) for i in (1, 2, 3)})


def no_dt_flip_substitution() -> Dict[str, FormalForm]:
    return rotation_substitution() | _gluing_part(flip_dt=False)


def neck_form_matching(substitution: Mapping[str, FormalForm] = None) -> bool:
    """Whether the gluing pulls phi_inf,- back to phi_inf,+ exactly"""
    substitution = rotation_substitution() if substitution is None else substitution
    return phi_infinity("-").substitute(substitution) == phi_infinity("+")


def matching_verdicts() -> Dict[str, bool]:
    verdicts = {
        "rotation": neck_form_matching(rotation_substitution()),
        "literal": neck_form_matching(literal_substitution()),
        "identity": neck_form_matching(identity_substitution()),
        "no_dt_flip": neck_form_matching(no_dt_flip_substitution()),
    }
    if not verdicts["literal"]:
        logger.warning("Matching with w2- -> w2+ taken literally fails; the rotation w2- -> w1+ is used")
    return verdicts


# -- base gluing ------------------------------------------------------------------------

@dataclass(frozen=True)
class GluingMatrix:
    a: Tuple[Tuple[int, int], Tuple[int, int]]

    def __post_init__(self):
        try:
            a = tuple(tuple(int(x) for x in row) for row in self.a)
        except (TypeError, ValueError):
            raise ValueError(f"gluing matrix must have integer entries, got {self.a}")
        if len(a) != 2 or any(len(row) != 2 for row in a):
            raise ValueError(f"gluing matrix must be 2x2, got {self.a}")
        det = a[0][0] * a[1][1] - a[0][1] * a[1][0]
        if abs(det) != 1:
            raise ValueError(f"gluing matrix must have determinant +-1, got {det}")
        object.__setattr__(self, "a", a)

    @classmethod
    def parse(cls, text: str) -> "GluingMatrix":
        """'0,1,1,0' in row-major order"""
        entries = [int(x) for x in text.replace(" ", "").split(",") if x]
        if len(entries) != 4:
            raise ValueError(f"expected four comma-separated entries, got {text!r}")
        return cls(((entries[0], entries[1]), (entries[2], entries[3])))

    @classmethod
    def swap(cls) -> "GluingMatrix":
        return cls(SWAP_MATRIX)

    def image_of_meridian(self) -> Tuple[int, int]:
        return self.a[0][0], self.a[1][0]


def torus_gluing_homology(g: GluingMatrix) -> List[int]:
    """Invariant factors of Z^2 / <m, g m>, m = (1, 0); 0 stands for a free Z summand"""
    relations = Matrix([[1, 0], list(g.image_of_meridian())])
    snf = smith_normal_form(relations, domain=ZZ)
    factors = [abs(int(snf[i, i])) for i in range(2)]
    return sorted(f for f in factors if f != 1)


# -- counts and the torsion threshold -------------------------------------------------------

@dataclass(frozen=True)
class TCSPiece:
    label: str
    singular_fiber_count: int

    def __post_init__(self):
        if self.singular_fiber_count < 0:
            raise ValueError(f"singular fiber count must be non-negative, got {self.singular_fiber_count}")


def quartic_piece(report, label: str = "quartic") -> TCSPiece:
    """Building block piece carrying a quartic solve's singular-fiber count"""
    return TCSPiece(label, report.count)


def glued_singular_count(pieces: Iterable[TCSPiece]) -> int:
    return sum(p.singular_fiber_count for p in pieces)


def torsion_threshold(lam: float) -> float:
    """T with e^(lambda T) = 1 - e^(lambda T); the estimate holds for every larger T"""
    if lam >= 0:
        raise ValueError(f"lambda must be negative, got {lam}")
    return math.log(2.0) / (-lam)


def reference_betti() -> Dict[str, int]:
    return dict(REFERENCE_BETTI)
