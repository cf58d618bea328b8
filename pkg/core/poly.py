#!/usr/bin/env python3
"""
Exact multivariate polynomial arithmetic with floating evaluation
Coefficients are complex rationals; evaluation converts them to complex doubles
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Dict, Mapping, Sequence, Tuple

import numpy as np

logger = logging.getLogger(__name__)

Exponent = Tuple[int, ...]


class DimensionMismatch(ValueError):
    """Raised when a point or index does not match a polynomial's variable count"""


def _as_fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, str):
        return Fraction(value.strip())
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10 ** 12)
    return Fraction(value)


@dataclass(frozen=True)
class ComplexRational:
    """Exact complex number re + i*im with rational parts"""

    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", _as_fraction(self.re))
        object.__setattr__(self, "im", _as_fraction(self.im))

    @classmethod
    def of(cls, value) -> "ComplexRational":
        if isinstance(value, ComplexRational):
            return value
        if isinstance(value, complex):
            return cls(value.real, value.imag)
        return cls(value, 0)

    def is_zero(self) -> bool:
        return self.re == 0 and self.im == 0

    def conjugate(self) -> "ComplexRational":
        return ComplexRational(self.re, -self.im)

    def __add__(self, other):
        other = ComplexRational.of(other)
        return ComplexRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return ComplexRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-ComplexRational.of(other))

    def __rsub__(self, other):
        return ComplexRational.of(other) - self

    def __mul__(self, other):
        other = ComplexRational.of(other)
        return ComplexRational(self.re * other.re - self.im * other.im,
                               self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = ComplexRational.of(other)
        norm = other.re * other.re + other.im * other.im
        if norm == 0:
            raise ZeroDivisionError("division by the zero complex rational")
        num = self * other.conjugate()
        return ComplexRational(num.re / norm, num.im / norm)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"({self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i)"


ZERO = ComplexRational(0, 0)
ONE = ComplexRational(1, 0)


@dataclass(frozen=True)
class Polynomial:
    """Multivariate polynomial with dense exponent vectors and exact coefficients"""

    num_vars: int
    terms: Mapping[Exponent, ComplexRational] = field(default_factory=dict)

    def __post_init__(self):
        if self.num_vars < 0:
            raise ValueError(f"num_vars must be non-negative, got {self.num_vars}")
        clean: Dict[Exponent, ComplexRational] = {}
        for exp, coeff in self.terms.items():
            exp = tuple(int(e) for e in exp)
            if len(exp) != self.num_vars:
                raise DimensionMismatch(
                    f"exponent {exp} has length {len(exp)}, expected {self.num_vars}")
            if any(e < 0 for e in exp):
                raise ValueError(f"negative exponent in {exp}")
            coeff = ComplexRational.of(coeff)
            total = clean.get(exp, ZERO) + coeff
            if total.is_zero():
                clean.pop(exp, None)
            else:
                clean[exp] = total
        object.__setattr__(self, "terms", dict(sorted(clean.items())))

    # -- constructors -----------------------------------------------------

    @classmethod
    def zero(cls, num_vars: int):
        return cls(num_vars, {})

    @classmethod
    def constant(cls, num_vars: int, value):
        return cls(num_vars, {(0,) * num_vars: value})

    @classmethod
    def monomial(cls, exponent: Sequence[int], coeff=1):
        return cls(len(exponent), {tuple(exponent): coeff})

    @classmethod
    def variable(cls, num_vars: int, i: int):
        exp = [0] * num_vars
        exp[i] = 1
        return cls(num_vars, {tuple(exp): 1})

    # -- structure ----------------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        """Total degree; -1 for the zero polynomial"""
        if not self.terms:
            return -1
        return max(sum(exp) for exp in self.terms)

    def is_homogeneous(self) -> bool:
        return len({sum(exp) for exp in self.terms}) <= 1

    def _check_index(self, i: int) -> None:
        if not 0 <= i < self.num_vars:
            raise IndexError(f"variable index {i} out of range for {self.num_vars} variables")

    def _wrap(self, terms):
        """Build a result of the same class when possible"""
        return _build(self.num_vars, terms)

    # -- arithmetic ---------------------------------------------------------

    def _same_ring(self, other: "Polynomial") -> None:
        if other.num_vars != self.num_vars:
            raise DimensionMismatch(
                f"cannot combine polynomials in {self.num_vars} and {other.num_vars} variables")

    def __add__(self, other):
        if not isinstance(other, Polynomial):
            other = Polynomial.constant(self.num_vars, other)
        self._same_ring(other)
        terms = dict(self.terms)
        for exp, coeff in other.terms.items():
            terms[exp] = terms.get(exp, ZERO) + coeff
        return self._wrap(terms)

    __radd__ = __add__

    def __neg__(self):
        return self._wrap({exp: -c for exp, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Polynomial):
            scalar = ComplexRational.of(other)
            return self._wrap({exp: c * scalar for exp, c in self.terms.items()})
        self._same_ring(other)
        terms: Dict[Exponent, ComplexRational] = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                exp = tuple(a + b for a, b in zip(e1, e2))
                terms[exp] = terms.get(exp, ZERO) + c1 * c2
        return self._wrap(terms)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        result = Polynomial.constant(self.num_vars, 1)
        for _ in range(n):
            result = result * self
        return result

    def __eq__(self, other):
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, tuple(self.terms.items())))

    # -- calculus -----------------------------------------------------------

    def partial_derivative(self, i: int) -> "Polynomial":
        """Formal partial derivative in variable i"""
        self._check_index(i)
        terms = {}
        for exp, coeff in self.terms.items():
            if exp[i] == 0:
                continue
            new_exp = list(exp)
            new_exp[i] -= 1
            terms[tuple(new_exp)] = coeff * exp[i]
        return self._wrap(terms)

    def dehomogenize(self, i: int) -> "Polynomial":
        """Substitute x_i = 1, dropping variable i"""
        self._check_index(i)
        terms: Dict[Exponent, ComplexRational] = {}
        for exp, coeff in self.terms.items():
            new_exp = exp[:i] + exp[i + 1:]
            terms[new_exp] = terms.get(new_exp, ZERO) + coeff
        return Polynomial(self.num_vars - 1, terms)

    def substitute(self, values: Mapping[int, object]) -> "Polynomial":
        """Substitute exact constants for some variables, keeping the variable count"""
        terms: Dict[Exponent, ComplexRational] = {}
        for exp, coeff in self.terms.items():
            new_exp = list(exp)
            for i, value in values.items():
                self._check_index(i)
                coeff = coeff * _power(ComplexRational.of(value), exp[i])
                new_exp[i] = 0
            key = tuple(new_exp)
            terms[key] = terms.get(key, ZERO) + coeff
        return Polynomial(self.num_vars, terms)

    # -- numerics -----------------------------------------------------------

    @cached_property
    def _arrays(self):
        if not self.terms:
            return np.zeros((0, self.num_vars), dtype=int), np.zeros(0, dtype=complex)
        exps = np.array(list(self.terms.keys()), dtype=int).reshape(len(self.terms), self.num_vars)
        coeffs = np.array([complex(c) for c in self.terms.values()], dtype=complex)
        return exps, coeffs

    def _point(self, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        if z.shape != (self.num_vars,):
            raise DimensionMismatch(
                f"point has shape {z.shape}, expected ({self.num_vars},)")
        return z

    def evaluate(self, z) -> complex:
        """Sum of coeff * prod z_i^e_i in complex double precision"""
        z = self._point(z)
        exps, coeffs = self._arrays
        if coeffs.size == 0:
            return 0j
        return complex(np.prod(z[np.newaxis, :] ** exps, axis=1) @ coeffs)

    def magnitude(self, z) -> float:
        """Sum of |coeff * monomial|, the floating scale of evaluate(z)"""
        z = self._point(z)
        exps, coeffs = self._arrays
        if coeffs.size == 0:
            return 0.0
        return float(np.abs(np.prod(z[np.newaxis, :] ** exps, axis=1) * coeffs).sum())

    def hessian(self, z, vars: Sequence[int]) -> np.ndarray:
        """Matrix of second partials over the listed variables, evaluated at z"""
        z = self._point(z)
        for i in vars:
            self._check_index(i)
        n = len(vars)
        result = np.zeros((n, n), dtype=complex)
        for a, i in enumerate(vars):
            first = self.partial_derivative(i)
            for b in range(a, n):
                value = first.partial_derivative(vars[b]).evaluate(z)
                result[a, b] = value
                result[b, a] = value
        return result

    # -- serialization ----------------------------------------------------

    def to_json(self) -> dict:
        return {
            "vars": self.num_vars,
            "terms": [{"exp": list(exp), "re": str(c.re), "im": str(c.im)}
                      for exp, c in self.terms.items()],
        }

    @classmethod
    def from_json(cls, data: Mapping) -> "Polynomial":
        num_vars = int(data["vars"])
        terms: Dict[Exponent, ComplexRational] = {}
        for term in data.get("terms", []):
            exp = tuple(int(e) for e in term["exp"])
            coeff = ComplexRational(term.get("re", "0"), term.get("im", "0"))
            terms[exp] = terms.get(exp, ZERO) + coeff
        return _build(num_vars, terms)

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for exp, coeff in self.terms.items():
            mono = "*".join(f"x{i}^{e}" if e > 1 else f"x{i}"
                            for i, e in enumerate(exp) if e)
            parts.append(f"{coeff}*{mono}" if mono else str(coeff))
        return " + ".join(parts)


class HomogeneousPoly(Polynomial):
    """Polynomial whose terms all share one total degree"""

    def __post_init__(self):
        super().__post_init__()
        if not self.is_homogeneous():
            degrees = sorted({sum(exp) for exp in self.terms})
            raise ValueError(f"terms of mixed degrees {degrees} in a homogeneous polynomial")


def _build(num_vars: int, terms) -> Polynomial:
    poly = Polynomial(num_vars, terms)
    if poly.is_homogeneous():
        return HomogeneousPoly(num_vars, poly.terms)
    return poly


def _power(base: ComplexRational, n: int) -> ComplexRational:
    result = ONE
    for _ in range(n):
        result = result * base
    return result


def variables(num_vars: int) -> Tuple[HomogeneousPoly, ...]:
    """The coordinate functions x_0, ..., x_{n-1}"""
    return tuple(HomogeneousPoly.variable(num_vars, i) for i in range(num_vars))


def numerical_rank(matrix, rel_tol: float) -> int:
    """Number of singular values above rel_tol times the largest"""
    matrix = np.atleast_2d(np.asarray(matrix, dtype=complex))
    if matrix.size == 0:
        return 0
    sv = np.linalg.svd(matrix, compute_uv=False)
    if sv[0] == 0:
        return 0
    return int(np.sum(sv > rel_tol * sv[0]))


@dataclass(frozen=True)
class ProjectivePoint:
    """Point of CP^(n-1), normalized so its largest-modulus coordinate equals 1"""

    coords: Tuple[complex, ...]

    def __post_init__(self):
        z = np.asarray(self.coords, dtype=complex)
        if z.ndim != 1 or z.size == 0:
            raise ValueError("projective point needs a non-empty coordinate vector")
        k = int(np.argmax(np.abs(z)))
        if abs(z[k]) == 0:
            raise ValueError("all coordinates are zero")
        object.__setattr__(self, "coords", tuple(complex(c) for c in z / z[k]))

    @property
    def num_vars(self) -> int:
        return len(self.coords)

    def array(self) -> np.ndarray:
        return np.array(self.coords, dtype=complex)

    def affine(self, i: int) -> np.ndarray:
        """Representative with x_i = 1"""
        z = self.array()
        if abs(z[i]) == 0:
            raise ZeroDivisionError(f"coordinate {i} vanishes; chart undefined")
        return z / z[i]

    def chordal_distance(self, other: "ProjectivePoint") -> float:
        """|u ^ v| for unit representatives u, v, i.e. sqrt(1 - |<u, v>|^2)"""
        if other.num_vars != self.num_vars:
            raise DimensionMismatch(f"points of CP^{self.num_vars - 1} and CP^{other.num_vars - 1}")
        u = self.array()
        v = other.array()
        u = u / np.linalg.norm(u)
        v = v / np.linalg.norm(v)
        # the wedge form stays accurate for nearby points
        minors = np.outer(u, v) - np.outer(v, u)
        return float(np.sqrt(0.5 * np.sum(np.abs(minors) ** 2)))

