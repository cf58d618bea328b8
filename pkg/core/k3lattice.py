#!/usr/bin/env python3
"""
K3 lattice and period-domain computations

Lambda = H^2(K3, Z) is realized as U + U + U + E8(-1) + E8(-1) with basis
labels e1, f1, e2, f2, e3, f3, a1..a8, b1..b8. Vectors carry exact
rationals when built from integers; floating comparisons use an absolute
tolerance.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

from utils.constants import E8_CARTAN, LATTICE_TOL, MAX_DENOMINATOR

logger = logging.getLogger(__name__)


class NotNegativeDefinite(ValueError):
    """A restricted Gram matrix was required to be negative definite"""


# -- lattices ------------------------------------------------------------------

@dataclass(frozen=True)
class GramLattice:
    gram: Tuple[Tuple[int, ...], ...]
    labels: Tuple[str, ...] = ()

    def __post_init__(self):
        gram = tuple(tuple(int(x) for x in row) for row in self.gram)
        n = len(gram)
        if any(len(row) != n for row in gram):
            raise ValueError("Gram matrix must be square")
        for i, j in itertools.combinations(range(n), 2):
            if gram[i][j] != gram[j][i]:
                raise ValueError(f"Gram matrix not symmetric at ({i}, {j})")
        labels = tuple(self.labels) or tuple(f"v{i}" for i in range(n))
        if len(labels) != n:
            raise ValueError(f"{len(labels)} labels for a rank-{n} lattice")
        object.__setattr__(self, "gram", gram)
        object.__setattr__(self, "labels", labels)

    @property
    def rank(self) -> int:
        return len(self.gram)

    def matrix(self) -> np.ndarray:
        return np.array(self.gram, dtype=np.int64).reshape(self.rank, self.rank)

    def signature(self) -> Tuple[int, int]:
        """(positive, negative) index of inertia"""
        if self.rank == 0:
            return 0, 0
        eig = np.linalg.eigvalsh(self.matrix().astype(float))
        return int(np.sum(eig > 1e-9)), int(np.sum(eig < -1e-9))

    def determinant(self) -> int:
        if self.rank == 0:
            return 1
        return int(Matrix(self.gram).det())

    def is_even(self) -> bool:
        return all(self.gram[i][i] % 2 == 0 for i in range(self.rank))

    def index(self, label: str) -> int:
        return self.labels.index(label)

    def vector(self, combination: Mapping[str, int]) -> "LatticeVector":
        """Integer vector from a {label: coefficient} combination"""
        coords = [0] * self.rank
        for label, c in combination.items():
            coords[self.index(label)] += int(c)
        return LatticeVector(tuple(coords))

    def to_json(self) -> dict:
        return {"gram": [list(row) for row in self.gram], "labels": list(self.labels)}

    @classmethod
    def from_json(cls, data: Mapping) -> "GramLattice":
        return cls(tuple(tuple(row) for row in data["gram"]), tuple(data.get("labels", ())))


def hyperbolic_plane(suffix: str = "") -> GramLattice:
    return GramLattice(((0, 1), (1, 0)), (f"e{suffix}", f"f{suffix}"))


def e8_negative(prefix: str = "a") -> GramLattice:
    gram = tuple(tuple(-x for x in row) for row in E8_CARTAN)
    return GramLattice(gram, tuple(f"{prefix}{i + 1}" for i in range(8)))


def direct_sum(*lattices: GramLattice) -> GramLattice:
    n = sum(L.rank for L in lattices)
    gram = [[0] * n for _ in range(n)]
    labels: List[str] = []
    offset = 0
    for L in lattices:
        for i in range(L.rank):
            for j in range(L.rank):
                gram[offset + i][offset + j] = L.gram[i][j]
        labels.extend(L.labels)
        offset += L.rank
    return GramLattice(tuple(map(tuple, gram)), tuple(labels))


def k3_lattice() -> GramLattice:
    """U^3 + E8(-1)^2, the rank-22 K3 lattice"""
    return direct_sum(hyperbolic_plane("1"), hyperbolic_plane("2"), hyperbolic_plane("3"),
                      e8_negative("a"), e8_negative("b"))


# -- vectors ---------------------------------------------------------------------

@dataclass(frozen=True)
class LatticeVector:
    coords: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coords", tuple(int(c) for c in self.coords))

    def __neg__(self):
        return LatticeVector(tuple(-c for c in self.coords))

    def __add__(self, other):
        return LatticeVector(tuple(a + b for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        return self + (-other)

    def scaled(self, k: int) -> "LatticeVector":
        return LatticeVector(tuple(k * c for c in self.coords))

    def to_real(self) -> "RealVector":
        return RealVector(tuple(Fraction(c) for c in self.coords))


@dataclass(frozen=True)
class RealVector:
    coords: Tuple

    def __neg__(self):
        return RealVector(tuple(-c for c in self.coords))

    def __add__(self, other):
        return RealVector(tuple(a + b for a, b in zip(self.coords, _coords(other))))

    def __sub__(self, other):
        return self + (-as_real(other))

    def scaled(self, k) -> "RealVector":
        return RealVector(tuple(k * c for c in self.coords))

    def to_json(self) -> list:
        return [str(c) if isinstance(c, Fraction) else c for c in self.coords]


def as_real(v) -> RealVector:
    if isinstance(v, RealVector):
        return v
    if isinstance(v, LatticeVector):
        return v.to_real()
    return RealVector(tuple(_parse_number(c) for c in v))


def _parse_number(c):
    if isinstance(c, str):
        return Fraction(c)
    if isinstance(c, int):
        return Fraction(c)
    return c


def _coords(v) -> Tuple:
    return v.coords if isinstance(v, (RealVector, LatticeVector)) else tuple(v)


def inner(L: GramLattice, v, w):
    """v^T G w; exact when both vectors are exact"""
    a, b = _coords(v), _coords(w)
    if len(a) != L.rank or len(b) != L.rank:
        raise ValueError(f"vectors of length {len(a)}, {len(b)} in a rank-{L.rank} lattice")
    total = 0
    for i, ai in enumerate(a):
        if ai == 0:
            continue
        row = L.gram[i]
        for j, bj in enumerate(b):
            if row[j] and bj:
                total += ai * row[j] * bj
    return total


def norm(L: GramLattice, v):
    return inner(L, v, v)


# -- integer linear algebra -----------------------------------------------------------

def integer_kernel(rows: Sequence[Sequence[int]], n: Optional[int] = None) -> List[LatticeVector]:
    """Z-basis of {x in Z^n : rows . x = 0} by unimodular column reduction"""
    A = [[int(x) for x in row] for row in rows]
    if n is None:
        n = len(A[0]) if A else 0
    U = [[int(i == j) for j in range(n)] for i in range(n)]

    def swap(c1, c2):
        for M in (A, U):
            for row in M:
                row[c1], row[c2] = row[c2], row[c1]

    def subtract(target, source, q):
        for M in (A, U):
            for row in M:
                row[target] -= q * row[source]

    p = 0
    for i in range(len(A)):
        if p >= n:
            break
        while True:
            nonzero = [c for c in range(p, n) if A[i][c] != 0]
            if not nonzero:
                break
            k = min(nonzero, key=lambda c: abs(A[i][c]))
            swap(k, p)
            reduced = True
            for c in range(p + 1, n):
                if A[i][c]:
                    subtract(c, p, A[i][c] // A[i][p])
                    if A[i][c]:
                        reduced = False
            if reduced:
                break
        if p < n and A[i][p] != 0:
            p += 1
    return [LatticeVector(tuple(U[r][c] for r in range(n))) for c in range(p, n)]


def lll_reduce(gram: np.ndarray, delta: float = 0.99) -> np.ndarray:
    """Unimodular T such that the columns of T form an LLL-reduced basis for gram"""
    Q = np.asarray(gram, dtype=np.int64)
    k = Q.shape[0]
    T = np.eye(k, dtype=np.int64)
    if k < 2:
        return T

    def gso(G):
        mu = np.zeros((k, k))
        bn = np.zeros(k)
        for i in range(k):
            for j in range(i):
                mu[i, j] = (G[i, j] - np.sum(mu[j, :j] * mu[i, :j] * bn[:j])) / bn[j]
            bn[i] = G[i, i] - np.sum(mu[i, :i] ** 2 * bn[:i])
        return mu, bn

    i = 1
    while i < k:
        mu, bn = gso((T.T @ Q @ T).astype(float))
        for j in range(i - 1, -1, -1):
            q = int(round(mu[i, j]))
            if q:
                T[:, i] -= q * T[:, j]
                mu[i, :j] -= q * mu[j, :j]
                mu[i, j] -= q
        if bn[i] >= (delta - mu[i, i - 1] ** 2) * bn[i - 1]:
            i += 1
        else:
            T[:, [i - 1, i]] = T[:, [i, i - 1]]
            i = max(i - 1, 1)
    return T


def short_vectors(gram: np.ndarray, bound: int) -> List[Tuple[int, ...]]:
    """All nonzero x with x^T Q x <= bound for positive definite integer Q (Fincke-Pohst)"""
    Q = np.asarray(gram, dtype=np.int64)
    k = Q.shape[0]
    if k == 0:
        return []
    R = np.linalg.cholesky(Q.astype(float)).T  # Q = R^T R, R upper triangular
    qd = np.diag(R) ** 2
    qo = R / np.diag(R)[:, None]
    eps = 1e-9 * max(1.0, bound)
    found: List[Tuple[int, ...]] = []
    x = [0] * k

    def descend(i: int, remaining: float):
        center = -sum(qo[i, j] * x[j] for j in range(i + 1, k))
        radius = math.sqrt(max(remaining, 0.0) / qd[i])
        for v in range(math.ceil(center - radius - eps), math.floor(center + radius + eps) + 1):
            used = qd[i] * (v - center) ** 2
            if used > remaining + eps:
                continue
            x[i] = v
            if i == 0:
                found.append(tuple(x))
            else:
                descend(i - 1, remaining - used)
        x[i] = 0

    descend(k - 1, float(bound))
    result = []
    for vec in found:
        if any(vec):
            arr = np.array(vec, dtype=np.int64)
            if int(arr @ Q @ arr) <= bound:
                result.append(vec)
    return result


def _restricted_gram(L: GramLattice, basis: Sequence[LatticeVector]) -> np.ndarray:
    k = len(basis)
    G = np.zeros((k, k), dtype=np.int64)
    for i, j in itertools.product(range(k), repeat=2):
        G[i, j] = inner(L, basis[i], basis[j])
    return G


def is_negative_definite(gram: np.ndarray) -> bool:
    if gram.size == 0:
        return True
    return bool(np.all(np.linalg.eigvalsh(gram.astype(float)) < -1e-9))


# -- embeddings -------------------------------------------------------------------

@dataclass(frozen=True)
class SublatticeEmbedding:
    basis: Tuple[LatticeVector, ...]

    def __post_init__(self):
        object.__setattr__(self, "basis", tuple(
            v if isinstance(v, LatticeVector) else LatticeVector(tuple(v)) for v in self.basis))

    @property
    def rank(self) -> int:
        return len(self.basis)

    def matrix(self) -> Matrix:
        """Basis vectors as columns"""
        return Matrix([list(v.coords) for v in self.basis]).T

    def to_json(self) -> list:
        return [list(v.coords) for v in self.basis]

    @classmethod
    def from_json(cls, data: Sequence[Sequence[int]]) -> "SublatticeEmbedding":
        return cls(tuple(LatticeVector(tuple(v)) for v in data))


def is_primitive_embedding(L: GramLattice, emb: SublatticeEmbedding) -> bool:
    """Lambda/N torsion-free: all Smith invariant factors of the basis equal 1"""
    if emb.rank == 0:
        return True
    if any(len(v.coords) != L.rank for v in emb.basis):
        raise ValueError(f"embedding vectors must have length {L.rank}")
    M = emb.matrix()
    if M.rank() < emb.rank:
        raise ValueError("embedding basis vectors are linearly dependent")
    snf = smith_normal_form(M, domain=ZZ)
    factors = [abs(int(snf[i, i])) for i in range(min(snf.shape)) if snf[i, i] != 0]
    logger.debug(f"Smith invariant factors of embedding: {factors}")
    return all(f == 1 for f in factors)


def in_span(L: GramLattice, emb: SublatticeEmbedding, v, tol: float = LATTICE_TOL) -> bool:
    """Whether v lies in N (x) R"""
    if emb.rank == 0:
        return all(abs(c) <= tol for c in _coords(v))
    B = np.array([[float(c) for c in b.coords] for b in emb.basis]).T
    target = np.array([float(c) for c in _coords(v)])
    coeffs, *_ = np.linalg.lstsq(B, target, rcond=None)
    return bool(np.max(np.abs(B @ coeffs - target)) <= tol)


# -- period domains ------------------------------------------------------------------

def period_point_check(L: GramLattice, u_re, u_im, tol: float = LATTICE_TOL) -> bool:
    """u = u_re + i u_im satisfies u.u = 0 and u.conj(u) > 0"""
    rr = norm(L, u_re)
    ii = norm(L, u_im)
    ri = inner(L, u_re, u_im)
    return abs(rr - ii) <= tol and abs(ri) <= tol and rr + ii > tol


def in_polarised_domain(L: GramLattice, N: SublatticeEmbedding, u_re, u_im,
                        tol: float = LATTICE_TOL) -> bool:
    if not period_point_check(L, u_re, u_im, tol):
        return False
    return all(abs(inner(L, u, n)) <= tol for n in N.basis for u in (u_re, u_im))


@dataclass(frozen=True)
class RootEnumeration:
    roots: Tuple[LatticeVector, ...]
    complete: bool


def enumerate_roots_in_neg_def(L: GramLattice, complement_basis: Sequence[LatticeVector],
                               target: int = -2) -> List[LatticeVector]:
    """Every lambda in span_Z(basis) with lambda.lambda = target, for a negative definite span"""
    basis = [v if isinstance(v, LatticeVector) else LatticeVector(tuple(v)) for v in complement_basis]
    if not basis:
        return []
    G = _restricted_gram(L, basis)
    if not is_negative_definite(G):
        raise NotNegativeDefinite("restricted Gram matrix is not negative definite")
    T = lll_reduce(-G)
    reduced = -(T.T @ G @ T)
    B = np.array([v.coords for v in basis], dtype=np.int64).T @ T
    roots = set()
    for x in short_vectors(reduced, -target):
        xv = np.array(x, dtype=np.int64)
        if int(xv @ reduced @ xv) == -target:
            roots.add(tuple(int(c) for c in B @ xv))
    result = [LatticeVector(r) for r in sorted(roots)]
    logger.debug(f"Enumerated {len(result)} vectors of norm {target} in a rank-{len(basis)} span")
    return result


def enumerate_roots(L: GramLattice, basis: Sequence[LatticeVector], height: Optional[int] = None,
                    target: int = -2) -> RootEnumeration:
    """Complete on negative definite spans, a bounded box search otherwise"""
    basis = [v if isinstance(v, LatticeVector) else LatticeVector(tuple(v)) for v in basis]
    G = _restricted_gram(L, basis)
    if is_negative_definite(G):
        return RootEnumeration(tuple(enumerate_roots_in_neg_def(L, basis, target)), True)
    if height is None:
        raise NotNegativeDefinite("indefinite span needs a height bound for a partial enumeration")
    logger.info(f"Indefinite span: partial enumeration with coefficients bounded by {height}")
    found = set()
    B = np.array([v.coords for v in basis], dtype=np.int64).T
    for x in itertools.product(range(-height, height + 1), repeat=len(basis)):
        xv = np.array(x, dtype=np.int64)
        if any(x) and int(xv @ G @ xv) == target:
            found.add(tuple(int(c) for c in B @ xv))
    return RootEnumeration(tuple(LatticeVector(r) for r in sorted(found)), False)


# -- hyperkaehler triples ------------------------------------------------------------------

@dataclass(frozen=True)
class HKTriple:
    alpha: Tuple[RealVector, RealVector, RealVector]
    a: object

    def __post_init__(self):
        object.__setattr__(self, "alpha", tuple(as_real(v) for v in self.alpha))
        if len(self.alpha) != 3:
            raise ValueError("a hyperkaehler triple has exactly three vectors")
        if not self.a > 0:
            raise ValueError(f"triple scale a must be positive, got {self.a}")

    @property
    def omega_plus(self) -> RealVector:
        return self.alpha[0]

    @property
    def omega_minus(self) -> RealVector:
        return self.alpha[1]

    @property
    def omega_zero(self) -> RealVector:
        return self.alpha[2]

    @classmethod
    def from_vectors(cls, L: GramLattice, vectors: Sequence, tol: float = LATTICE_TOL) -> "HKTriple":
        vectors = tuple(as_real(v) for v in vectors)
        a = norm(L, vectors[0])
        triple = cls(vectors, a)
        if not is_orthonormal_triple(L, triple, tol):
            raise ValueError("vectors are not orthogonal with a common positive square")
        return triple

    def to_json(self) -> dict:
        return {"omega_plus": self.alpha[0].to_json(),
                "omega_minus": self.alpha[1].to_json(),
                "omega_zero": self.alpha[2].to_json()}

    @classmethod
    def from_json(cls, L: GramLattice, data: Mapping, tol: float = LATTICE_TOL) -> "HKTriple":
        return cls.from_vectors(L, [data["omega_plus"], data["omega_minus"], data["omega_zero"]], tol)


def is_orthonormal_triple(L: GramLattice, triple: HKTriple, tol: float = LATTICE_TOL) -> bool:
    for i, j in itertools.product(range(3), repeat=2):
        expected = triple.a if i == j else 0
        if abs(inner(L, triple.alpha[i], triple.alpha[j]) - expected) > tol:
            return False
    return triple.a > 0


def _exact(c, max_denominator: int) -> Fraction:
    if isinstance(c, (int, Fraction)):
        return Fraction(c)
    return Fraction(c).limit_denominator(max_denominator)


def orthogonal_complement(L: GramLattice, vectors: Sequence, max_denominator: int = MAX_DENOMINATOR
                          ) -> List[LatticeVector]:
    """Z-basis of {x in Lambda : x.v = 0 for all v}"""
    rows = []
    for v in vectors:
        row = [sum(_exact(c, max_denominator) * L.gram[i][j] for i, c in enumerate(_coords(v)))
               for j in range(L.rank)]
        scale = math.lcm(*(r.denominator for r in row)) if row else 1
        rows.append([int(r * scale) for r in row])
    return integer_kernel(rows, L.rank)


def hk_domain_report(L: GramLattice, triple: HKTriple, tol: float = LATTICE_TOL,
                     max_denominator: int = MAX_DENOMINATOR) -> Dict[str, object]:
    if not is_orthonormal_triple(L, triple, tol):
        return {"orthonormal": False, "complement_rank": None, "roots": None, "valid": False}
    complement = orthogonal_complement(L, triple.alpha, max_denominator)
    G = _restricted_gram(L, complement)
    positive, _ = L.signature()
    if not is_negative_definite(G):
        raise NotNegativeDefinite(
            f"complement of the triple is not negative definite (ambient positive index {positive})")
    roots = enumerate_roots_in_neg_def(L, complement)
    separated = all(any(abs(inner(L, alpha, lam)) > tol for alpha in triple.alpha) for lam in roots)
    logger.info(f"HK complement rank {len(complement)} carries {len(roots)} roots")
    return {"orthonormal": True, "complement_rank": len(complement), "roots": len(roots),
            "valid": separated}


def hk_domain_check(L: GramLattice, triple: HKTriple, tol: float = LATTICE_TOL,
                    max_denominator: int = MAX_DENOMINATOR) -> bool:
    """alpha_i.alpha_j = a delta_ij and every -2 vector pairs nonzero with some alpha_i"""
    return bool(hk_domain_report(L, triple, tol, max_denominator)["valid"])


def hk_rotate(triple: HKTriple) -> HKTriple:
    """(w+, w-, w0) -> (w-, w+, -w0)"""
    p, m, z = triple.alpha
    return HKTriple((m, p, -z), triple.a)


def matching_project(side: str, triple: HKTriple) -> Tuple[RealVector, RealVector]:
    """pi_+ = (w-, w0), pi_- = (w+, -w0)"""
    p, m, z = triple.alpha
    if side == "+":
        return m, z
    if side == "-":
        return p, -z
    raise ValueError(f"side must be '+' or '-', got {side!r}")


def kahler_chamber_check(L: GramLattice, omega, period_basis: Sequence, roots: Sequence,
                         tol: float = LATTICE_TOL) -> bool:
    """w.w > 0, w.p = 0 on the period plane, w.lambda != 0 on every root"""
    if norm(L, omega) <= tol:
        return False
    if any(abs(inner(L, omega, p)) > tol for p in period_basis):
        return False
    return all(abs(inner(L, omega, lam)) > tol for lam in roots)


def positive_cone_select(L: GramLattice, v, reference) -> bool:
    """True iff v lies in the component of the positive cone containing reference"""
    if norm(L, v) <= 0:
        raise ValueError("vector is not in the positive cone (v.v <= 0)")
    if norm(L, reference) <= 0:
        raise ValueError("reference is not in the positive cone")
    return inner(L, v, reference) > 0


def matching_domain_check(L: GramLattice, n_plus: SublatticeEmbedding, n_minus: SublatticeEmbedding,
                          triple: HKTriple, ref_plus, ref_minus,
                          tol: float = LATTICE_TOL) -> Dict[str, bool]:
    """Twisted-sum matching: both polarised periods and both Kaehler classes"""
    checks = {
        "triple_orthonormal": is_orthonormal_triple(L, triple, tol),
        "polarisations_orthogonal": all(
            inner(L, a, b) == 0 for a in n_plus.basis for b in n_minus.basis),
        "plus_period": in_polarised_domain(L, n_plus, *matching_project("+", triple), tol),
        "minus_period": in_polarised_domain(L, n_minus, *matching_project("-", triple), tol),
        "omega_plus_in_n_plus": in_span(L, n_plus, triple.omega_plus, tol),
        "omega_minus_in_n_minus": in_span(L, n_minus, triple.omega_minus, tol),
    }
    checks["omega_plus_cone"] = (norm(L, triple.omega_plus) > 0
                                 and positive_cone_select(L, triple.omega_plus, ref_plus))
    checks["omega_minus_cone"] = (norm(L, triple.omega_minus) > 0
                                  and positive_cone_select(L, triple.omega_minus, ref_minus))
    return checks


def default_matching_example(L: Optional[GramLattice] = None):
    """Rank-one polarisations <e1+f1>, <e2+f2> and the triple (e1+f1, e2+f2, e3+f3)"""
    L = L or k3_lattice()
    p = L.vector({"e1": 1, "f1": 1})
    m = L.vector({"e2": 1, "f2": 1})
    z = L.vector({"e3": 1, "f3": 1})
    triple = HKTriple.from_vectors(L, (p, m, z))
    return L, SublatticeEmbedding((p,)), SublatticeEmbedding((m,)), triple


def separating_triple_example() -> Tuple[GramLattice, HKTriple]:
    """(e1+2f1, e2+2f2, e3+2f3) in U^3; the complement <e_i - 2f_i> is <-4>^3 and carries no roots"""
    L = direct_sum(hyperbolic_plane("1"), hyperbolic_plane("2"), hyperbolic_plane("3"))
    return L, HKTriple.from_vectors(L, [L.vector({f"e{i}": 1, f"f{i}": 2}) for i in (1, 2, 3)])


def random_triple(L: GramLattice, rng: np.random.Generator) -> HKTriple:
    """Random rotation and scaling of (e1+f1, e2+f2, e3+f3)

    Orthonormal with float coordinates. The span stays rational, so the complement
    keeps E8(-1)^2 and the e_i - f_i roots and hk_domain_check rejects it.
    """
    Q, _ = np.linalg.qr(rng.standard_normal((3, 3)))
    scale = float(rng.uniform(0.5, 2.0))
    base = [np.array(L.vector({f"e{i}": 1, f"f{i}": 1}).coords, dtype=float) for i in (1, 2, 3)]
    alpha = tuple(RealVector(tuple(float(c) for c in scale * sum(Q[i, j] * base[j] for j in range(3))))
                  for i in range(3))
    return HKTriple(alpha, 2.0 * scale ** 2)
