#!/usr/bin/env python3
"""
Flat Spin(7) local model

Real coordinates on C^4 = R^8 are ordered (x1, y1, ..., x4, y4) with
z_j = x_j + i y_j. Form indices are 0-based internally; the printed Cayley
form uses 1-based labels.
"""

import itertools
import logging
import math
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Sequence, Tuple

import numpy as np
from scipy.linalg import null_space

from utils.constants import (
    CALIBRATION_TOL, CAYLEY_TERMS, RATE_WINDOW, S2_NORMALIZATION,
)

logger = logging.getLogger(__name__)

POINT_TOL = 1e-12


def _permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the sorting permutation; 0 when an index repeats"""
    seq = list(seq)
    if len(set(seq)) != len(seq):
        return 0
    sign = 1
    for i in range(len(seq)):
        for j in range(i + 1, len(seq)):
            if seq[i] > seq[j]:
                sign = -sign
    return sign


@dataclass(frozen=True)
class AltForm:
    degree: int
    dim: int
    coeffs: Mapping[Tuple[int, ...], complex] = field(default_factory=dict)

    def __post_init__(self):
        clean: Dict[Tuple[int, ...], complex] = {}
        for idx, c in self.coeffs.items():
            idx = tuple(int(i) for i in idx)
            if len(idx) != self.degree:
                raise ValueError(f"index {idx} has length {len(idx)}, expected {self.degree}")
            if any(a >= b for a, b in zip(idx, idx[1:])):
                raise ValueError(f"index {idx} is not strictly increasing")
            if idx and (idx[0] < 0 or idx[-1] >= self.dim):
                raise ValueError(f"index {idx} out of range for dimension {self.dim}")
            if c != 0:
                clean[idx] = c
        object.__setattr__(self, "coeffs", dict(sorted(clean.items())))

    @classmethod
    def from_terms(cls, terms: Sequence[Tuple[str, object]], dim: int) -> "AltForm":
        """Forms from 1-based labels such as ('1234', 1)"""
        coeffs = {}
        degree = None
        for label, c in terms:
            idx = tuple(int(ch) - 1 for ch in label)
            degree = len(idx) if degree is None else degree
            coeffs[idx] = c
        return cls(degree or 0, dim, coeffs)

    @classmethod
    def from_unsorted(cls, degree: int, dim: int, items: Sequence[Tuple[Sequence[int], object]]
                      ) -> "AltForm":
        coeffs: Dict[Tuple[int, ...], complex] = {}
        for idx, c in items:
            sign = _permutation_sign(idx)
            if sign:
                key = tuple(sorted(idx))
                coeffs[key] = coeffs.get(key, 0) + sign * c
        return cls(degree, dim, coeffs)

    def coefficient(self, idx: Sequence[int]) -> complex:
        sign = _permutation_sign(idx)
        return sign * self.coeffs.get(tuple(sorted(idx)), 0)

    def __len__(self):
        return len(self.coeffs)

    def _check(self, other: "AltForm"):
        if self.dim != other.dim:
            raise ValueError(f"forms on R^{self.dim} and R^{other.dim}")

    def __add__(self, other: "AltForm") -> "AltForm":
        self._check(other)
        if self.degree != other.degree:
            raise ValueError(f"cannot add forms of degree {self.degree} and {other.degree}")
        coeffs = dict(self.coeffs)
        for idx, c in other.coeffs.items():
            coeffs[idx] = coeffs.get(idx, 0) + c
        return AltForm(self.degree, self.dim, coeffs)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, k) -> "AltForm":
        return AltForm(self.degree, self.dim, {i: k * c for i, c in self.coeffs.items()})

    def wedge(self, other: "AltForm") -> "AltForm":
        self._check(other)
        items = [(a + b, ca * cb) for a, ca in self.coeffs.items() for b, cb in other.coeffs.items()]
        return AltForm.from_unsorted(self.degree + other.degree, self.dim, items)

    def power(self, n: int) -> "AltForm":
        result = AltForm(0, self.dim, {(): 1})
        for _ in range(n):
            result = result.wedge(self)
        return result

    def conjugate(self) -> "AltForm":
        return AltForm(self.degree, self.dim,
                       {i: complex(c).conjugate() if isinstance(c, complex) else c
                        for i, c in self.coeffs.items()})

    def real(self) -> "AltForm":
        return AltForm(self.degree, self.dim, {i: complex(c).real for i, c in self.coeffs.items()})

    def pullback(self, perm: Sequence[int], signs: Sequence[int]) -> "AltForm":
        """Substitute dx_i -> signs[i] dx_perm[i]"""
        items = []
        for idx, c in self.coeffs.items():
            s = 1
            for i in idx:
                s *= signs[i]
            items.append((tuple(perm[i] for i in idx), s * c))
        return AltForm.from_unsorted(self.degree, self.dim, items)

    def evaluate(self, vectors: np.ndarray) -> float:
        """phi(v1, ..., vk) for the rows of vectors"""
        V = np.asarray(vectors, dtype=float)
        if V.shape != (self.degree, self.dim):
            raise ValueError(f"need {self.degree} vectors in R^{self.dim}, got shape {V.shape}")
        if not self.coeffs:
            return 0.0
        idx = np.array(list(self.coeffs.keys()))
        coeffs = np.array([complex(c).real for c in self.coeffs.values()])
        minors = np.linalg.det(V.T[idx])
        return float(coeffs @ minors)

    def is_close(self, other: "AltForm", tol: float = 0.0) -> bool:
        if (self.degree, self.dim) != (other.degree, other.dim):
            return False
        keys = set(self.coeffs) | set(other.coeffs)
        return all(abs(self.coeffs.get(k, 0) - other.coeffs.get(k, 0)) <= tol for k in keys)

    def __str__(self):
        parts = []
        for idx, c in self.coeffs.items():
            label = "".join(str(i + 1) for i in idx)
            parts.append(f"{c:+} dx_{label}")
        return " ".join(parts) or "0"


# -- frames and points --------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Frame4:
    vectors: np.ndarray

    def __post_init__(self):
        V = np.asarray(self.vectors, dtype=float)
        if V.shape[0] != 4:
            raise ValueError(f"a 4-frame needs four vectors, got {V.shape[0]}")
        object.__setattr__(self, "vectors", V)

    def gram(self) -> np.ndarray:
        return self.vectors @ self.vectors.T


@dataclass(frozen=True, eq=False)
class QuadricFiberPoint:
    eps: complex
    w0: complex
    point: np.ndarray

    def __post_init__(self):
        z = np.asarray(self.point, dtype=complex)
        if z.shape != (4,):
            raise ValueError(f"point must be a complex 4-vector, got shape {z.shape}")
        scale = max(1.0, float(np.sum(np.abs(z[:3]) ** 2)))
        value = f0(z)
        if abs(value[0] - self.eps) > POINT_TOL * scale or abs(value[1] - self.w0) > POINT_TOL * scale:
            raise ValueError(f"point {z} is not on the fiber over ({self.eps}, {self.w0})")
        object.__setattr__(self, "point", z)

    @property
    def radius(self) -> float:
        return float(np.linalg.norm(self.point[:3]))


def complex_to_real(v: np.ndarray) -> np.ndarray:
    """(z1..zn) -> (x1, y1, ..., xn, yn)"""
    v = np.asarray(v, dtype=complex)
    out = np.empty(2 * v.size)
    out[0::2] = v.real
    out[1::2] = v.imag
    return out


def real_to_complex(v: np.ndarray) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v[0::2] + 1j * v[1::2]


# -- the forms --------------------------------------------------------------------

def cayley_form_standard() -> AltForm:
    return AltForm.from_terms(CAYLEY_TERMS, 8)


def kahler_form(n: int) -> AltForm:
    """omega = sum dx_j ^ dy_j on C^n"""
    return AltForm(2, 2 * n, {(2 * j, 2 * j + 1): 1 for j in range(n)})


def holomorphic_volume_form(n: int) -> AltForm:
    """Omega = dz_1 ^ ... ^ dz_n"""
    result = AltForm(0, 2 * n, {(): 1})
    for j in range(n):
        dz = AltForm(1, 2 * n, {(2 * j,): 1, (2 * j + 1,): 1j})
        result = result.wedge(dz)
    return result


def cy_normalization_holds(n: int, tol: float = 0.0) -> bool:
    """omega^n / n! == (-1)^(n(n-1)/2) (i/2)^n Omega ^ conj(Omega)"""
    omega = kahler_form(n)
    Omega = holomorphic_volume_form(n)
    lhs = omega.power(n)
    rhs = Omega.wedge(Omega.conjugate()).scale(
        math.factorial(n) * (-1) ** (n * (n - 1) // 2) * (0.5j) ** n)
    return lhs.is_close(rhs, tol)


def cy4_cayley_form() -> AltForm:
    """Re Omega + omega^2 / 2 on C^4"""
    omega = kahler_form(4)
    return holomorphic_volume_form(4).real() + omega.wedge(omega).scale(0.5)


def find_signed_permutation(phi_a: AltForm, phi_b: AltForm, tol: float = 1e-12
                            ) -> Optional[Tuple[Tuple[int, ...], Tuple[int, ...]]]:
    """(perm, signs) with phi_a.pullback(perm, signs) == phi_b, by backtracking"""
    if (phi_a.degree, phi_a.dim) != (phi_b.degree, phi_b.dim) or len(phi_a) != len(phi_b):
        return None
    dim = phi_a.dim
    perm: List[int] = []
    signs: List[int] = []
    used = set()
    target = {k: complex(v) for k, v in phi_b.coeffs.items()}

    def consistent() -> bool:
        k = len(perm)
        image = set(perm)
        for idx, c in phi_a.coeffs.items():
            if idx[-1] < k:
                mapped = [perm[i] for i in idx]
                s = _permutation_sign(mapped)
                for i in idx:
                    s *= signs[i]
                if abs(target.get(tuple(sorted(mapped)), 0) - s * c) > tol:
                    return False
        # every phi_b term inside the image must come from a phi_a term
        inverse = {p: i for i, p in enumerate(perm)}
        for idx in target:
            if all(j in image for j in idx):
                if tuple(sorted(inverse[j] for j in idx)) not in phi_a.coeffs:
                    return False
        return True

    def search() -> bool:
        if len(perm) == dim:
            return True
        for j in range(dim):
            if j in used:
                continue
            for s in (1, -1):
                perm.append(j)
                signs.append(s)
                used.add(j)
                if consistent() and search():
                    return True
                perm.pop()
                signs.pop()
                used.discard(j)
        return False

    if search():
        logger.debug(f"Signed permutation found: perm={perm} signs={signs}")
        return tuple(perm), tuple(signs)
    return None


def restrict_ratio(phi: AltForm, fr: Frame4) -> float:
    """phi(f1..f4) / sqrt(det Gram(f))"""
    det = float(np.linalg.det(fr.gram()))
    if det <= 1e-24 * max(1.0, float(np.max(np.abs(fr.gram())))) ** 4:
        raise ValueError("degenerate frame: vectors are linearly dependent")
    return phi.evaluate(fr.vectors) / math.sqrt(det)


def random_frame(rng: np.random.Generator, dim: int = 8) -> Frame4:
    return Frame4(rng.standard_normal((4, dim)))


def calibration_sweep(phi: AltForm, samples: int, seed: int = 0,
                      tol: float = CALIBRATION_TOL) -> Dict[str, float]:
    rng = np.random.default_rng(seed)
    ratios = np.array([restrict_ratio(phi, random_frame(rng, phi.dim)) for _ in range(samples)])
    lo, hi = float(ratios.min()), float(ratios.max())
    logger.info(f"Calibration sweep over {samples} frames: ratio in [{lo:.6f}, {hi:.6f}]")
    return {"samples": samples, "min": lo, "max": hi,
            "bounded": bool(lo >= -1 - tol and hi <= 1 + tol)}


# -- the quadric fibration ---------------------------------------------------------------

def f0(z: Sequence[complex]) -> np.ndarray:
    """(x, y, z, w) -> (x^2 + y^2 + z^2, w)"""
    z = np.asarray(z, dtype=complex)
    return np.array([z[0] ** 2 + z[1] ** 2 + z[2] ** 2, z[3]])


def df0(z: Sequence[complex], v: Sequence[complex]) -> np.ndarray:
    """Complex differential of f0 at z applied to v"""
    z, v = np.asarray(z, dtype=complex), np.asarray(v, dtype=complex)
    return np.array([2 * (z[0] * v[0] + z[1] * v[1] + z[2] * v[2]), v[3]])


def _require_smooth(p: QuadricFiberPoint):
    if np.allclose(p.point[:3], 0, atol=POINT_TOL):
        raise ValueError("singular point: (x, y, z) = 0")


def sample_fiber_point(eps: complex, r: float, w0: complex = 0, theta: float = 0.0) -> QuadricFiberPoint:
    """Point of f0^-1(eps, w0) with |(x, y, z)| = r, rotated by theta in the (x, y) plane"""
    mod = abs(eps)
    if r * r < mod - POINT_TOL:
        raise ValueError(f"radius {r} is below the fiber's minimum {math.sqrt(mod)}")
    a = math.sqrt((r * r + mod) / 2)
    b = math.sqrt(max(r * r - mod, 0.0) / 2)
    u = np.array([math.cos(theta), math.sin(theta), 0.0])
    v = np.array([-math.sin(theta), math.cos(theta), 0.0])
    phase = np.exp(0.5j * np.angle(eps)) if mod else 1.0
    xyz = phase * (a * u + 1j * b * v)
    return QuadricFiberPoint(complex(eps), complex(w0), np.append(xyz, w0))


def fiber_tangent_frame(p: QuadricFiberPoint) -> Frame4:
    """Orthonormal real frame (u, iu, w, iw) of the complex kernel of Df0"""
    _require_smooth(p)
    x, y, z, _ = p.point
    kernel = null_space(np.array([[2 * x, 2 * y, 2 * z, 0], [0, 0, 0, 1]], dtype=complex))
    u, w = kernel[:, 0], kernel[:, 1]
    vectors = [complex_to_real(u), complex_to_real(1j * u), complex_to_real(w), complex_to_real(1j * w)]
    return Frame4(np.array(vectors))


def deformation_fields(p: QuadricFiberPoint) -> Tuple[np.ndarray, np.ndarray]:
    """s1 = d/dw and s2 = c (conj x, conj y, conj z, 0) / |(x, y, z)|^2 with Df0[s2] = (1, 0)"""
    _require_smooth(p)
    xyz = p.point[:3]
    s1 = np.array([0, 0, 0, 1], dtype=complex)
    s2 = S2_NORMALIZATION * np.append(np.conj(xyz), 0) / float(np.sum(np.abs(xyz) ** 2))
    return s1, s2


def literal_s2(p: QuadricFiberPoint) -> np.ndarray:
    """(1, 1, 1, 0) / |(x, y, z)|^2 taken at face value; does not lift d/d(eps)"""
    _require_smooth(p)
    return np.array([1, 1, 1, 0], dtype=complex) / float(np.sum(np.abs(p.point[:3]) ** 2))


def fiber_calibration_defect(phi: AltForm, points: Sequence[QuadricFiberPoint]) -> float:
    """max |1 - phi(frame)| over fiber tangent frames"""
    return max(abs(1.0 - restrict_ratio(phi, fiber_tangent_frame(p))) for p in points)


# -- rates and the determinant ---------------------------------------------------------------

def dyadic_radii(window: Sequence[int] = RATE_WINDOW) -> np.ndarray:
    lo, hi = window
    return 2.0 ** np.arange(lo, hi + 1)


def fit_decay_rate(radii: Sequence[float], values: Sequence[float]) -> float:
    """Least-squares slope of log|value| against log r"""
    radii = np.asarray(radii, dtype=float)
    values = np.abs(np.asarray(values, dtype=float))
    if radii.size < 2:
        raise ValueError("need at least two radii to fit a rate")
    if np.any(radii <= 0) or np.any(values <= 0):
        raise ValueError("radii and field magnitudes must be positive")
    slope, _ = np.polyfit(np.log(radii), np.log(values), 1)
    return float(slope)


def s2_decay_rate(eps: complex = 1.0, window: Sequence[int] = RATE_WINDOW) -> float:
    radii = dyadic_radii(window)
    norms = [np.linalg.norm(deformation_fields(sample_fiber_point(eps, r))[1]) for r in radii]
    return fit_decay_rate(radii, norms)


def normal_basis(tangent: Frame4) -> np.ndarray:
    """Orthonormal basis of the orthogonal complement, as columns"""
    return null_space(tangent.vectors)


def nondegeneracy_det(fields: Sequence[np.ndarray], zeta: float, rho: float, n_fixed: int = 4,
                      tangent: Optional[Frame4] = None) -> float:
    """det(w1, .., wl, rho^-zeta w_(l+1), .., rho^-zeta w4) on normal components"""
    if len(fields) < 4:
        raise ValueError(f"need four fields, got {len(fields)}")
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if not 0 <= n_fixed <= 4:
        raise ValueError(f"number of unscaled fields must lie in 0..4, got {n_fixed}")
    F = np.array([np.asarray(f, dtype=float) for f in fields[:4]]).T
    if tangent is not None:
        F = normal_basis(tangent).T @ F
    if F.shape != (4, 4):
        raise ValueError(f"fields must have four normal components, got shape {F.shape}")
    F[:, n_fixed:] *= rho ** (-zeta)
    return float(np.linalg.det(F))


def deformation_det(p: QuadricFiberPoint, zeta: float = -1.0) -> float:
    """Determinant of (s1, i s1, s2, i s2) with the s2 columns weighted by rho^-zeta, rho = |(x,y,z)|"""
    s1, s2 = deformation_fields(p)
    fields = [complex_to_real(s1), complex_to_real(1j * s1), complex_to_real(s2), complex_to_real(1j * s2)]
    return nondegeneracy_det(fields, zeta, p.radius, n_fixed=2, tangent=fiber_tangent_frame(p))


def det_sweep(eps: complex, rmin: float, rmax: float, zeta: float = -1.0, count: int = 25) -> Dict[str, float]:
    lo = max(rmin, math.sqrt(abs(eps)))
    if lo > rmin:
        logger.info(f"Radii below {lo:.4g} do not meet the fiber over {eps}; sweep starts at {lo:.4g}")
    radii = np.geomspace(lo, rmax, count)
    dets = np.abs([deformation_det(sample_fiber_point(eps, r), zeta) for r in radii])
    lo_det, hi_det = float(dets.min()), float(dets.max())
    bound = min(lo_det, 1.0 / hi_det) if hi_det > 0 else 0.0
    return {"rmin": float(lo), "rmax": float(rmax), "min": lo_det, "max": hi_det, "C": bound}
