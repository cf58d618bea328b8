#!/usr/bin/env python3
"""
Neck analysis: weighted annulus norms, the gluing partition of unity,
the fold-over toy model and the quadratic contraction scheme
"""

import logging
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Dict, List, Optional, Sequence

import numpy as np
from scipy import integrate, linalg

from utils.constants import (
    CONTRACTION_MAX_ITER, CONTRACTION_TOL, DIVERGENCE_FACTOR, FOLD_RATIO,
    NECK_DIMENSION, QUAD_REL_TOL,
)

logger = logging.getLogger(__name__)


class ContractionFailure(RuntimeError):
    """A member of a contraction family did not converge"""


# -- cut-off and schedule -------------------------------------------------------------

def _bump(x: float) -> float:
    return math.exp(-1.0 / x) if x > 0 else 0.0


def cutoff(x: float) -> float:
    """Smooth step: 0 on (-inf, 0], 1 on [1, inf)"""
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    a, b = _bump(x), _bump(1.0 - x)
    return a / (a + b)


@dataclass(frozen=True)
class GluingSchedule:
    t: float
    nu: float
    nu_p: float
    nu_pp: float
    r0: float = 1.0
    R0: float = 1.0

    def __post_init__(self):
        if not 0 < self.t < 1:
            raise ValueError(f"t must lie in (0, 1), got {self.t}")
        if not 0 < self.nu_pp < self.nu_p < self.nu < 1:
            raise ValueError(f"need 0 < nu'' < nu' < nu < 1, got {self.nu_pp}, {self.nu_p}, {self.nu}")
        if self.r0 <= 0 or self.R0 <= 0:
            raise ValueError("radii r0 and R0 must be positive")
        radii = self.radii()
        for (a_name, a), (b_name, b) in zip(radii.items(), list(radii.items())[1:]):
            if not a < b:
                raise ValueError(f"radius {a_name}={a:.4g} is not below {b_name}={b:.4g} at t={self.t}")

    def radii(self) -> Dict[str, float]:
        t = self.t
        return {"t*r0": t * self.r0, "t^nu/2": 0.5 * t ** self.nu, "t^nu": t ** self.nu,
                "t^nu'": t ** self.nu_p, "t^nu''": t ** self.nu_pp, "R0": self.R0}


def partition_phi(sched: GluingSchedule, rho: float) -> float:
    """1 on the CS region, 0 beyond t^nu'', cutoff of log(rho)/log(t) in between"""
    if rho <= 0:
        raise ValueError(f"rho must be positive, got {rho}")
    if rho <= sched.t * sched.r0:
        return 1.0
    if rho >= sched.R0:
        return 0.0
    x = math.log(rho) / math.log(sched.t)
    return cutoff((x - sched.nu_pp) / (sched.nu_p - sched.nu_pp))


# -- weighted norms --------------------------------------------------------------------

class NormRegime(Enum):
    BOUNDED = "BOUNDED"
    LOG = "LOG"
    POWER = "POWER"


@dataclass(frozen=True)
class WeightedNormSpec:
    p: float
    k: int
    weight: float
    t: float = 0.0

    def __post_init__(self):
        if not self.p > 1:
            raise ValueError(f"p must exceed 1, got {self.p}")
        if self.k < 0:
            raise ValueError(f"k must be non-negative, got {self.k}")


def norm_regime(zeta: float, weight: float) -> NormRegime:
    if weight < zeta:
        return NormRegime.BOUNDED
    if weight == zeta:
        return NormRegime.LOG
    return NormRegime.POWER


def _falling(zeta: float, i: int) -> float:
    """zeta (zeta - 1) ... (zeta - i + 1), the radial factor of |nabla^i r^zeta|"""
    out = 1.0
    for j in range(i):
        out *= zeta - j
    return out


def _derivative_weight(zeta: float, spec: WeightedNormSpec) -> float:
    return sum(abs(_falling(zeta, i)) ** spec.p for i in range(spec.k + 1))


def annulus_norm(zeta: float, spec: WeightedNormSpec, inner: float, outer: float) -> float:
    """Weighted L^p_k norm of r^zeta on the cone annulus inner < r < outer, unit link volume"""
    if not 0 < inner < outer:
        raise ValueError(f"need 0 < inner < outer, got {inner}, {outer}")
    e = (zeta - spec.weight) * spec.p
    if e == 0:
        radial = math.log(outer / inner)
    else:
        radial = (outer ** e - inner ** e) / e
    return (_derivative_weight(zeta, spec) * radial) ** (1.0 / spec.p)


def annulus_norm_quadrature(zeta: float, spec: WeightedNormSpec, inner: float, outer: float,
                            rel_tol: float = QUAD_REL_TOL) -> float:
    """The same norm by adaptive quadrature of |nabla^i s rho^(i-w)|^p rho^-n over r^(n-1) dr"""
    if not 0 < inner < outer:
        raise ValueError(f"need 0 < inner < outer, got {inner}, {outer}")
    n = NECK_DIMENSION

    def integrand(u: float) -> float:
        r = math.exp(u)
        total = sum(abs(_falling(zeta, i) * r ** (zeta - i) * r ** (i - spec.weight)) ** spec.p
                    for i in range(spec.k + 1))
        return total * r ** (-n) * r ** (n - 1) * r  # dr = r du

    value, _ = integrate.quad(integrand, math.log(inner), math.log(outer),
                              epsabs=0.0, epsrel=rel_tol * 1e-3, limit=200)
    return value ** (1.0 / spec.p)


def neck_norm_slopes(zeta: float, weight: float, p: float, k: int, ts: Sequence[float]) -> Dict[str, float]:
    """Fits of annulus_norm over the neck (t, 1) as t -> 0"""
    spec = WeightedNormSpec(p, k, weight)
    ts = np.asarray(ts, dtype=float)
    norms = np.array([annulus_norm(zeta, spec, t, 1.0) for t in ts])
    slope, _ = np.polyfit(np.log(ts), np.log(norms), 1)
    regime = norm_regime(zeta, weight)
    result = {"regime": regime.value, "log_slope": float(slope), "expected_slope": 0.0}
    if regime is NormRegime.POWER:
        result["expected_slope"] = zeta - weight
    if regime is NormRegime.LOG:
        # norm^p grows linearly in log(1/t) with coefficient sum |falling factorial|^p
        lin_slope, _ = np.polyfit(np.log(1.0 / ts), norms ** p, 1)
        result["log_linear_slope"] = float(lin_slope)
        result["expected_log_linear_slope"] = _derivative_weight(zeta, spec)
        result.pop("expected_slope")
    logger.debug(f"Neck norms zeta={zeta} w={weight}: {result}")
    return result


def glue_error_bound(C_F: float, t: float, nu: float, gamma_max: float, gamma: float) -> float:
    """C_F t^(nu (gamma_max - gamma))"""
    if not 1 < gamma < gamma_max:
        raise ValueError(f"need 1 < gamma < gamma_max, got {gamma}, {gamma_max}")
    if not 0 < nu < 1:
        raise ValueError(f"nu must lie in (0, 1), got {nu}")
    if not 0 < t < 1:
        raise ValueError(f"t must lie in (0, 1), got {t}")
    return C_F * t ** (nu * (gamma_max - gamma))


# -- contraction scheme ------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ContractionProblem:
    D: np.ndarray
    B: np.ndarray
    F0: np.ndarray
    C_D: float
    C_Q: float

    @property
    def dim(self) -> int:
        return self.F0.size

    @classmethod
    def from_tensors(cls, D, B, F0) -> "ContractionProblem":
        D = np.atleast_2d(np.asarray(D, dtype=float))
        F0 = np.atleast_1d(np.asarray(F0, dtype=float))
        n = F0.size
        B = np.asarray(B, dtype=float).reshape(n, n, n)
        if D.shape != (n, n):
            raise ValueError(f"D has shape {D.shape}, expected ({n}, {n})")
        try:
            C_D = float(linalg.norm(linalg.inv(D), 2))
        except linalg.LinAlgError:
            raise ValueError("D is singular")
        C_Q = float(np.linalg.norm(B))
        return cls(D, B, F0, C_D, C_Q)

    @classmethod
    def from_json(cls, data: Dict) -> "ContractionProblem":
        try:
            return cls.from_tensors(data["D"], data["Q"], data["F0"])
        except KeyError as e:
            raise ValueError(f"contraction problem JSON is missing {e}")

    def Q(self, v: np.ndarray) -> np.ndarray:
        return np.einsum("ijk,j,k->i", self.B, v, v)

    def residual(self, v: np.ndarray) -> float:
        return float(np.linalg.norm(self.D @ v + self.F0 + self.Q(v)))

    def smallness(self) -> float:
        """4 C_D^2 C_Q |F0|: below 1 the scheme contracts on the ball of radius 2 C_D |F0|"""
        return 4 * self.C_D ** 2 * self.C_Q * float(np.linalg.norm(self.F0))

    def verify_constants(self, rng: np.random.Generator, samples: int = 100, tol: float = 1e-9) -> bool:
        inv = linalg.inv(self.D)
        for _ in range(samples):
            u, v = rng.standard_normal(self.dim), rng.standard_normal(self.dim)
            if np.linalg.norm(inv @ u) > self.C_D * np.linalg.norm(u) * (1 + tol):
                return False
            lhs = np.linalg.norm(self.Q(u) - self.Q(v))
            rhs = self.C_Q * np.linalg.norm(u - v) * (np.linalg.norm(u) + np.linalg.norm(v))
            if lhs > rhs * (1 + tol):
                return False
        return True


@dataclass
class ContractionResult:
    v_inf: np.ndarray
    iterations: int
    converged: bool
    diverged: bool
    differences: List[float] = field(default_factory=list)
    bound: float = 0.0
    smallness: float = 0.0

    @property
    def within_bound(self) -> bool:
        """|v_inf| <= C_I |F0| with C_I = 2 C_D"""
        return float(np.linalg.norm(self.v_inf)) <= self.bound * (1 + 1e-12)

    def decay_ratios(self) -> List[float]:
        d = self.differences
        return [b / a for a, b in zip(d, d[1:]) if a > 0]

    def to_dict(self) -> Dict:
        return {"v_inf": self.v_inf.tolist(), "iterations": self.iterations,
                "converged": self.converged, "diverged": self.diverged,
                "bound": self.bound, "smallness": self.smallness,
                "within_bound": self.within_bound}


def contraction_solve(prob: ContractionProblem, max_iter: int = CONTRACTION_MAX_ITER,
                      tol: float = CONTRACTION_TOL,
                      divergence_factor: float = DIVERGENCE_FACTOR) -> ContractionResult:
    """Iterate D v_(i+1) = -F0 - Q(v_i) from v_0 = 0"""
    lu = linalg.lu_factor(prob.D)
    f_norm = float(np.linalg.norm(prob.F0))
    escape = divergence_factor * prob.C_D * f_norm
    v = np.zeros(prob.dim)
    differences: List[float] = []
    converged = diverged = False
    iterations = 0
    for iterations in range(1, max_iter + 1):
        nxt = linalg.lu_solve(lu, -prob.F0 - prob.Q(v))
        diff = float(np.linalg.norm(nxt - v))
        differences.append(diff)
        v = nxt
        if not np.all(np.isfinite(v)) or np.linalg.norm(v) > escape:
            diverged = True
            break
        if diff < tol:
            converged = True
            break
    if diverged or not converged:
        logger.warning(f"Contraction did not converge after {iterations} iterations "
                       f"(smallness {prob.smallness():.3g})")
    else:
        logger.debug(f"Contraction converged in {iterations} iterations")
    return ContractionResult(v, iterations, converged, diverged or not converged, differences,
                             2 * prob.C_D * f_norm, prob.smallness())


def contraction_family_smoothness(prob_family: Callable[[float], ContractionProblem],
                                  params: Sequence[float], h: float,
                                  max_iter: int = CONTRACTION_MAX_ITER,
                                  tol: float = CONTRACTION_TOL) -> float:
    """Max norm of the central second difference of v_inf(s) over the grid"""
    if h <= 0:
        raise ValueError(f"step h must be positive, got {h}")
    cache: Dict[float, np.ndarray] = {}

    def solve(s: float) -> np.ndarray:
        if s not in cache:
            result = contraction_solve(prob_family(s), max_iter, tol)
            if not result.converged:
                raise ContractionFailure(f"family member at s={s} does not converge")
            cache[s] = result.v_inf
        return cache[s]

    worst = 0.0
    for s in params:
        second = (solve(s + h) - 2 * solve(s) + solve(s - h)) / h ** 2
        worst = max(worst, float(np.linalg.norm(second)))
    return worst


def random_contraction_problem(rng: np.random.Generator, dim: int, smallness: float = 0.5
                               ) -> ContractionProblem:
    """Well-conditioned D near the identity with F0 scaled to the requested smallness"""
    D = np.eye(dim) + 0.2 * rng.standard_normal((dim, dim)) / math.sqrt(dim)
    B = rng.standard_normal((dim, dim, dim)) / dim
    F0 = rng.standard_normal(dim)
    prob = ContractionProblem.from_tensors(D, B, F0)
    scale = smallness / prob.smallness()
    return ContractionProblem.from_tensors(D, B, F0 * scale)


# -- fold-over model -------------------------------------------------------------------------

@dataclass(frozen=True)
class FoldModel:
    alpha: float
    gamma: float
    s: float

    def __post_init__(self):
        if not 0 < self.alpha < 1 < self.gamma:
            raise ValueError(f"need 0 < alpha < 1 < gamma, got {self.alpha}, {self.gamma}")
        if self.s < 0:
            raise ValueError(f"s must be non-negative, got {self.s}")


def fold_height(m: FoldModel, r: float, t: float) -> float:
    """h(s, r, t) = t - s |t|^alpha |r|^gamma"""
    return t - m.s * abs(t) ** m.alpha * abs(r) ** m.gamma


def fold_dt(m: FoldModel, r: float, t: float) -> float:
    """d h / d t for t > 0"""
    if t <= 0:
        raise ValueError(f"derivative is taken at t > 0, got {t}")
    return 1.0 - m.s * m.alpha * t ** (m.alpha - 1) * abs(r) ** m.gamma


def fold_width(m: FoldModel) -> float:
    if m.s == 0:
        raise ValueError("no fold when s = 0")
    return m.s ** (1.0 / (1.0 - m.alpha))


def fold_onset_scale(m: FoldModel, r: float = 1.0) -> float:
    """t at which d h / d t vanishes"""
    if m.s == 0:
        raise ValueError("no fold when s = 0")
    return (m.alpha * m.s * abs(r) ** m.gamma) ** (1.0 / (1.0 - m.alpha))


def fold_intersection(m: FoldModel, eta: float, eps: float) -> Optional[float]:
    """r with h(eta, r) = h(eps, r), or None when the fibers never meet"""
    if not 0 < eps < eta:
        raise ValueError(f"need 0 < eps < eta, got {eps}, {eta}")
    if m.s == 0:
        return None
    radicand = (eta - eps) / (m.s * (eta ** m.alpha - eps ** m.alpha))
    if radicand <= 0:
        return None
    return radicand ** (1.0 / m.gamma)


def measured_fold_scale(m: FoldModel, ratio: float = FOLD_RATIO, r_max: float = 1.0) -> float:
    """Largest eta whose fiber meets the fiber at ratio*eta within radius r_max"""
    def meets(log_eta: float) -> bool:
        eta = math.exp(log_eta)
        r = fold_intersection(m, eta, ratio * eta)
        return r is not None and r <= r_max

    lo, hi = math.log(fold_width(m)) - 10.0, math.log(fold_width(m)) + 10.0
    while not meets(lo):
        lo -= 10.0
    while meets(hi):
        hi += 10.0
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if meets(mid):
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-13:
            break
    return math.exp(lo)


def fold_scale_exponent(alpha: float, gamma: float, ss: Sequence[float], ratio: float = FOLD_RATIO) -> float:
    """Fitted exponent of measured_fold_scale against s"""
    scales = [measured_fold_scale(FoldModel(alpha, gamma, s), ratio) for s in ss]
    slope, _ = np.polyfit(np.log(ss), np.log(scales), 1)
    return float(slope)


def fold_blowup_exponent(m: FoldModel, ts: Sequence[float], r: float = 1.0) -> float:
    """Fitted slope of log|d_t h - 1| against log t, d_t h by central differences"""
    logs_t, logs_dev = [], []
    for t in ts:
        dt = 1e-4 * t
        derivative = (fold_height(m, r, t + dt) - fold_height(m, r, t - dt)) / (2 * dt)
        logs_t.append(math.log(t))
        logs_dev.append(math.log(abs(derivative - 1.0)))
    slope, _ = np.polyfit(logs_t, logs_dev, 1)
    return float(slope)
