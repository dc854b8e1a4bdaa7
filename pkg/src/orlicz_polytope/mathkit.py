"""Special functions, stable elementary numerics, and adaptive quadrature.

The quadrature routine is a globally adaptive bisection scheme built on a
15-point Gauss-Kronrod rule.  Integrands are evaluated on arrays of
abscissae, so callables should accept numpy arrays; scalar returns are
broadcast.  Everything here is pure, reentrant and deterministic for fixed
inputs.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AccuracyError, DegenerateParameterError, DomainError

__all__ = [
    "Interval",
    "QuadratureSpec",
    "SinCosParams",
    "DEFAULT_QUAD",
    "log_gamma",
    "ball_volume",
    "ball_volume_log",
    "ball_volume_ratio",
    "quad_adaptive",
    "quad_cumulative",
    "sincos_recursion",
    "log1p_pow",
]

_LOG2 = math.log(2.0)


@dataclass(frozen=True)
class Interval:
    """Finite integration interval with lo <= hi."""

    lo: float
    hi: float

    def __post_init__(self):
        if not (math.isfinite(self.lo) and math.isfinite(self.hi)):
            raise DomainError("interval endpoints must be finite")
        if self.lo > self.hi:
            raise DomainError(f"empty interval: [{self.lo}, {self.hi}]")


@dataclass(frozen=True)
class QuadratureSpec:
    """Tolerances and depth budget for quad_adaptive."""

    rel_tol: float = 1e-9
    abs_tol: float = 1e-12
    max_depth: int = 60

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise DomainError("rel_tol must be positive")
        if self.abs_tol < 0:
            raise DomainError("abs_tol must be nonnegative")
        if self.max_depth < 1:
            raise DomainError("max_depth must be at least 1")

    def tighter(self, factor: float = 10.0) -> "QuadratureSpec":
        """Spec for the inner integral of a nested quadrature."""
        return QuadratureSpec(self.rel_tol / factor, self.abs_tol / factor, self.max_depth)

    def rel_only(self) -> "QuadratureSpec":
        """Drop the absolute floor; needed when integral values can be
        arbitrarily tiny (e.g. (1-u)^k factors with k in the hundreds)."""
        return QuadratureSpec(self.rel_tol, 0.0, self.max_depth)


DEFAULT_QUAD = QuadratureSpec()


@dataclass(frozen=True)
class SinCosParams:
    """Parameters of the sine-cosine power-integral recursion.

    alpha is the sine exponent, beta the cosine exponent, upper the upper
    integration limit in [0, pi/2), and k the recursion depth.
    """

    alpha: float
    beta: float
    upper: float
    k: int

    def __post_init__(self):
        if not (math.isfinite(self.alpha) and math.isfinite(self.beta)):
            raise DomainError("alpha and beta must be finite")
        if not (0.0 <= self.upper < math.pi / 2):
            raise DomainError("upper must lie in [0, pi/2)")
        if self.k < 0:
            raise DomainError("recursion depth k must be nonnegative")


# ---------------------------------------------------------------------------
# special functions

def log_gamma(x: float) -> float:
    """ln Gamma(x) for positive real x."""
    if not (isinstance(x, (int, float)) and math.isfinite(x)) or x <= 0:
        raise DomainError(f"log_gamma requires finite x > 0, got {x!r}")
    return math.lgamma(x)


def _check_p(p: float) -> None:
    if math.isnan(p) or p < 1.0:
        raise DomainError(f"exponent p must satisfy 1 <= p <= inf, got {p!r}")


def ball_volume_log(p: float, n: int) -> float:
    """ln of the volume of the unit l_p ball in dimension n.

    The displayed closed form is (2*Gamma(1+1/p))^n / Gamma(1+n/p); the
    2^n factor is what makes the p=2, n=2 value come out to pi.  p = inf
    is the cube, handled as an explicit branch.
    """
    _check_p(p)
    if n < 1 or int(n) != n:
        raise DomainError(f"dimension n must be a positive integer, got {n!r}")
    if math.isinf(p):
        return n * _LOG2
    return n * (_LOG2 + math.lgamma(1.0 + 1.0 / p)) - math.lgamma(1.0 + n / p)


def ball_volume(p: float, n: int) -> float:
    """Volume of the unit l_p ball in dimension n, computed in log space."""
    return math.exp(ball_volume_log(p, n))


def ball_volume_ratio(p: float, n: int) -> float:
    """|B_p^{n-1}| / |B_p^n|, asymptotically of order n^{1/p}."""
    if n < 2:
        raise DomainError("ball_volume_ratio requires n >= 2")
    if math.isinf(p):
        return 0.5
    return math.exp(ball_volume_log(p, n - 1) - ball_volume_log(p, n))


# ---------------------------------------------------------------------------
# Gauss-Kronrod 15-point rule (standard nodes/weights, 30+ digits truncated)

_XGK = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
]
_WGK = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
]
_WG = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
]

_NODES = np.array([-x for x in _XGK[:-1]] + [0.0] + [x for x in reversed(_XGK[:-1])])
_KW = np.array(_WGK[:-1] + [_WGK[-1]] + list(reversed(_WGK[:-1])))
# Gauss nodes sit at the odd positions of the sorted Kronrod nodes.
_GW = np.zeros(15)
_GW[1:14:2] = np.array(_WG[:-1] + [_WG[-1]] + list(reversed(_WG[:-1])))

_MAX_PANELS = 20000


def _eval_panel(f: Callable, a: float, b: float):
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    x = mid + half * _NODES
    with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
        fx = np.asarray(f(x), dtype=float)
    if fx.shape != x.shape:
        fx = np.broadcast_to(fx, x.shape)
    if not np.all(np.isfinite(fx)):
        raise DomainError(f"integrand non-finite inside panel [{a}, {b}]")
    kron = half * float(_KW @ fx)
    gauss = half * float(_GW @ fx)
    return kron, abs(kron - gauss)


def quad_adaptive(f: Callable, iv: Interval, spec: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Integrate f over iv to within max(abs_tol, rel_tol * |result|).

    Panels with the largest error estimate are bisected first; endpoint
    singularities are handled by panel shrinkage toward the offending
    endpoint (nodes never touch panel ends).  Raises AccuracyError, with
    the best estimate attached, when the depth budget is exhausted.
    """
    a, b = iv.lo, iv.hi
    if a == b:
        return 0.0
    val, err = _eval_panel(f, a, b)
    # heap entries: (-err, lo, hi, depth, value, err)
    heap = [(-err, a, b, 0, val, err)]
    total_val, total_err = val, err
    while True:
        tol = max(spec.abs_tol, spec.rel_tol * abs(total_val))
        if total_err <= tol:
            break
        neg_err, pa, pb, depth, pval, perr = heapq.heappop(heap)
        if depth >= spec.max_depth or len(heap) + 2 > _MAX_PANELS:
            raise AccuracyError(
                f"quadrature did not converge: error bound {total_err:.3e} > tolerance {tol:.3e}",
                estimate=total_val,
                error_bound=total_err,
            )
        mid = 0.5 * (pa + pb)
        v1, e1 = _eval_panel(f, pa, mid)
        v2, e2 = _eval_panel(f, mid, pb)
        total_val += v1 + v2 - pval
        total_err += e1 + e2 - perr
        heapq.heappush(heap, (-e1, pa, mid, depth + 1, v1, e1))
        heapq.heappush(heap, (-e2, mid, pb, depth + 1, v2, e2))
    # fixed-order reduction so identical inputs give bit-identical results
    panels = sorted((entry[1], entry[4]) for entry in heap)
    return float(math.fsum(v for _, v in panels))


def quad_cumulative(f: Callable, points: np.ndarray, chunk: int = 100_000) -> np.ndarray:
    """Cumulative integrals of f from points[0] to each point.

    Applies one (non-adaptive) Gauss-Kronrod panel per consecutive pair, so
    the grid must already resolve the integrand; intended for smooth
    integrands sampled at many close, sorted points.
    """
    pts = np.asarray(points, dtype=float)
    if pts.ndim != 1 or pts.size < 1:
        raise DomainError("points must be a 1-D array with at least one entry")
    if np.any(np.diff(pts) < 0):
        raise DomainError("points must be sorted ascending")
    segs = np.empty(pts.size - 1)
    for start in range(0, pts.size - 1, chunk):
        stop = min(start + chunk, pts.size - 1)
        lo = pts[start:stop]
        hi = pts[start + 1 : stop + 1]
        mid = 0.5 * (lo + hi)[:, None]
        half = 0.5 * (hi - lo)[:, None]
        with np.errstate(divide="ignore", over="ignore", under="ignore", invalid="ignore"):
            fx = np.asarray(f(mid + half * _NODES[None, :]), dtype=float)
        segs[start:stop] = (fx @ _KW) * half[:, 0]
    out = np.empty(pts.size)
    out[0] = 0.0
    np.cumsum(segs, out=out[1:])
    return out


# ---------------------------------------------------------------------------
# sine-cosine power-integral recursion

def sincos_recursion(params: SinCosParams) -> tuple[list[float], float]:
    """Boundary terms and remainder coefficient of the k-step reduction of
    the integral of sin^alpha * cos^beta over [0, upper].

    Returns (terms, coeff) with terms = [T_1, ..., T_{k+1}] where

        T_j = [(a+b+2)...(a+b+2j-2)] / [(a+1)...(a+2j-1)]
              * sin(upper)^{a+2j-1} * cos(upper)^{b+1}

    (empty product = 1) and coeff = (a+b+2)...(a+b+2k+2) / ((a+1)...(a+2k+1)),
    so that for alpha > -1

        int_0^upper sin^a cos^b = sum_j T_j + coeff * int_0^upper sin^{a+2k+2} cos^b.
    """
    a, b, upper, k = params.alpha, params.beta, params.upper, params.k
    for i in range(k + 1):
        if abs(a + 2 * i + 1) < 1e-12 or abs(b + 2 * i + 1) < 1e-12:
            raise DegenerateParameterError(
                f"recursion denominator vanishes at depth {i} (alpha={a}, beta={b})"
            )
    s, c = math.sin(upper), math.cos(upper)
    s2 = s * s
    terms = []
    if upper == 0.0:
        terms = [0.0] * (k + 1)
    else:
        # T_{j+1} = T_j * (a+b+2j)/(a+2j+1) * sin^2: ratios stay O(1), no overflow
        t = (s ** (a + 1.0)) * (c ** (b + 1.0)) / (a + 1.0)
        terms.append(t)
        for j in range(1, k + 1):
            t = t * (a + b + 2.0 * j) / (a + 2.0 * j + 1.0) * s2
            terms.append(t)
    coeff = 1.0
    for j in range(1, k + 2):
        coeff *= (a + b + 2.0 * j) / (a + 2.0 * j - 1.0)
    return terms, coeff


# ---------------------------------------------------------------------------
# stable elementary pieces

def log1p_pow(base_complement: float, exponent: float) -> float:
    """exponent * ln(1 - base_complement), log1p-accurate; -inf at 1."""
    if not 0.0 <= base_complement <= 1.0:
        raise DomainError("base_complement must lie in [0, 1]")
    if not exponent > 0:
        raise DomainError("exponent must be positive")
    if base_complement == 1.0:
        return -math.inf
    return exponent * math.log1p(-base_complement)
