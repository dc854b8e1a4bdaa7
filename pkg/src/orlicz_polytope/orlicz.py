"""Orlicz functions for marginals of convex bodies: tail-integral and
closed-form constructions, Luxemburg norms, Legendre duals, and the
level-1/N inversion that estimates expected support functions.

All constructions share one convention: M is the tail integral of the law
of |<X, theta>|,

    M(s) = int_0^s  E[ |<X,theta>| ; |<X,theta>| >= 1/t ]  dt,

which vanishes exactly on [0, 1/support_radius].
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .bodies import MarginalDensity
from .errors import DomainError, EstimationError, RangeError
from .mathkit import (
    DEFAULT_QUAD,
    Interval,
    QuadratureSpec,
    ball_volume_log,
    ball_volume_ratio,
    quad_adaptive,
)

__all__ = [
    "OrliczFunction",
    "MTailSpec",
    "m_from_tail",
    "m_from_tail_alt",
    "m_pball_first",
    "m_pball_second",
    "m_spherical",
    "m_empirical",
    "from_power",
    "from_cube",
    "from_pball",
    "from_tail",
    "from_empirical",
    "from_spherical",
    "legendre_dual",
    "luxemburg_norm",
    "invert_for_support",
    "export_tabulation",
]

# Bracketing limit for the norm/inversion searches; outside it we refuse
# to extrapolate and raise RangeError instead.
BRACKET_LIMIT = 1e6

# Self-test hook for the validation CLI: scales the leading term of the
# first closed-form representation.  Leave at 1.0.
_FIRST_FORM_PERTURBATION = 1.0


@dataclass(frozen=True)
class OrliczFunction:
    """Convex M with M(0) = 0, vanishing exactly on [0, zero_threshold]."""

    eval: Callable[[float], float]
    zero_threshold: float
    kind: str

    def __call__(self, t: float) -> float:
        return self.eval(t)


@dataclass(frozen=True)
class MTailSpec:
    """A marginal law together with the quadrature budget used on it."""

    marginal: MarginalDensity
    quad: QuadratureSpec = DEFAULT_QUAD


# ---------------------------------------------------------------------------
# tail-integral representations

def _tail_moment_fn(marg: MarginalDensity, quad: QuadratureSpec) -> Callable[[float], float]:
    if marg.tail_moment is not None:
        return marg.tail_moment
    radius = marg.support_radius

    def tail(a: float) -> float:
        if a >= radius:
            return 0.0
        return quad_adaptive(
            lambda r: 2.0 * r * np.asarray(marg.density(r), dtype=float),
            Interval(max(a, 0.0), radius),
            quad,
        )

    return tail


def _survival_fn(marg: MarginalDensity, quad: QuadratureSpec) -> Callable[[float], float]:
    if marg.survival is not None:
        return marg.survival
    radius = marg.support_radius

    def survival(a: float) -> float:
        if a >= radius:
            return 0.0
        return quad_adaptive(
            lambda r: 2.0 * np.asarray(marg.density(r), dtype=float),
            Interval(max(a, 0.0), radius),
            quad,
        )

    return survival


def _m_histogram_exact(marg: MarginalDensity, s: float) -> float:
    """M(s) for a piecewise-constant marginal, in closed form per bin.

    With T(u) the truncated first moment, M(s) = int_{1/s}^{R} T(u)/u^2 du,
    and on a bin with constant one-sided density g the antiderivative of
    (A - g u^2 / 2)/u^2 is -A/u - g u / 2.
    """
    edges = marg.hist_edges
    g = marg.hist_density
    a = 1.0 / s
    widths_sq = np.diff(edges**2)
    suffix_moment = np.concatenate((np.cumsum((g * widths_sq / 2.0)[::-1])[::-1], [0.0]))
    cap = g * edges[1:] ** 2 / 2.0 + suffix_moment[1:]
    lo = np.maximum(edges[:-1], a)
    hi = edges[1:]
    live = hi > lo
    lo, hi, cap_l, g_l = lo[live], hi[live], cap[live], g[live]
    vals = (-cap_l / hi - g_l * hi / 2.0) - (-cap_l / lo - g_l * lo / 2.0)
    return float(np.sum(vals))


def m_from_tail(spec: MTailSpec, s: float) -> float:
    """Tail-integral M(s): outer integral of the truncated first moment."""
    if s < 0:
        raise DomainError("M is defined for s >= 0")
    radius = spec.marginal.support_radius
    if s * radius <= 1.0:
        return 0.0
    if spec.marginal.hist_edges is not None:
        return _m_histogram_exact(spec.marginal, s)
    quad = spec.quad.rel_only()
    tail = _tail_moment_fn(spec.marginal, quad.tighter())

    def outer(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([tail(1.0 / ti) for ti in t])

    return quad_adaptive(outer, Interval(1.0 / radius, s), quad)


def m_from_tail_alt(spec: MTailSpec, s: float) -> float:
    """Same M(s) through the survival-function representation.

    The defining form integrates (1/t) P(|X| >= 1/t) + int_{1/t} P(|X| >= u) du
    over t in [0, s]; exchanging the order of the double term turns it into
    two single integrals of the survival function, which is what is
    evaluated here.
    """
    if s < 0:
        raise DomainError("M is defined for s >= 0")
    marg = spec.marginal
    radius = marg.support_radius
    if s * radius <= 1.0:
        return 0.0
    quad = spec.quad.rel_only()
    survival = _survival_fn(marg, quad.tighter())

    def hazard(t):
        t = np.atleast_1d(np.asarray(t, dtype=float))
        return np.array([survival(1.0 / ti) / ti for ti in t])

    def excess(u):
        u = np.atleast_1d(np.asarray(u, dtype=float))
        return np.array([survival(ui) * (s - 1.0 / ui) for ui in u])

    if marg.hist_edges is not None:
        # survival is piecewise linear: integrate each smooth piece separately
        cuts_u = [1.0 / s] + [float(e) for e in marg.hist_edges if 1.0 / s < e < radius] + [radius]
        term2 = sum(
            quad_adaptive(excess, Interval(a, b), quad) for a, b in zip(cuts_u, cuts_u[1:])
        )
        inv = sorted(1.0 / e for e in marg.hist_edges if e > 0 and 1.0 / radius < 1.0 / e < s)
        cuts_t = [1.0 / radius] + inv + [s]
        term1 = sum(
            quad_adaptive(hazard, Interval(a, b), quad) for a, b in zip(cuts_t, cuts_t[1:])
        )
        return term1 + term2
    term1 = quad_adaptive(hazard, Interval(1.0 / radius, s), quad)
    term2 = quad_adaptive(excess, Interval(1.0 / s, radius), quad)
    return term1 + term2


# ---------------------------------------------------------------------------
# closed-form representations for coordinate marginals of normalized l_p balls

def _pball_setup(p: float, n: int, s: float):
    if math.isinf(p) or p < 1.0:
        raise DomainError("closed forms require 1 <= p < inf")
    if n < 1:
        raise DomainError("n must be a positive integer")
    if not s > 0:
        raise DomainError("s must be positive")
    radius = math.exp(-ball_volume_log(p, n) / n)
    if s >= radius:
        return radius, None, None
    y = s / radius
    theta_max = math.acos(y ** (p / 2.0))
    if n == 1:
        ratio = math.exp(-ball_volume_log(p, 1))
    else:
        ratio = ball_volume_ratio(p, n)
    return radius, theta_max, ratio


def _sin_cos_integral(a: float, b: float, theta_max: float, quad: QuadratureSpec) -> float:
    """int_0^theta_max sin^a / cos^b, evaluated in log space."""

    def f(theta):
        theta = np.asarray(theta, dtype=float)
        with np.errstate(divide="ignore"):
            return np.exp(a * np.log(np.sin(theta)) - b * np.log(np.cos(theta)))

    return quad_adaptive(f, Interval(0.0, theta_max), quad)


def _inner_radial(p: float, u_lo: float, power: float, m_exp: float, quad: QuadratureSpec) -> float:
    """int_{u_lo}^1 u^power (1 - u^p)^m_exp du in log space."""

    def f(u):
        u = np.asarray(u, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            lu = np.log(u)
            one_minus = -np.expm1(p * lu)
            one_minus = np.where(one_minus <= 0.0, 0.0, one_minus)
            return np.exp(power * lu + m_exp * np.log(one_minus))

    return quad_adaptive(f, Interval(u_lo, 1.0), quad)


def _double_radial(
    p: float,
    theta_max: float,
    power: float,
    m_exp: float,
    quad: QuadratureSpec,
) -> float:
    """int_0^theta_max sin/cos^{1+2/p} * int_{cos^{2/p}}^1 u^power (1-u^p)^m_exp."""
    inner_quad = quad.tighter()

    def outer(theta):
        theta = np.atleast_1d(np.asarray(theta, dtype=float))
        out = np.empty_like(theta)
        for i, th in enumerate(theta):
            ct = math.cos(th)
            u_lo = ct ** (2.0 / p)
            out[i] = math.sin(th) * ct ** (-(1.0 + 2.0 / p)) * _inner_radial(
                p, u_lo, power, m_exp, inner_quad
            )
        return out

    return quad_adaptive(outer, Interval(0.0, theta_max), quad)


def m_pball_first(p: float, n: int, s: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """M(1/s) for the coordinate marginal of the normalized l_p ball,
    first closed-form representation (0 for s at or beyond the support)."""
    radius, theta_max, ratio = _pball_setup(p, n, s)
    if theta_max is None:
        return 0.0
    quad = quad.rel_only()
    a1 = 2.0 * (n - 1) / p + 3.0
    b1 = 3.0 - 2.0 / p
    lead = 4.0 / (p * (n - 1.0 + p))
    term_a = lead * ratio * _sin_cos_integral(a1, b1, theta_max, quad)
    term_a *= _FIRST_FORM_PERTURBATION
    if p == 2.0:
        return term_a
    term_b = (
        lead
        * (2.0 - p)
        * ratio
        * _double_radial(p, theta_max, 1.0 - p, (n - 1.0) / p + 1.0, quad)
    )
    return term_a + term_b


def m_pball_second(p: float, n: int, s: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Same value as m_pball_first through the second representation,
    led by the fully closed term; for p = 1 only that term survives."""
    radius, theta_max, ratio = _pball_setup(p, n, s)
    if theta_max is None:
        return 0.0
    quad = quad.rel_only()
    x = (s / radius) ** p
    if x >= 1.0:
        return 0.0
    denom = (n - 1.0 + p) * (n - 1.0 + 2.0 * p)
    term1 = (
        (2.0 / denom)
        * ratio
        * math.exp(((n - 1.0) / p + 2.0) * math.log1p(-x) - (2.0 - 1.0 / p) * math.log(x))
    )
    if p == 1.0:
        return term1
    a2 = 2.0 * (n - 1.0) / p + 5.0
    b2 = 5.0 - 2.0 / p
    term2 = (
        -(12.0 * (p - 1.0) / (p * denom))
        * ratio
        * _sin_cos_integral(a2, b2, theta_max, quad)
    )
    if p == 2.0:
        return term1 + term2
    term3 = (
        -(8.0 * (2.0 - p) * (p - 1.0) / (p * denom))
        * ratio
        * _double_radial(p, theta_max, 1.0 - 2.0 * p, (n - 1.0) / p + 2.0, quad)
    )
    return term1 + term2 + term3


def m_spherical(n: int, s: float, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Orlicz function of |<theta, e_1>| for theta uniform on S^{n-1}.

    Zero for s <= 1; otherwise (2 w_{n-1} / (n w_n)) times the integral of
    sin^n y / cos^2 y over [0, arccos(1/s)].
    """
    if n < 2:
        raise DomainError("the sphere marginal needs n >= 2")
    if not s >= 0:
        raise DomainError("s must be nonnegative")
    if s <= 1.0:
        return 0.0
    quad = quad.rel_only()
    const = spherical_prefactor(n)
    upper = math.acos(1.0 / s)

    def f(y):
        y = np.asarray(y, dtype=float)
        with np.errstate(divide="ignore"):
            return np.exp(n * np.log(np.sin(y)) - 2.0 * np.log(np.cos(y)))

    return const * quad_adaptive(f, Interval(0.0, upper), quad)


def spherical_prefactor(n: int) -> float:
    """2 w_{n-1} / (n w_n) with w_k the Euclidean unit-ball volume."""
    return 2.0 * math.exp(ball_volume_log(2.0, n - 1) - ball_volume_log(2.0, n)) / n


def m_empirical(projections: Sequence[float], s) -> float | np.ndarray:
    """Exact tail-integral M of the empirical measure of |projections|.

    Piecewise closed form from suffix sums of the sorted values; the inner
    integral against an atomic measure is a step-weighted sum and the outer
    integral is exact on each step.
    """
    fn = from_empirical(projections)
    ss = np.asarray(s, dtype=float)
    if ss.ndim == 0:
        return fn.eval(float(ss))
    return np.array([fn.eval(float(v)) for v in ss])


# ---------------------------------------------------------------------------
# constructors

def from_power(exponent: float, coeff: float = 1.0) -> OrliczFunction:
    """M(t) = coeff * t^exponent (exponent >= 1, coeff > 0)."""
    if exponent < 1.0 or coeff <= 0:
        raise DomainError("power Orlicz functions need exponent >= 1 and coeff > 0")
    return OrliczFunction(
        eval=lambda t: coeff * float(t) ** exponent,
        zero_threshold=0.0,
        kind="power",
    )


def from_cube() -> OrliczFunction:
    """Coordinate tail integral of the volume-1 cube: t/4 + 1/t - 1 past 2."""

    def ev(t: float) -> float:
        if t <= 2.0:
            return 0.0
        return t / 4.0 + 1.0 / t - 1.0

    return OrliczFunction(eval=ev, zero_threshold=2.0, kind="tail-integral")


def from_pball(
    p: float,
    n: int,
    form: str = "auto",
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> OrliczFunction:
    """Closed-form coordinate Orlicz function of the normalized l_p ball.

    form "auto" picks the representation with the fewest quadratures for
    the given p (pure closed form for p=1, single integral for p=2).
    """
    if math.isinf(p):
        return from_cube()
    if form == "auto":
        form = "second" if p < 2.0 else "first"
    if form == "first":
        fn, kind = m_pball_first, "pball-closed-form-1"
    elif form == "second":
        fn, kind = m_pball_second, "pball-closed-form-2"
    else:
        raise DomainError(f"unknown representation {form!r}")
    radius = math.exp(-ball_volume_log(p, n) / n)

    def ev(t: float) -> float:
        if t * radius <= 1.0:
            return 0.0
        return fn(p, n, 1.0 / t, quad)

    return OrliczFunction(eval=ev, zero_threshold=1.0 / radius, kind=kind)


def from_tail(spec: MTailSpec) -> OrliczFunction:
    """Tail-integral Orlicz function of an arbitrary marginal."""
    return OrliczFunction(
        eval=lambda t: m_from_tail(spec, t),
        zero_threshold=1.0 / spec.marginal.support_radius,
        kind="tail-integral" if spec.marginal.hist_edges is None else "empirical",
    )


def from_empirical(projections: Sequence[float]) -> OrliczFunction:
    """Tail-integral Orlicz function of the empirical measure of |projections|."""
    v = np.abs(np.asarray(projections, dtype=float).ravel())
    if v.size == 0:
        raise DomainError("empirical construction needs at least one projection")
    if not np.all(np.isfinite(v)):
        raise DomainError("projections must be finite")
    total = v.size
    v = np.sort(v[v > 0])[::-1]  # descending; zero atoms never enter the tail
    if v.size == 0:
        raise EstimationError("all projections vanish")
    thresholds = 1.0 / v  # ascending
    prefix = np.cumsum(v)  # prefix[k-1] = sum of k largest values
    # integral of the step function up to each threshold
    area = np.concatenate(([0.0], np.cumsum(prefix[:-1] * np.diff(thresholds))))

    def ev(t: float) -> float:
        if t <= thresholds[0]:
            return 0.0
        k = int(np.searchsorted(thresholds, t, side="right"))
        return float(area[k - 1] + prefix[k - 1] * (t - thresholds[k - 1])) / total

    return OrliczFunction(eval=ev, zero_threshold=float(thresholds[0]), kind="empirical")


def from_spherical(n: int, quad: QuadratureSpec = DEFAULT_QUAD) -> OrliczFunction:
    """Orlicz function of the first sphere coordinate in dimension n."""
    return OrliczFunction(
        eval=lambda t: m_spherical(n, t, quad),
        zero_threshold=1.0,
        kind="spherical",
    )


# ---------------------------------------------------------------------------
# duals, norms, inversion

def _convexity_check(M: OrliczFunction, grid_max: float, points: int = 33) -> None:
    ts = np.linspace(0.0, grid_max, points)
    vals = np.array([M.eval(float(t)) for t in ts])
    mids = np.array([M.eval(float(t)) for t in 0.5 * (ts[:-1] + ts[1:])])
    slack = 1e-10 * max(1.0, float(np.max(np.abs(vals))))
    if np.any(mids > 0.5 * (vals[:-1] + vals[1:]) + slack):
        raise DomainError("input fails the midpoint convexity test")


def legendre_dual(M: OrliczFunction, grid_max: float) -> OrliczFunction:
    """M*(x) = sup_{t in [0, grid_max]} (x t - M(t)) by ternary search."""
    if not grid_max > 0:
        raise DomainError("grid_max must be positive")
    _convexity_check(M, grid_max)

    def ev(x: float) -> float:
        if x < 0:
            raise DomainError("dual Orlicz functions are defined for x >= 0")
        lo, hi = 0.0, grid_max
        for _ in range(90):
            if hi - lo <= 1e-13 * grid_max:
                break
            m1 = lo + (hi - lo) / 3.0
            m2 = hi - (hi - lo) / 3.0
            if x * m1 - M.eval(m1) < x * m2 - M.eval(m2):
                lo = m1
            else:
                hi = m2
        t_star = 0.5 * (lo + hi)
        best = max(x * t - M.eval(t) for t in (0.0, t_star, grid_max))
        return max(best, 0.0)

    # the dual vanishes below the smallest slope of M
    probes = grid_max * np.logspace(-12.0, 0.0, 25)
    slopes = [M.eval(float(t)) / float(t) for t in probes]
    return OrliczFunction(eval=ev, zero_threshold=float(min(slopes)), kind=M.kind)


def luxemburg_norm(x: Sequence[float], M: OrliczFunction) -> float:
    """inf{rho > 0 : sum_i M(|x_i| / rho) <= 1} by monotone bisection."""
    v = np.abs(np.asarray(x, dtype=float).ravel())
    if v.size == 0:
        raise DomainError("the norm of an empty vector is undefined")
    top = float(v.max())
    if top == 0.0:
        return 0.0

    def budget(rho: float) -> float:
        return float(sum(M.eval(float(vi / rho)) for vi in v if vi > 0))

    lo = top / BRACKET_LIMIT
    hi = v.size * top * BRACKET_LIMIT
    if budget(lo) <= 1.0:
        raise RangeError("Luxemburg norm below the bracketing range")
    if budget(hi) > 1.0:
        raise RangeError("Luxemburg norm above the bracketing range")
    # keep budget(lo) > 1 >= budget(hi)
    while hi - lo > 1e-10 * hi:
        mid = 0.5 * (lo + hi)
        if budget(mid) <= 1.0:
            hi = mid
        else:
            lo = mid
    return hi


def invert_for_support(M: OrliczFunction, N: int) -> float:
    """inf{s > 0 : M(1/s) <= 1/N}, the support-function estimate at level N.

    Exploits that s -> M(1/s) is nonincreasing; the bracket is found by
    doubling away from the zero threshold.
    """
    if N < 1:
        raise DomainError("N must be a positive integer")
    level = 1.0 / N
    s_ref = 1.0 / M.zero_threshold if M.zero_threshold > 0 else 1.0

    def phi(s: float) -> float:
        return M.eval(1.0 / s)

    hi = s_ref
    doublings = 0
    while phi(hi) > level:
        hi *= 2.0
        doublings += 1
        if hi > s_ref * BRACKET_LIMIT:
            raise RangeError("M(1/s) stays above 1/N within the bracketing range")
    lo = hi / 2.0 if doublings else s_ref / 2.0
    while phi(lo) <= level:
        lo /= 2.0
        if lo < s_ref / BRACKET_LIMIT:
            # M never exceeds 1/N on the representable range
            return lo
    # invariant: phi(lo) > level >= phi(hi)
    while hi - lo > 1e-9 * hi:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= level:
            hi = mid
        else:
            lo = mid
    return hi


# Fractions of the support radius used by the cross-representation checks.
# The second closed form carries an x^{-(2-1/p)} leading term, so for large
# p and small s its conditioning exceeds double precision; s/support >= 0.3
# keeps the worst cancellation near 1e4, leaving 1e-6 agreement reachable.
CONSISTENCY_BAND = (0.30, 0.95)


def build_consistency_grid(ps, ns, s_count: int = 10):
    """(p, n, s_fraction) triples for the mutual-consistency checks."""
    lo, hi = CONSISTENCY_BAND
    fracs = np.linspace(lo, hi, s_count)
    return [(float(p), int(n), float(f)) for p in ps for n in ns for f in fracs]


def export_tabulation(
    M: OrliczFunction,
    path,
    t_min: Optional[float] = None,
    t_max: Optional[float] = None,
    points: int = 257,
) -> None:
    """CSV of (t, M(t)) on a log grid, 17 significant digits."""
    anchor = M.zero_threshold if M.zero_threshold > 0 else 1e-3
    lo = t_min if t_min is not None else 0.9 * anchor
    hi = t_max if t_max is not None else 1e4 * max(anchor, 1e-3)
    if not (0 < lo < hi):
        raise DomainError("need 0 < t_min < t_max")
    grid = np.exp(np.linspace(math.log(lo), math.log(hi), points))
    with open(path, "w", newline="\n", encoding="utf-8") as fh:
        fh.write("t,M\n")
        for t in grid:
            fh.write(f"{t:.17g},{M.eval(float(t)):.17g}\n")
