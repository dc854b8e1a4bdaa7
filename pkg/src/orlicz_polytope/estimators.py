"""Headline quantities: expected support functions and mean widths of
symmetric random polytopes, estimated two ways.

The Orlicz route inverts the direction's Orlicz function at level 1/N;
the Monte Carlo route simulates max_i |<X_i, theta>| directly.  Both are
reported side by side, together with sphere averages, the matching-scale
solver, a general profile-based upper bound, and direction-measure scans.

MC work units derive their random stream from (seed, unit index), so
results are bit-identical regardless of the degree of parallelism; means
are reduced in a fixed order.
"""

from __future__ import annotations

import math
import time
import warnings
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .bodies import (
    BodySpec,
    Direction,
    MarginalDensity,
    derive_seed,
    isotropic_constant,
    marginal_general,
    project_uniform,
    sample_norms,
    sample_sphere,
    sample_uniform,
)
from .errors import DomainError, HypothesisError, RangeError
from .mathkit import DEFAULT_QUAD, QuadratureSpec, quad_cumulative
from .orlicz import (
    MTailSpec,
    OrliczFunction,
    from_cube,
    from_empirical,
    from_pball,
    from_tail,
    invert_for_support,
    spherical_prefactor,
)

__all__ = [
    "PolytopeExperiment",
    "EstimateReport",
    "MCValue",
    "ScanRow",
    "ScanResult",
    "DirectionScan",
    "build_direction_orlicz",
    "expected_support_orlicz",
    "expected_support_mc",
    "direction_support_profile",
    "mean_width_orlicz",
    "mean_width_orlicz_report",
    "mean_width_mc",
    "sphere_average_m",
    "solve_tilde_s",
    "check_profile_hypotheses",
    "general_upper_bound",
    "direction_measure_scan",
    "scaling_fit",
    "run_support_scan",
    "run_mean_width_scan",
]

DEFAULT_PROJ_SAMPLES = 10**6


# ---------------------------------------------------------------------------
# experiment descriptions and reports

@dataclass(frozen=True)
class PolytopeExperiment:
    """One support-function experiment: N vertex pairs in a body."""

    body: BodySpec
    N: int
    direction: object = 0  # Direction, or canonical axis index
    mc_trials: int = 200
    seed: int = 0

    def __post_init__(self):
        if self.N < 1:
            raise DomainError("N must be positive")
        if self.mc_trials < 1:
            raise DomainError("mc_trials must be positive")
        if self.N < self.body.n:
            warnings.warn("N below the dimension: the polytope is degenerate", stacklevel=2)

    @property
    def mc_samples_per_trial(self) -> int:
        return self.N

    def resolved_direction(self) -> Direction:
        return _resolve_direction(self.body, self.direction)


@dataclass(frozen=True)
class MCValue:
    """A Monte Carlo mean with its standard error."""

    value: float
    stderr: float
    samples: int
    seed: int


@dataclass(frozen=True)
class EstimateReport:
    """Paired Orlicz-inversion estimate and Monte Carlo oracle."""

    orlicz_value: Optional[float]
    mc_mean: float
    mc_ci95: tuple[float, float]
    ratio: Optional[float]
    meta: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "orlicz_value": self.orlicz_value,
            "mc_mean": self.mc_mean,
            "mc_ci95": list(self.mc_ci95),
            "ratio": self.ratio,
            "meta": dict(self.meta),
        }


@dataclass(frozen=True)
class ScanRow:
    N: int
    estimate: float
    oracle: Optional[float]
    ratio: Optional[float]


@dataclass(frozen=True)
class ScanResult:
    rows: list[ScanRow]
    fitted_exponent: float
    fit_r2: float
    transform: str


@dataclass(frozen=True)
class DirectionScan:
    """Measure of directions meeting calibrated two-sided bounds."""

    fraction_upper: float
    fraction_lower: float
    fraction_below_lower: float
    fraction_between: float
    fraction_above_upper: float
    constants_used: tuple[float, float]
    predicted_upper_measure: float
    predicted_lower_measure: float
    threshold_upper: float
    threshold_lower: float
    estimates: np.ndarray


def _resolve_direction(body: BodySpec, direction) -> Direction:
    if isinstance(direction, Direction):
        if direction.coords.size != body.n:
            raise DomainError("direction dimension does not match the body")
        return direction
    if isinstance(direction, (int, np.integer)):
        return Direction.canonical(body.n, int(direction))
    return Direction.from_vector(np.asarray(direction, dtype=float))


def _is_canonical(theta: Direction) -> bool:
    c = theta.coords
    return int(np.count_nonzero(c)) == 1 and abs(abs(float(c[np.nonzero(c)[0][0]])) - 1.0) < 1e-12


# ---------------------------------------------------------------------------
# Orlicz-side estimators

def build_direction_orlicz(
    body: BodySpec,
    direction=0,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
    seed: int = 0,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> OrliczFunction:
    """Orlicz function of <X, theta> for X uniform in the body.

    Closed forms when available: the cube marginal for p = inf on a
    canonical axis, the l_p closed forms on canonical axes, and (by
    rotational invariance) the p = 2 closed form for every direction.
    Other directions go through an empirical projection histogram.
    """
    theta = _resolve_direction(body, direction)
    if not body.normalized:
        raise DomainError("Orlicz constructions assume the volume-1 body")
    if body.p == 2.0:
        return from_pball(2.0, body.n, quad=quad)
    if _is_canonical(theta):
        if math.isinf(body.p):
            return from_cube()
        return from_pball(body.p, body.n, quad=quad)
    marg = marginal_general(body, theta, proj_samples, derive_seed(seed, "marginal"))
    return from_tail(MTailSpec(marg, quad))


def expected_support_orlicz(
    body: BodySpec,
    direction,
    N: int,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
    seed: int = 0,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Support-function estimate: invert the direction's Orlicz function at 1/N."""
    M = build_direction_orlicz(body, direction, proj_samples, seed, quad)
    return invert_for_support(M, N)


def direction_support_profile(
    body: BodySpec,
    dirs: np.ndarray,
    N: int,
    seed: int = 0,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> np.ndarray:
    """Orlicz estimates for each direction row; one value reused for p = 2."""
    dirs = np.atleast_2d(np.asarray(dirs, dtype=float))
    if body.p == 2.0:
        value = invert_for_support(from_pball(2.0, body.n, quad=quad), N)
        return np.full(dirs.shape[0], value)
    out = np.empty(dirs.shape[0])
    for i, row in enumerate(dirs):
        out[i] = expected_support_orlicz(
            body, Direction.from_vector(row), N,
            proj_samples=proj_samples, seed=derive_seed(seed, "profile", i), quad=quad,
        )
    return out


def mean_width_orlicz(
    body: BodySpec,
    N: int,
    n_dirs: int = 100,
    seed: int = 0,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> float:
    """Sphere average of the Orlicz support estimate.

    For p = 2 the estimate is direction-free, so a single inversion is
    exact; otherwise n_dirs sampled directions are averaged.
    """
    return mean_width_orlicz_report(body, N, n_dirs, seed, proj_samples, quad).value


def mean_width_orlicz_report(
    body: BodySpec,
    N: int,
    n_dirs: int = 100,
    seed: int = 0,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
    quad: QuadratureSpec = DEFAULT_QUAD,
) -> MCValue:
    """Sphere average with the direction-sampling standard error attached."""
    if body.p == 2.0:
        return MCValue(expected_support_orlicz(body, 0, N, quad=quad), 0.0, 1, seed)
    if n_dirs < 100:
        raise DomainError("mean_width_orlicz needs n_dirs >= 100")
    dirs = sample_sphere(body.n, n_dirs, derive_seed(seed, "mw-dirs"))
    values = direction_support_profile(body, dirs, N, seed, proj_samples, quad)
    return MCValue(
        value=float(values.mean()),
        stderr=float(values.std(ddof=1) / math.sqrt(n_dirs)),
        samples=n_dirs,
        seed=seed,
    )


# ---------------------------------------------------------------------------
# Monte Carlo oracles

def _support_trial(args) -> float:
    p, n, normalized, N, coords, seed, trial = args
    body = BodySpec(p, n, normalized)
    theta = Direction(np.asarray(coords))
    proj = project_uniform(body, theta, N, derive_seed(seed, "esup", trial))
    return float(np.max(np.abs(proj)))


def _mean_width_trial(args) -> float:
    p, n, normalized, N, n_dirs, seed, trial = args
    body = BodySpec(p, n, normalized)
    pts = sample_uniform(body, N, derive_seed(seed, "mw-pts", trial)).points
    dirs = sample_sphere(n, n_dirs, derive_seed(seed, "mw-dirs", trial))
    supports = np.zeros(n_dirs)
    step = max(1, (1 << 22) // max(n_dirs, 1))
    for lo in range(0, N, step):
        block = np.abs(pts[lo : lo + step] @ dirs.T).max(axis=0)
        np.maximum(supports, block, out=supports)
    return float(supports.mean())


def _parallel_map(fn, items, threads: int) -> list:
    if threads <= 1 or len(items) <= 1:
        return [fn(it) for it in items]
    with ProcessPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items, chunksize=max(1, len(items) // (4 * threads))))


def _mc_report(values: Sequence[float], orlicz_value: Optional[float], meta: dict) -> EstimateReport:
    arr = np.asarray(values, dtype=float)
    mean = float(arr.mean())
    sd = float(arr.std(ddof=1)) if arr.size > 1 else 0.0
    half = 1.96 * sd / math.sqrt(arr.size)
    ratio = mean / orlicz_value if orlicz_value else None
    return EstimateReport(
        orlicz_value=orlicz_value,
        mc_mean=mean,
        mc_ci95=(mean - half, mean + half),
        ratio=ratio,
        meta=meta,
    )


def expected_support_mc(
    exp: PolytopeExperiment,
    threads: int = 1,
    orlicz_value: Optional[float] = None,
) -> EstimateReport:
    """Monte Carlo oracle for E max_i |<X_i, theta>| with a 95% CI."""
    theta = exp.resolved_direction()
    t0 = time.perf_counter()
    args = [
        (exp.body.p, exp.body.n, exp.body.normalized, exp.N, theta.coords, exp.seed, t)
        for t in range(exp.mc_trials)
    ]
    values = _parallel_map(_support_trial, args, threads)
    if orlicz_value is None:
        orlicz_value = expected_support_orlicz(exp.body, theta, exp.N, seed=exp.seed)
    meta = {
        "seed": exp.seed,
        "trials": exp.mc_trials,
        "N": exp.N,
        "statistic": "max-abs-projection",
        "elapsed_s": time.perf_counter() - t0,
    }
    return _mc_report(values, orlicz_value, meta)


def mean_width_mc(
    body: BodySpec,
    N: int,
    trials: int,
    n_dirs: int,
    seed: int = 0,
    threads: int = 1,
    orlicz_value: Optional[float] = None,
) -> EstimateReport:
    """Monte Carlo mean width: fresh sphere directions per polytope draw."""
    if trials < 1 or n_dirs < 1:
        raise DomainError("trials and n_dirs must be positive")
    t0 = time.perf_counter()
    args = [(body.p, body.n, body.normalized, N, n_dirs, seed, t) for t in range(trials)]
    values = _parallel_map(_mean_width_trial, args, threads)
    meta = {
        "seed": seed,
        "trials": trials,
        "N": N,
        "n_dirs": n_dirs,
        "statistic": "mean-width",
        "elapsed_s": time.perf_counter() - t0,
    }
    return _mc_report(values, orlicz_value, meta)


# ---------------------------------------------------------------------------
# sphere averages of M and the matching scale

def _spherical_values(n: int, norms: np.ndarray, s: float) -> np.ndarray:
    """M_sph(norm/s) per sample, by cumulative quadrature on the sorted grid.

    Uses the bounded integrand (1 - t^-2)^{(n-1)/2} on [1, x]; a geometric
    refinement grid resolves the branch point at 1, and consecutive sample
    values keep every panel short.
    """
    x = np.sort(norms / s)
    x = x[x > 1.0 + 1e-15]
    below = norms.size - x.size
    if x.size == 0:
        return np.zeros(norms.size)
    m_exp = (n - 1) / 2.0

    def integrand(t):
        t = np.asarray(t, dtype=float)
        return np.exp(m_exp * np.log1p(-1.0 / (t * t)))

    u_hi = x[-1] - 1.0
    u_lo = min(max((x[0] - 1.0) * 1e-3, 1e-14), u_hi)
    refine = 1.0 + np.geomspace(u_lo, u_hi, 512)
    pts = np.unique(np.concatenate(([1.0], refine, x)))
    cums = quad_cumulative(integrand, pts)
    vals = spherical_prefactor(n) * cums[np.searchsorted(pts, x)]
    return np.concatenate((np.zeros(below), vals))


def sphere_average_m(body: BodySpec, s: float, samples: int, seed: int = 0) -> MCValue:
    """Monte Carlo over the body of the sphere-coordinate Orlicz function
    evaluated at ||x||_2 / s (zero where the norm falls below s)."""
    if not s > 0:
        raise DomainError("s must be positive")
    if samples < 2:
        raise DomainError("need at least two samples")
    norms = sample_norms(body, samples, derive_seed(seed, "sphavg"))
    values = _spherical_values(body.n, norms, s)
    return MCValue(
        value=float(values.mean()),
        stderr=float(values.std(ddof=1) / math.sqrt(samples)),
        samples=samples,
        seed=seed,
    )


def solve_tilde_s(
    body: BodySpec,
    N: int,
    samples: int,
    seed: int = 0,
    rel_tol: float = 1e-6,
) -> float:
    """Scale at which the sphere average of M(1/s) crosses 1/N.

    One frozen point cloud is reused for every bisection step, so the
    objective is deterministic and monotone in s.
    """
    if N < 2:
        raise DomainError("N must be at least 2")
    norms = np.sort(sample_norms(body, samples, derive_seed(seed, "tilde-s")))
    level = 1.0 / N

    def phi(s: float) -> float:
        return float(_spherical_values(body.n, norms, s).mean())

    hi = float(norms[-1])
    lo = hi / 2.0
    while phi(lo) <= level:
        lo /= 2.0
        if lo < hi / 1e9:
            raise RangeError("1/N is outside the attainable range of the sphere average")
    while hi - lo > rel_tol * hi:
        mid = 0.5 * (lo + hi)
        if phi(mid) <= level:
            hi = mid
        else:
            lo = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# general profile-based upper bound

def check_profile_hypotheses(marginal: MarginalDensity, fd_step: float = 1e-5) -> None:
    """Finite-difference checks on h = section^(1/(n-1)): h' < 0 on the
    interior and -h'/t nondecreasing.  Raises HypothesisError naming the
    failed hypothesis."""
    if marginal.body is None or marginal.body.n < 2:
        raise DomainError("profile hypotheses need a body of dimension >= 2")
    n = marginal.body.n
    radius = marginal.support_radius
    step = min(fd_step, 0.01 * radius)

    def h(t):
        return np.asarray(marginal.density(t), dtype=float) ** (1.0 / (n - 1))

    ts = np.linspace(0.05 * radius, 0.95 * radius, 19)
    hp = (h(ts + step) - h(ts - step)) / (2.0 * step)
    if not np.all(hp < 0):
        raise HypothesisError("h' < 0 on the interior")
    g = -hp / ts
    if not np.all(np.diff(g) >= -1e-8 * np.abs(g[:-1]) - 1e-300):
        raise HypothesisError("-h'/t nondecreasing")


def general_upper_bound(
    marginal: MarginalDensity,
    N: int,
    alpha: float = 4.0,
    fd_step: float = 1e-5,
) -> float:
    """Upper-bound scale h^{-1}(h(0) * (1 - alpha log N / n)) for the
    expected support function, valid under the profile hypotheses."""
    if marginal.body is None:
        raise DomainError("the marginal must reference its body")
    n = marginal.body.n
    if N < 1:
        raise DomainError("N must be positive")
    if not alpha > 0:
        raise DomainError("alpha must be positive")
    drop = alpha * math.log(N) / n
    if drop >= 1.0:
        raise DomainError("alpha * log(N) must stay below n")
    check_profile_hypotheses(marginal, fd_step)
    radius = marginal.support_radius

    def h(t: float) -> float:
        return float(marginal.density(t)) ** (1.0 / (n - 1))

    target = h(0.0) * (1.0 - drop)
    if target >= h(0.0):
        return 0.0
    lo, hi = 0.0, radius  # h(lo) > target >= h(hi)
    for _ in range(200):
        if hi - lo <= 1e-14 * radius:
            break
        mid = 0.5 * (lo + hi)
        if h(mid) > target:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


# ---------------------------------------------------------------------------
# direction-measure scans

def direction_measure_scan(
    body: BodySpec,
    N: int,
    r: float,
    n_dirs: int = 1000,
    seed: int = 0,
    proj_samples: int = 10**5,
) -> DirectionScan:
    """Per-direction Orlicz estimates against median-calibrated thresholds.

    The upper/lower thresholds are 4x and 1/4x the median estimate;
    fraction_upper (resp. fraction_lower) is the measure of directions at
    or below (resp. at or above) them, reported next to the orders the
    two-sided theory predicts for level r.
    """
    if n_dirs < 1000:
        raise DomainError("direction scans need n_dirs >= 1000")
    if not r > 0:
        raise DomainError("r must be positive")
    dirs = sample_sphere(body.n, n_dirs, derive_seed(seed, "scan-dirs"))
    if body.p == 2.0:
        value = invert_for_support(from_pball(2.0, body.n), N)
        estimates = np.full(n_dirs, value)
    else:
        cloud = sample_uniform(body, proj_samples, derive_seed(seed, "scan-cloud")).points
        estimates = np.empty(n_dirs)
        for i, d in enumerate(dirs):
            estimates[i] = invert_for_support(from_empirical(cloud @ d), N)
    med = float(np.median(estimates))
    upper, lower = 4.0 * med, med / 4.0
    scale = isotropic_constant(body) * math.sqrt(math.log(N))
    below = float(np.mean(estimates < lower))
    above = float(np.mean(estimates > upper))
    return DirectionScan(
        fraction_upper=float(np.mean(estimates <= upper)),
        fraction_lower=float(np.mean(estimates >= lower)),
        fraction_below_lower=below,
        fraction_between=1.0 - below - above,
        fraction_above_upper=above,
        constants_used=(upper / scale, lower / scale),
        predicted_upper_measure=1.0 - N ** (-r),
        predicted_lower_measure=min(1.0, math.sqrt(math.log(N)) / N**r),
        threshold_upper=upper,
        threshold_lower=lower,
        estimates=estimates,
    )


# ---------------------------------------------------------------------------
# scaling fits and scans

def scaling_fit(rows: Sequence[tuple[int, float]], x_transform: str = "log-log-N") -> tuple[float, float]:
    """Least-squares exponent for the growth law, plus R^2.

    "log-log-N" fits log(value) against log(log N); "log-N" fits value^2
    against log N.
    """
    if len(rows) < 4:
        raise DomainError("need at least 4 rows")
    ns = np.array([float(n) for n, _ in rows])
    vals = np.array([float(v) for _, v in rows])
    if np.unique(ns).size < 4:
        raise DomainError("need at least 4 distinct N values")
    if x_transform == "log-log-N":
        if np.any(vals <= 0):
            raise DomainError("log transform needs positive values")
        x = np.log(np.log(ns))
        y = np.log(vals)
    elif x_transform == "log-N":
        x = np.log(ns)
        y = vals**2
    else:
        raise DomainError(f"unknown transform {x_transform!r}")
    if np.ptp(x) <= 0:
        raise DomainError("degenerate x-range")
    slope, intercept = np.polyfit(x, y, 1)
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    r2 = 1.0 if ss_tot < 1e-30 else 1.0 - float(np.sum(resid**2)) / ss_tot
    return float(slope), r2


def _scan_rows(N_grid, estimates, oracles) -> list[ScanRow]:
    rows = []
    for N, est, orc in zip(N_grid, estimates, oracles):
        ratio = (orc / est) if (orc is not None and est) else None
        rows.append(ScanRow(N=int(N), estimate=float(est), oracle=orc, ratio=ratio))
    return rows


def run_support_scan(
    body: BodySpec,
    direction,
    N_grid: Sequence[int],
    trials: int = 200,
    seed: int = 0,
    threads: int = 1,
    mc_max_N: Optional[int] = None,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
) -> ScanResult:
    """Support-function law scan over N; fits log(est) vs log(log N)."""
    _check_grid(N_grid)
    estimates, oracles = [], []
    for N in N_grid:
        est = expected_support_orlicz(body, direction, int(N), proj_samples=proj_samples, seed=seed)
        estimates.append(est)
        if trials > 0 and (mc_max_N is None or N <= mc_max_N):
            rep = expected_support_mc(
                PolytopeExperiment(body, int(N), direction, trials, seed),
                threads=threads,
                orlicz_value=est,
            )
            oracles.append(rep.mc_mean)
        else:
            oracles.append(None)
    exp_, r2 = scaling_fit(list(zip(N_grid, estimates)), "log-log-N")
    return ScanResult(_scan_rows(N_grid, estimates, oracles), exp_, r2, "log-log-N")


def run_mean_width_scan(
    body: BodySpec,
    N_grid: Sequence[int],
    trials: int = 200,
    n_dirs: int = 100,
    seed: int = 0,
    threads: int = 1,
    mc_max_N: Optional[int] = None,
    proj_samples: int = DEFAULT_PROJ_SAMPLES,
) -> ScanResult:
    """Mean-width law scan over N; fits est^2 vs log N."""
    _check_grid(N_grid)
    estimates, oracles = [], []
    for N in N_grid:
        est = mean_width_orlicz(body, int(N), max(n_dirs, 100), seed, proj_samples)
        estimates.append(est)
        if trials > 0 and (mc_max_N is None or N <= mc_max_N):
            rep = mean_width_mc(body, int(N), trials, n_dirs, seed, threads, orlicz_value=est)
            oracles.append(rep.mc_mean)
        else:
            oracles.append(None)
    exp_, r2 = scaling_fit(list(zip(N_grid, estimates)), "log-N")
    return ScanResult(_scan_rows(N_grid, estimates, oracles), exp_, r2, "log-N")


def _check_grid(N_grid) -> None:
    if len(N_grid) < 4:
        raise DomainError("scans need an N-grid with at least 4 points")
    arr = np.asarray(N_grid)
    if np.any(np.diff(arr) <= 0):
        raise DomainError("the N-grid must be strictly increasing")
