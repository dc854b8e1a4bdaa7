"""Normalized l_p balls: marginal section densities, support functions,
isotropy diagnostics, and seeded uniform samplers.

Random streams are counter-based (numpy Philox) and derived by hashing
(seed, path); every batch of work owns its stream, so results are
reproducible regardless of chunking or parallelism.
"""

from __future__ import annotations

import hashlib
import math
import struct
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError, EstimationError
from .mathkit import (
    DEFAULT_QUAD,
    Interval,
    QuadratureSpec,
    ball_volume_log,
    quad_adaptive,
)

__all__ = [
    "BodySpec",
    "Direction",
    "MarginalDensity",
    "SampleBatch",
    "IsotropyReport",
    "stream",
    "derive_seed",
    "normalization_scale",
    "support_function",
    "marginal_coordinate",
    "coordinate_marginal",
    "marginal_general",
    "sample_uniform",
    "sample_sphere",
    "sample_norms",
    "project_uniform",
    "circumradius",
    "contains",
    "isotropy_report",
    "isotropic_constant",
]

_CHUNK = 1 << 16


# ---------------------------------------------------------------------------
# reproducible random streams

def _hash_path(seed: int, path) -> bytes:
    h = hashlib.blake2b(digest_size=16)
    h.update(struct.pack("<q", int(seed)))
    for item in path:
        if isinstance(item, str):
            raw = item.encode("utf-8")
            h.update(b"s" + struct.pack("<I", len(raw)) + raw)
        else:
            h.update(b"i" + struct.pack("<q", int(item)))
    return h.digest()


def stream(seed: int, *path) -> np.random.Generator:
    """Philox generator keyed by (seed, path); independent per path."""
    key = np.frombuffer(_hash_path(seed, path), dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def derive_seed(seed: int, *path) -> int:
    """A 63-bit child seed for handing to a sub-computation."""
    return int.from_bytes(_hash_path(seed, path)[:8], "little") >> 1


# ---------------------------------------------------------------------------
# body specifications

@dataclass(frozen=True)
class BodySpec:
    """An l_p ball in dimension n; normalized=True selects the volume-1 copy."""

    p: float
    n: int
    normalized: bool = True

    def __post_init__(self):
        if math.isnan(self.p) or self.p < 1.0:
            raise DomainError(f"p must satisfy 1 <= p <= inf, got {self.p!r}")
        if self.n < 1 or int(self.n) != self.n:
            raise DomainError(f"n must be a positive integer, got {self.n!r}")


@dataclass(frozen=True)
class Direction:
    """Unit vector; constructor checks the norm, from_vector normalizes."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.asarray(self.coords, dtype=float)
        object.__setattr__(self, "coords", c)
        if c.ndim != 1 or c.size < 1:
            raise DomainError("direction must be a 1-D vector")
        if abs(float(np.linalg.norm(c)) - 1.0) > 1e-12:
            raise DomainError("direction must be a unit vector (|norm - 1| <= 1e-12)")

    @classmethod
    def from_vector(cls, vec) -> "Direction":
        v = np.asarray(vec, dtype=float)
        norm = float(np.linalg.norm(v))
        if norm == 0.0 or not math.isfinite(norm):
            raise DomainError("cannot normalize a zero or non-finite vector")
        return cls(v / norm)

    @classmethod
    def canonical(cls, n: int, axis: int = 0) -> "Direction":
        if not 0 <= axis < n:
            raise DomainError(f"axis {axis} outside dimension {n}")
        v = np.zeros(n)
        v[axis] = 1.0
        return cls(v)


def normalization_scale(body: BodySpec) -> float:
    """Coordinate half-width of the body: |B_p^n|^{-1/n} when normalized."""
    if not body.normalized:
        return 1.0
    if math.isinf(body.p):
        return 0.5
    return math.exp(-ball_volume_log(body.p, body.n) / body.n)


def support_function(body: BodySpec, theta: Direction) -> float:
    """h(theta) = scale * dual-norm of theta (q conjugate to p)."""
    coords = theta.coords
    if coords.size != body.n:
        raise DomainError("direction dimension does not match the body")
    scale = normalization_scale(body)
    p = body.p
    if math.isinf(p):
        dual = float(np.sum(np.abs(coords)))
    elif p == 1.0:
        dual = float(np.max(np.abs(coords)))
    else:
        q = p / (p - 1.0)
        dual = float(np.sum(np.abs(coords) ** q) ** (1.0 / q))
    return scale * dual


def circumradius(body: BodySpec) -> float:
    """Largest Euclidean norm over the body."""
    scale = normalization_scale(body)
    p = body.p
    if math.isinf(p):
        return scale * math.sqrt(body.n)
    if p <= 2.0:
        return scale
    # max of ||x||_2 over the l_p ball is attained on the diagonal
    return scale * body.n ** (0.5 - 1.0 / p)


def contains(body: BodySpec, x: np.ndarray, tol: float = 1e-12) -> np.ndarray:
    """Membership mask after rescaling to the unit l_p ball."""
    pts = np.atleast_2d(np.asarray(x, dtype=float)) / normalization_scale(body)
    if math.isinf(body.p):
        return np.max(np.abs(pts), axis=1) <= 1.0 + tol
    return np.sum(np.abs(pts) ** body.p, axis=1) <= 1.0 + tol


# ---------------------------------------------------------------------------
# marginal section densities

@dataclass(frozen=True)
class MarginalDensity:
    """Even 1-D density of <X, theta> for X uniform in the body.

    density is vectorized over t and vanishes for |t| > support_radius.
    Histogram-backed marginals carry their one-sided bin data so downstream
    integrals can be taken exactly; tail_moment(a) = E[|X|; |X| >= a] and
    survival(a) = P(|X| >= a) are optional exact hooks.
    """

    density: Callable[[np.ndarray], np.ndarray]
    support_radius: float
    body: Optional[BodySpec] = None
    direction: Optional[np.ndarray] = None
    kind: str = "closed-form"
    tail_moment: Optional[Callable[[float], float]] = None
    survival: Optional[Callable[[float], float]] = None
    hist_edges: Optional[np.ndarray] = None
    hist_density: Optional[np.ndarray] = None

    def __post_init__(self):
        if not (self.support_radius > 0 and math.isfinite(self.support_radius)):
            raise DomainError("support_radius must be positive and finite")


def marginal_coordinate(body: BodySpec, t) -> np.ndarray | float:
    """Section volume |K ∩ {x_j = t}| of the normalized body, any axis j."""
    if not body.normalized:
        raise DomainError("coordinate marginals are defined for normalized bodies")
    p, n = body.p, body.n
    tt = np.asarray(t, dtype=float)
    scalar = tt.ndim == 0
    tt = np.atleast_1d(np.abs(tt))
    radius = normalization_scale(body)
    if math.isinf(p):
        out = np.where(tt <= radius, 1.0, 0.0)
    elif n == 1:
        out = np.where(tt <= radius, 1.0, 0.0)
    else:
        log_c = (
            ball_volume_log(p, n - 1)
            + ball_volume_log(p, n) / n
            - ball_volume_log(p, n)
        )
        with np.errstate(divide="ignore", invalid="ignore", under="ignore"):
            y = np.minimum((tt / radius) ** p, 1.0)
            out = np.where(
                tt <= radius,
                np.exp(log_c + ((n - 1) / p) * np.log1p(-y)),
                0.0,
            )
    return float(out[0]) if scalar else out


def _pball_tail_moment(body: BodySpec, quad: QuadratureSpec) -> Callable[[float], float]:
    quad = quad.rel_only()
    radius = normalization_scale(body)

    def tail(a: float) -> float:
        if a >= radius:
            return 0.0
        a = max(a, 0.0)
        return quad_adaptive(
            lambda r: 2.0 * r * marginal_coordinate(body, r),
            Interval(a, radius),
            quad,
        )

    return tail


def coordinate_marginal(body: BodySpec, quad: QuadratureSpec = DEFAULT_QUAD) -> MarginalDensity:
    """MarginalDensity for a canonical basis direction of the body."""
    radius = normalization_scale(body)
    direction = np.zeros(body.n)
    direction[0] = 1.0
    if math.isinf(body.p) or body.n == 1:
        # uniform density 1 on [-radius, radius] (radius = 1/2 when normalized)
        return MarginalDensity(
            density=lambda t: np.where(np.abs(np.asarray(t, float)) <= radius, 1.0, 0.0),
            support_radius=radius,
            body=body,
            direction=direction,
            kind="uniform",
            tail_moment=lambda a: max(radius * radius - max(a, 0.0) ** 2, 0.0),
            survival=lambda a: max(2.0 * (radius - max(a, 0.0)), 0.0),
        )
    return MarginalDensity(
        density=lambda t: marginal_coordinate(body, t),
        support_radius=radius,
        body=body,
        direction=direction,
        kind="closed-form",
        tail_moment=_pball_tail_moment(body, quad.tighter()),
    )


def _histogram_hooks(edges: np.ndarray, dens: np.ndarray):
    # one-sided density g on [0, R]; suffix integrals for survival/first moment
    widths = np.diff(edges)
    seg_mass = dens * widths
    seg_moment = dens * np.diff(edges**2) / 2.0
    suffix_mass = np.concatenate((np.cumsum(seg_mass[::-1])[::-1], [0.0]))
    suffix_moment = np.concatenate((np.cumsum(seg_moment[::-1])[::-1], [0.0]))
    top = edges[-1]

    def survival(a: float) -> float:
        if a >= top:
            return 0.0
        a = max(a, 0.0)
        i = min(int(np.searchsorted(edges, a, side="right")) - 1, dens.size - 1)
        return float(dens[i] * (edges[i + 1] - a) + suffix_mass[i + 1])

    def tail_moment(a: float) -> float:
        if a >= top:
            return 0.0
        a = max(a, 0.0)
        i = min(int(np.searchsorted(edges, a, side="right")) - 1, dens.size - 1)
        return float(dens[i] * (edges[i + 1] ** 2 - a * a) / 2.0 + suffix_moment[i + 1])

    return survival, tail_moment


def marginal_general(
    body: BodySpec,
    theta: Direction,
    samples: int,
    seed: int,
) -> MarginalDensity:
    """Empirical even marginal from |<X_i, theta>| with Freedman-Diaconis bins."""
    if samples < 10_000:
        raise DomainError("marginal_general requires at least 1e4 samples")
    proj = np.abs(project_uniform(body, theta, samples, seed))
    top = float(proj.max())
    q75, q25 = np.percentile(proj, [75.0, 25.0])
    width = 2.0 * (q75 - q25) / samples ** (1.0 / 3.0)
    if not width > 0 or top <= 0:
        raise EstimationError("degenerate projections: all values effectively equal")
    nbins = int(min(max(round(top / width), 1), 4096))
    counts, edges = np.histogram(proj, bins=nbins, range=(0.0, top))
    g = counts / (samples * (top / nbins))  # one-sided density, integrates to 1
    survival, tail_moment = _histogram_hooks(edges, g)

    def density(t):
        tt = np.abs(np.asarray(t, dtype=float))
        idx = np.clip(np.searchsorted(edges, tt, side="right") - 1, 0, nbins - 1)
        return np.where(tt <= top, g[idx] / 2.0, 0.0)

    return MarginalDensity(
        density=density,
        support_radius=top,
        body=body,
        direction=theta.coords.copy(),
        kind="histogram",
        tail_moment=tail_moment,
        survival=survival,
        hist_edges=edges,
        hist_density=g,
    )


# ---------------------------------------------------------------------------
# samplers

@dataclass(frozen=True)
class SampleBatch:
    """Immutable batch of uniform points from a body."""

    points: np.ndarray
    seed: int
    body: BodySpec

    def to_csv(self, path) -> None:
        """One point per row, 17 significant digits, LF line endings."""
        with open(path, "w", newline="\n", encoding="utf-8") as fh:
            for row in self.points:
                fh.write(",".join(f"{v:.17g}" for v in row) + "\n")


def _chunk_ranges(count: int):
    for idx in range(0, (count + _CHUNK - 1) // _CHUNK):
        start = idx * _CHUNK
        yield idx, start, min(_CHUNK, count - start)


def _fill_uniform(body: BodySpec, out: np.ndarray, seed: int) -> None:
    p, n = body.p, body.n
    scale = normalization_scale(body)
    for idx, start, size in _chunk_ranges(out.shape[0]):
        if math.isinf(p):
            u = stream(seed, "cube", idx).random((size, n))
            out[start : start + size] = scale * (2.0 * u - 1.0)
            continue
        # |g_i|^p ~ Gamma(1/p, 1); the ratio representation is rejection-free
        gam = stream(seed, "gamma", idx).standard_gamma(1.0 / p, (size, n))
        expo = stream(seed, "expo", idx).standard_exponential(size)
        signs = np.where(stream(seed, "sign", idx).random((size, n)) < 0.5, -1.0, 1.0)
        radial = (gam.sum(axis=1) + expo) ** (1.0 / p)
        out[start : start + size] = scale * signs * gam ** (1.0 / p) / radial[:, None]


def sample_uniform(body: BodySpec, count: int, seed: int) -> SampleBatch:
    """count i.i.d. uniform points in the body; deterministic given seed.

    Streams are derived per chunk, so the first k points of a larger draw
    coincide with a smaller draw from the same seed.
    """
    if count < 1:
        raise DomainError("count must be positive")
    pts = np.empty((count, body.n))
    _fill_uniform(body, pts, seed)
    return SampleBatch(points=pts, seed=seed, body=body)


def project_uniform(body: BodySpec, theta: Direction, count: int, seed: int) -> np.ndarray:
    """<X_i, theta> for uniform X_i, computed chunkwise to bound memory."""
    if count < 1:
        raise DomainError("count must be positive")
    out = np.empty(count)
    buf = np.empty((_CHUNK, body.n))
    for idx, start, size in _chunk_ranges(count):
        view = buf[:size]
        _fill_chunk(body, view, seed, idx)
        out[start : start + size] = view @ theta.coords
    return out


def sample_norms(body: BodySpec, count: int, seed: int) -> np.ndarray:
    """Euclidean norms of uniform points, computed chunkwise."""
    if count < 1:
        raise DomainError("count must be positive")
    out = np.empty(count)
    buf = np.empty((_CHUNK, body.n))
    for idx, start, size in _chunk_ranges(count):
        view = buf[:size]
        _fill_chunk(body, view, seed, idx)
        out[start : start + size] = np.linalg.norm(view, axis=1)
    return out


def _fill_chunk(body: BodySpec, view: np.ndarray, seed: int, idx: int) -> None:
    p, n = body.p, body.n
    scale = normalization_scale(body)
    size = view.shape[0]
    if math.isinf(p):
        u = stream(seed, "cube", idx).random((size, n))
        view[:] = scale * (2.0 * u - 1.0)
        return
    gam = stream(seed, "gamma", idx).standard_gamma(1.0 / p, (size, n))
    expo = stream(seed, "expo", idx).standard_exponential(size)
    signs = np.where(stream(seed, "sign", idx).random((size, n)) < 0.5, -1.0, 1.0)
    radial = (gam.sum(axis=1) + expo) ** (1.0 / p)
    view[:] = scale * signs * gam ** (1.0 / p) / radial[:, None]


def sample_sphere(n: int, count: int, seed: int) -> np.ndarray:
    """count i.i.d. uniform directions on S^{n-1}, one unit row each."""
    if n < 1 or count < 1:
        raise DomainError("n and count must be positive")
    out = np.empty((count, n))
    for idx, start, size in _chunk_ranges(count):
        g = stream(seed, "sphere", idx).standard_normal((size, n))
        norms = np.linalg.norm(g, axis=1)
        while np.any(norms == 0.0):  # pragma: no cover - probability zero
            bad = norms == 0.0
            g[bad] = stream(seed, "sphere-retry", idx).standard_normal((int(bad.sum()), n))
            norms = np.linalg.norm(g, axis=1)
        out[start : start + size] = g / norms[:, None]
    return out


# ---------------------------------------------------------------------------
# isotropy diagnostics

@dataclass(frozen=True)
class IsotropyReport:
    center: np.ndarray
    cov_diag: np.ndarray
    cov: np.ndarray
    l_k: float
    samples: int
    seed: int


def isotropy_report(body: BodySpec, samples: int, seed: int) -> IsotropyReport:
    """Sample estimates of the barycenter, covariance and isotropic constant."""
    if not body.normalized:
        raise DomainError("isotropy diagnostics assume the volume-1 body")
    n = body.n
    sum_x = np.zeros(n)
    sum_xx = np.zeros((n, n))
    buf = np.empty((_CHUNK, n))
    for idx, start, size in _chunk_ranges(samples):
        view = buf[:size]
        _fill_chunk(body, view, seed, idx)
        sum_x += view.sum(axis=0)
        sum_xx += view.T @ view
    center = sum_x / samples
    cov = sum_xx / samples
    diag = np.diag(cov).copy()
    return IsotropyReport(
        center=center,
        cov_diag=diag,
        cov=cov,
        l_k=float(math.sqrt(diag.mean())),
        samples=samples,
        seed=seed,
    )


def isotropic_constant(body: BodySpec, quad: QuadratureSpec = DEFAULT_QUAD) -> float:
    """Exact L_K via the second moment of the coordinate marginal."""
    if math.isinf(body.p):
        return 1.0 / math.sqrt(12.0)
    radius = normalization_scale(body)
    second = quad_adaptive(
        lambda t: 2.0 * t * t * marginal_coordinate(body, t),
        Interval(0.0, radius),
        quad,
    )
    return math.sqrt(second)
