"""Exact distribution of the GWO position update and its normal surrogate.

For one leader ``p`` and current component ``x`` the leader term is
``p + A |C p - x|`` with ``A ~ U[-a, a]`` and ``C ~ U[0, 2]``. Its density
``g`` is piecewise logarithmic on the finite support ``[p - n, p + n]``,
where ``m = a(|x - p| - |p|)`` and ``n = a(|x - p| + |p|)``. The full update
averages three independent leader terms; its density ``h`` is obtained here
by numerical convolution and compared against Monte Carlo samples and the
moment-matched normal used by bare-bones GWO.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from .core import RngStream

__all__ = [
    "DegenerateDistributionError",
    "DistComparison",
    "Histogram",
    "LeaderUpdateDist",
    "build_histogram",
    "compare_to_normal",
    "g_cdf",
    "g_normalization",
    "g_pdf",
    "h_cdf_numeric",
    "h_pdf_numeric",
    "ks_distance",
    "leader_moments",
    "mn_params",
    "normal_cdf",
    "normal_pdf",
    "sample_gwo_update",
    "sample_leader_term",
    "update_moments",
]


class DegenerateDistributionError(ValueError):
    """The update collapses to a point mass (``a = 0`` or ``x = p = 0``)."""


def mn_params(a: float, x: float, p: float) -> tuple[float, float]:
    """Return ``(m, n) = (a(|x-p| - |p|), a(|x-p| + |p|))``."""
    if a < 0:
        raise ValueError(f"step parameter a must be non-negative, got {a}")
    return a * (-abs(p) + abs(x - p)), a * (abs(p) + abs(x - p))


@dataclass(frozen=True)
class LeaderUpdateDist:
    a: float
    x: float
    p: float

    def __post_init__(self) -> None:
        if self.a < 0:
            raise ValueError(f"step parameter a must be non-negative, got {self.a}")

    @property
    def m(self) -> float:
        return mn_params(self.a, self.x, self.p)[0]

    @property
    def n(self) -> float:
        return mn_params(self.a, self.x, self.p)[1]

    @property
    def degenerate(self) -> bool:
        return self.n == 0.0

    def require_proper(self) -> None:
        if self.degenerate:
            raise DegenerateDistributionError(
                f"a={self.a}, x={self.x}, p={self.p} gives a point mass at p (zero-width support)"
            )


def _offset_density(v: float, m: float, n: float, p: float) -> float:
    """Density of the leader term at distance ``v = |u - p|`` from its centre."""
    if v >= n:
        return 0.0
    if p == 0.0:
        # |C p - x| is the constant |x|, so the term is uniform on [-n, n].
        return 1.0 / (2.0 * n)
    width = n - m
    if m <= 0.0:
        if v == 0.0:
            return math.inf
        if v < -m:
            return math.log(math.sqrt(-m * n) / v) / width
        return math.log(n / v) / (2.0 * width)
    if v < m:
        return math.log(n / m) / (2.0 * width)
    return math.log(n / v) / (2.0 * width)


def g_pdf(u, d: LeaderUpdateDist):
    """Density of a single leader term ``p + A |C p - x|`` at ``u``.

    When ``m <= 0`` the density has an integrable logarithmic singularity at
    ``u = p`` and ``inf`` is returned at that single point. Accepts a scalar
    or an array of ``u`` values.
    """
    d.require_proper()
    m, n = d.m, d.n
    if np.ndim(u) == 0:
        return _offset_density(abs(float(u) - d.p), m, n, d.p)
    v = np.abs(np.asarray(u, dtype=float) - d.p)
    return np.array([_offset_density(float(vi), m, n, d.p) for vi in v.ravel()]).reshape(v.shape)


def _half_mass(v, m: float, n: float, p: float):
    """Closed-form mass of the leader term in ``[p, p + v]`` for ``v >= 0``.

    Used to pre-integrate grid cells, including the one holding the
    logarithmic singularity. Reaches exactly 1/2 at ``v = n``.
    """
    v = np.minimum(np.asarray(v, dtype=float), n)
    if p == 0.0:
        return v / (2.0 * n)
    width = n - m

    def tail(t):
        # antiderivative of ln(n / t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, t * np.log(n / np.where(t > 0, t, 1.0)) + t, 0.0)

    if m <= 0.0:
        q = -m
        inner = np.minimum(v, q)
        with np.errstate(divide="ignore", invalid="ignore"):
            core = np.where(
                inner > 0,
                inner * np.log(np.sqrt(q * n) / np.where(inner > 0, inner, 1.0)) + inner,
                0.0,
            ) / width
        outer = np.where(v > q, (tail(v) - tail(q)) / (2.0 * width), 0.0)
        return core + outer
    flat = math.log(n / m) / (2.0 * width)
    return flat * np.minimum(v, m) + np.where(v > m, (tail(v) - tail(m)) / (2.0 * width), 0.0)


def _quad_from_centre(v: float, d: LeaderUpdateDist) -> float:
    # Integral of the density over [p, p + v], split at the kink |m| so the
    # logarithmic singularity only ever sits at an interval endpoint.
    m, n = d.m, d.n
    knots = [k for k in sorted({0.0, min(v, n), min(abs(m), n)}) if k <= v]
    total = 0.0
    for lo, hi in zip(knots[:-1], knots[1:]):
        total += integrate.quad(_offset_density, lo, hi, args=(m, n, d.p), limit=200)[0]
    return total


def g_cdf(u: float, d: LeaderUpdateDist) -> float:
    """``P(p + A |C p - x| <= u)`` by adaptive quadrature of :func:`g_pdf`."""
    d.require_proper()
    p, n = d.p, d.n
    if u <= p - n:
        return 0.0
    if u >= p + n:
        return 1.0
    if u == p:
        return 0.5
    half = _quad_from_centre(abs(u - p), d)
    return 0.5 + half if u > p else 0.5 - half


def g_normalization(d: LeaderUpdateDist) -> float:
    """Numerical integral of :func:`g_pdf` over its whole support (should be 1)."""
    d.require_proper()
    return 2.0 * _quad_from_centre(d.n, d)


def leader_moments(d: LeaderUpdateDist) -> tuple[float, float]:
    """Mean ``p`` and variance ``a**2/3 * ((x - p)**2 + p**2 / 3)`` of one leader term."""
    return d.p, d.a**2 / 3.0 * ((d.x - d.p) ** 2 + d.p**2 / 3.0)


def update_moments(a: float, x: float, p1: float, p2: float, p3: float) -> tuple[float, float]:
    """Mean and standard deviation of the averaged three-leader update."""
    if a < 0:
        raise ValueError(f"step parameter a must be non-negative, got {a}")
    ps = (p1, p2, p3)
    mu = (p1 + p2 + p3) / 3.0
    spread = sum((x - p) ** 2 + p**2 / 3.0 for p in ps)
    return mu, a / (3.0 * math.sqrt(3.0)) * math.sqrt(spread)


def _cell_masses(d: LeaderUpdateDist, step: float) -> np.ndarray:
    # Cells of width ``step`` centred on p + i*step, symmetric in i.
    half = max(int(math.ceil(d.n / step - 0.5)), 0)
    edges = (np.arange(-half, half + 2) - 0.5) * step
    cdf = 0.5 + np.sign(edges) * _half_mass(np.abs(edges), d.m, d.n, d.p)
    masses = np.diff(cdf)
    # enforce exact mirror symmetry lost to rounding in the cumulative sums
    return 0.5 * (masses + masses[::-1])


def _convolved_masses(dists, grid_points: int):
    for d in dists:
        d.require_proper()
    if grid_points < 256:
        raise ValueError(f"grid_points must be >= 256, got {grid_points}")
    # Step chosen so the summed support spans about ``grid_points`` cells.
    step = 2.0 * sum(d.n for d in dists) / grid_points
    mass = np.ones(1)
    for d in dists:
        mass = np.convolve(mass, _cell_masses(d, step))
    half = (mass.size - 1) // 2
    centre = sum(d.p for d in dists)
    s_grid = centre + np.arange(-half, half + 1) * step
    return s_grid, mass, step


def h_pdf_numeric(d1: LeaderUpdateDist, d2: LeaderUpdateDist, d3: LeaderUpdateDist,
                  grid_points: int = 4096) -> tuple[np.ndarray, np.ndarray]:
    """Density of the averaged update ``(x'_1 + x'_2 + x'_3) / 3`` on a uniform grid.

    Each leader density is integrated exactly over grid cells (so the
    logarithmic peaks carry their true mass), the three cell-mass vectors
    are convolved, and the sum's density is mapped to the average with the
    Jacobian factor 3: ``h(u) = 3 * (g1 * g2 * g3)(3u)``.

    Returns ``(u_grid, h)``; the grid is symmetric about ``(p1 + p2 + p3)/3``
    and covers the support of the average.
    """
    s_grid, mass, step = _convolved_masses((d1, d2, d3), grid_points)
    density_of_sum = mass / step
    return s_grid / 3.0, 3.0 * density_of_sum


def h_cdf_numeric(d1: LeaderUpdateDist, d2: LeaderUpdateDist, d3: LeaderUpdateDist,
                  grid_points: int = 4096):
    """Return a vectorised CDF of the averaged update built from the grid masses."""
    s_grid, mass, step = _convolved_masses((d1, d2, d3), grid_points)
    upper_edges = (s_grid + step / 2.0) / 3.0
    cum = np.minimum(np.cumsum(mass), 1.0)
    edges = np.concatenate([[upper_edges[0] - step / 3.0], upper_edges])
    levels = np.concatenate([[0.0], cum])

    def cdf(u):
        return np.interp(u, edges, levels, left=0.0, right=1.0)

    return cdf


def sample_leader_term(a: float, x: float, p: float, rng: RngStream, count: int) -> np.ndarray:
    """Draw ``count`` values of ``p + A |C p - x|``."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    A = rng.uniform(-a, a, count)
    C = rng.uniform(0.0, 2.0, count)
    return p + A * np.abs(C * p - x)


def sample_gwo_update(a: float, x: float, p1: float, p2: float, p3: float,
                      rng: RngStream, count: int = 100_000) -> np.ndarray:
    """Draw ``count`` averaged GWO updates for one component."""
    if count < 1:
        raise ValueError(f"count must be >= 1, got {count}")
    p = np.array([p1, p2, p3], dtype=float)
    A = rng.uniform(-a, a, (count, 3))
    C = rng.uniform(0.0, 2.0, (count, 3))
    terms = p + A * np.abs(C * p - x)
    return (terms[:, 0] + terms[:, 1] + terms[:, 2]) / 3.0


@dataclass(frozen=True)
class Histogram:
    bin_edges: np.ndarray
    counts: np.ndarray
    total: int

    @property
    def centers(self) -> np.ndarray:
        return 0.5 * (self.bin_edges[:-1] + self.bin_edges[1:])

    @property
    def widths(self) -> np.ndarray:
        return np.diff(self.bin_edges)

    def frequencies(self) -> np.ndarray:
        return self.counts / self.total

    def density(self) -> np.ndarray:
        return self.counts / (self.total * self.widths)


def build_histogram(samples, bins: int = 80) -> Histogram:
    """Equal-width histogram spanning ``[min, max]`` of the samples.

    Constant samples produce a single unit-width bin around the value.
    """
    samples = np.asarray(samples, dtype=float).ravel()
    if samples.size == 0:
        raise ValueError("cannot build a histogram from an empty sample")
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    lo, hi = float(samples.min()), float(samples.max())
    if lo == hi:
        edges = np.array([lo - 0.5, lo + 0.5])
        return Histogram(edges, np.array([samples.size]), int(samples.size))
    counts, edges = np.histogram(samples, bins=bins, range=(lo, hi))
    return Histogram(edges, counts, int(samples.size))


def normal_pdf(u, mu: float, sigma: float):
    z = (np.asarray(u, dtype=float) - mu) / sigma
    return np.exp(-0.5 * z**2) / (sigma * math.sqrt(2.0 * math.pi))


def normal_cdf(u, mu: float, sigma: float):
    return special.ndtr((np.asarray(u, dtype=float) - mu) / sigma)


@dataclass(frozen=True)
class DistComparison:
    ks_distance: float
    total_variation: float
    sample_size: int


def compare_to_normal(hist: Histogram, mu: float, sigma: float) -> DistComparison:
    """Distance between a histogram and ``N(mu, sigma**2)``.

    KS distance is taken over the bin edges; total variation is half the
    L1 gap between bin frequencies and normal bin probabilities (normal
    mass outside the histogram range counts as unmatched).
    """
    if not sigma > 0:
        raise DegenerateDistributionError(f"sigma must be positive, got {sigma}")
    ecdf = np.concatenate([[0.0], np.cumsum(hist.counts) / hist.total])
    ncdf = normal_cdf(hist.bin_edges, mu, sigma)
    ks = float(np.max(np.abs(ecdf - ncdf)))
    probs = np.diff(ncdf)
    outside = ncdf[0] + (1.0 - ncdf[-1])
    tv = 0.5 * (float(np.sum(np.abs(hist.frequencies() - probs))) + outside)
    return DistComparison(min(ks, 1.0), min(tv, 1.0), hist.total)


def ks_distance(samples, cdf) -> float:
    """Exact one-sample KS distance between ``samples`` and a vectorised ``cdf``."""
    x = np.sort(np.asarray(samples, dtype=float))
    k = x.size
    f = cdf(x)
    upper = np.arange(1, k + 1) / k - f
    lower = f - np.arange(0, k) / k
    return float(max(upper.max(), lower.max()))
