"""Spherical-harmonic series on the unit ball of R^3.

Basis: for each degree m the 2m + 1 real solid harmonics (one zonal plus
cos/sin pairs for azimuthal orders mu = 1..m), generated by the associated
Legendre upward recurrence applied to Cartesian quantities, so each element
is a polynomial in x and evaluation at the origin never divides by zero.
Each element is rescaled by a certified upper bound of its sphere sup, which
guarantees sup <= 1; a refined lower bound certifies sup > 1 - 1e-3.

For a single element |Y| factors through a profile p(theta) times
|cos(mu phi)| or |sin(mu phi)|, so the sphere sup equals the max of the
degree-m trigonometric polynomial p over a great circle; that reduction is
what makes the tight normalization brackets affordable.

General combinations are bracketed on a Fibonacci lattice covering with
certified covering radius delta <= 2.5/sqrt(K): the tangential Bernstein
inequality ||grad P|| <= n ||P|| turns a covering max into

    sup <= grid_max / (1 - n delta)        (n delta < 1).

Cap statistics count covering points with |P| >= alpha grid_max; the lattice
cells are equal-area, so uniform weights are the cell areas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .disk import SupBracket, _golden_max, _next_pow2
from .errors import fail
from .randomness import RandomModel, SeedSpec, sample_vector

ZONAL = "zonal"
COS = "cos"
SIN = "sin"

MAX_BASIS_DEGREE = 128
NORM_EPS = 1e-3


def element_index(m: int, l: int):
    """Map (m, l) with 0 <= l <= 2m to (mu, kind)."""
    if l == 0:
        return 0, ZONAL
    mu = (l + 1) // 2
    kind = COS if l % 2 == 1 else SIN
    if mu > m:
        fail("DOMAIN", f"l = {l} out of range for degree {m} (need l <= 2m)")
    return mu, kind


def _legendre_profiles(mu: int, m_max: int, ct: np.ndarray, st: np.ndarray):
    """Profiles q_m(theta) for m = mu..m_max at cos/sin theta samples.

    q_m is the scaled associated Legendre function st^mu * P-tilde_m^mu(ct)
    with the seed normalized to st^mu (the sup normalization later absorbs
    all constant factors).  Yields (m, values) pairs.
    """
    prev = st ** mu if mu > 0 else np.ones_like(ct)
    yield mu, prev
    if m_max == mu:
        return
    cur = (2 * mu + 1) * ct * prev
    yield mu + 1, cur
    for m in range(mu + 2, m_max + 1):
        nxt = ((2 * m - 1) * ct * cur - (m - 1 + mu) * prev) / (m - mu)
        prev, cur = cur, nxt
        yield m, cur


def _solid_values(mu: int, m_max: int, pts: np.ndarray):
    """Solid-harmonic complex values Z_m^mu at Cartesian points, m = mu..m_max.

    Z_m^mu(x) = r^m q_m(theta) e^{i mu phi}; generated by the same upward
    recurrence with t -> x3, st^mu e^{i mu phi} -> (x1 + i x2)^mu and
    r^2 factors inserted, so the result is a polynomial in x (exact at 0).
    """
    x, y, z = pts[..., 0], pts[..., 1], pts[..., 2]
    s = x + 1j * y
    r2 = x * x + y * y + z * z
    prev = s ** mu if mu > 0 else np.ones_like(z, dtype=complex)
    yield mu, prev
    if m_max == mu:
        return
    cur = (2 * mu + 1) * z * prev
    yield mu + 1, cur
    for m in range(mu + 2, m_max + 1):
        nxt = ((2 * m - 1) * z * cur - (m - 1 + mu) * r2 * prev) / (m - mu)
        prev, cur = cur, nxt
        yield m, cur


@dataclass(frozen=True)
class SphericalBasis:
    """Sup-normalized real solid harmonics up to max_degree."""

    max_degree: int
    scales: dict                 # (m, mu) -> 1/certified upper of the raw profile
    norm_lower: dict             # (m, mu) -> certified lower of the normalized sup
    profile_grid: int

    def scale(self, m: int, l: int) -> float:
        mu, _ = element_index(m, l)
        return self.scales[(m, mu)]

    def normalized_sup_bounds(self, m: int, l: int):
        """Certified (lower, upper) for the normalized element's sphere sup."""
        mu, _ = element_index(m, l)
        return self.norm_lower[(m, mu)], 1.0


def build_basis(N: int, profile_oversample: float = 2048.0) -> SphericalBasis:
    """Normalize all elements of degree <= N via great-circle profiles.

    The profile of element (m, mu) is a degree-m trigonometric polynomial,
    so a grid of M >> pi m points plus Bernstein gives an upper bound within
    a factor 1/(1 - pi m / M) of the grid max, and golden refinement makes
    the lower bound essentially exact.
    """
    if N < 0:
        fail("DOMAIN", f"N must be >= 0, got {N}")
    if N > MAX_BASIS_DEGREE:
        fail("DEGREE_BUDGET", f"basis degree capped at {MAX_BASIS_DEGREE}, got {N}")
    M = _next_pow2(profile_oversample * max(N, 1) * math.pi)
    # profiles are even around theta = 0 and pi, so half the grid suffices
    theta = np.linspace(0.0, math.pi, M // 2 + 1)
    ct, st = np.cos(theta), np.sin(theta)
    scales, norm_lower = {}, {}
    for mu in range(0, N + 1):
        for m, q in _legendre_profiles(mu, N, ct, st):
            a = np.abs(q)
            i = int(np.argmax(a))
            gmax = float(a[i])
            if m == 0:
                scales[(m, mu)] = 1.0 / gmax
                norm_lower[(m, mu)] = 1.0
                continue
            h = math.pi / (M // 2)

            def p_abs(t, mu=mu, m=m):
                return abs(_profile_point(mu, m, t))

            lower = max(gmax, _golden_max(p_abs, theta[i] - h, theta[i] + h))
            # 1e-12 guards absorb grid roundoff so sup <= 1 stays certified
            upper = gmax / (1.0 - math.pi * m / M) * (1.0 + 1e-12)
            scales[(m, mu)] = 1.0 / upper
            norm_lower[(m, mu)] = lower / upper * (1.0 - 1e-12)
    return SphericalBasis(max_degree=N, scales=scales, norm_lower=norm_lower,
                          profile_grid=M)


def _profile_point(mu: int, m: int, theta: float) -> float:
    """Scalar profile value via the same recurrence, plain floats."""
    ct, st = math.cos(theta), math.sin(theta)
    prev = st ** mu if mu > 0 else 1.0
    if m == mu:
        return prev
    cur = (2 * mu + 1) * ct * prev
    for mm in range(mu + 2, m + 1):
        prev, cur = cur, ((2 * mm - 1) * ct * cur - (mm - 1 + mu) * prev) / (mm - mu)
    return cur


@dataclass(frozen=True, eq=False)
class SphereSeries:
    """Finite combination sum a_{ml} xi_{ml} of normalized basis elements."""

    basis: SphericalBasis
    entries: tuple               # ((m, l, coefficient), ...) coefficient = a * xi

    @property
    def degree(self) -> int:
        return max((m for m, _, _ in self.entries), default=0)

    def evaluate(self, pts) -> np.ndarray:
        """Values at Cartesian points with |x| <= 1, vectorized over points."""
        pts = np.atleast_2d(np.asarray(pts, dtype=float))
        by_mu = {}
        for m, l, coeff in self.entries:
            mu, kind = element_index(m, l)
            c = coeff * self.basis.scales[(m, mu)]
            by_mu.setdefault(mu, []).append((m, kind, c))
        out = np.zeros(len(pts))
        for mu, items in by_mu.items():
            m_top = max(m for m, _, _ in items)
            wanted = {}
            for m, kind, c in items:
                wanted.setdefault(m, []).append((kind, c))
            for m, z in _solid_values(mu, m_top, pts):
                for kind, c in wanted.get(m, ()):
                    # zonal values are real; cos/sin pick the azimuthal parts
                    out += c * (z.imag if kind == SIN else z.real)
        return out

    def evaluate_one(self, x) -> float:
        return float(self.evaluate(np.asarray(x, dtype=float)[None, :])[0])


def evaluate_ball(series: SphereSeries, x) -> float:
    """Value at one point of the closed unit ball."""
    x = np.asarray(x, dtype=float)
    if x.shape != (3,):
        fail("DOMAIN", f"point must be a 3-vector, got shape {x.shape}")
    if float(x @ x) > 1.0 + 1e-12:
        fail("DOMAIN", f"|x| must be <= 1, got {math.sqrt(float(x @ x))}")
    return series.evaluate_one(x)


# -- coverings ----------------------------------------------------------------

@dataclass(frozen=True)
class Covering:
    """Fibonacci-lattice points with a certified covering radius bound."""

    points: np.ndarray          # (K, 3)
    radius: float               # delta <= 2.5/sqrt(K)

    @property
    def size(self) -> int:
        return len(self.points)


def fibonacci_covering(K: int) -> Covering:
    if K < 2:
        fail("DOMAIN", f"covering needs at least 2 points, got {K}")
    i = np.arange(K, dtype=float)
    z = 1.0 - (2.0 * i + 1.0) / K
    phi = 2.0 * math.pi * i / ((1.0 + math.sqrt(5.0)) / 2.0)
    s = np.sqrt(np.maximum(0.0, 1.0 - z * z))
    pts = np.column_stack([s * np.cos(phi), s * np.sin(phi), z])
    return Covering(points=pts, radius=2.5 / math.sqrt(K))


def default_covering(degree: int, min_points: int = 4096) -> Covering:
    """K = max(min_points, 64 n^2) makes n * delta <= 0.3125."""
    K = max(min_points, int(math.ceil(64.0 * max(degree, 1) ** 2)))
    return fibonacci_covering(K)


def sup_bracket_sphere(series: SphereSeries, covering: Optional[Covering] = None) -> SupBracket:
    """Certified sphere sup bracket via the covering and tangential Bernstein.

    Any sphere point is within geodesic distance delta of a covering point,
    and |P(y*) - P(y)| <= delta n sup|P|, hence sup <= grid_max/(1 - n delta).
    """
    n = series.degree
    if covering is None:
        covering = default_covering(n)
    nd = n * covering.radius
    if nd >= 1.0:
        fail("COVERING_TOO_COARSE",
             f"degree {n} needs covering radius < {1.0 / max(n, 1):g}, got {covering.radius:g}")
    vals = np.abs(series.evaluate(covering.points))
    gmax = float(vals.max())
    guard = 1e-12  # grid values carry a few ulps of summation roundoff
    return SupBracket(lower=gmax * (1.0 - guard), upper=gmax / (1.0 - nd) * (1.0 + guard),
                      grid_size=covering.size, degree=n)


@dataclass(frozen=True)
class CapReport:
    degree: int
    alpha: float
    fraction: float
    grid_K: int

    @property
    def c_implied(self) -> float:
        return self.fraction * self.degree ** 2

    def row(self):
        return (self.degree, self.alpha, self.fraction, self.grid_K, self.c_implied)


CAP_CSV_HEADER = ["degree", "alpha", "fraction", "grid_K", "c_implied"]


def cap_fraction(series: SphereSeries, alpha: float,
                 covering: Optional[Covering] = None) -> CapReport:
    """Surface-measure fraction of {|P| >= alpha * grid max}.

    Fibonacci cells are equal-area, so the fraction is a plain point count
    over the covering.
    """
    if not (0.0 < alpha < 1.0):
        fail("DOMAIN", f"alpha must lie in (0, 1), got {alpha}")
    n = series.degree
    if covering is None:
        covering = default_covering(n)
    vals = np.abs(series.evaluate(covering.points))
    gmax = float(vals.max())
    if gmax == 0.0:
        frac = 1.0
    else:
        frac = float(np.mean(vals >= alpha * gmax))
    return CapReport(degree=n, alpha=float(alpha), fraction=frac, grid_K=covering.size)


def random_degree_combination(basis: SphericalBasis, m: int, model: RandomModel,
                              seed_spec: SeedSpec, trial: int, lane: int = 0) -> SphereSeries:
    """Random signs over the 2m + 1 normalized elements of exact degree m."""
    if m > basis.max_degree:
        fail("DEGREE_BUDGET", f"basis holds degrees <= {basis.max_degree}, got {m}")
    xi = sample_vector(model, seed_spec, trial, 2 * m + 1, lane=lane)
    entries = tuple((m, l, float(xi[l])) for l in range(2 * m + 1))
    return SphereSeries(basis=basis, entries=entries)


def laplacian_stencil(series: SphereSeries, x, h: Optional[float] = None) -> float:
    """Six-point second-difference Laplacian at an interior point.

    The step defaults to 2.5e-4 / max(degree, 1), balancing truncation
    against rounding for normalized elements at |x| <= 0.7.
    """
    x = np.asarray(x, dtype=float)
    n = series.degree
    if h is None:
        h = 2.5e-4 / max(n, 1)
    pts = [x]
    for i in range(3):
        for sgn in (+1.0, -1.0):
            p = x.copy()
            p[i] += sgn * h
            pts.append(p)
    vals = series.evaluate(np.array(pts))
    return float((vals[1:].sum() - 6.0 * vals[0]) / (h * h))
