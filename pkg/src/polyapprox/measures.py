"""Intrinsic volumes, dual volumes and weighted curvature integrals.

Exact values where geometry allows (balls in any dimension via log-Gamma,
polytopes up to n = 3 via triangulation, facet areas and exterior dihedral
angles), projection-averaging and parallel-body Monte Carlo estimators
everywhere else.  Every estimator is a pure function of its inputs and seed.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import exp, factorial, lgamma, log, pi

import numpy as np

from . import rng as _rng
from .bodies import Ball, Body, Ellipsoid, Polytope
from .errors import IllConditioned, OriginNotInterior, UnsupportedBodyKind, UnsupportedDimension
from .hull import hull_area_2d, hull_volume


# -- exact ball formulas ------------------------------------------------------

def ball_volume(n: int) -> float:
    """|D_n| = pi^(n/2) / Gamma(1 + n/2), evaluated in log space."""
    if n < 0:
        raise ValueError("dimension must be nonnegative")
    return exp(0.5 * n * log(pi) - lgamma(0.5 * n + 1.0))


def ball_surface(n: int) -> float:
    """|∂D_n| = n |D_n|."""
    return n * ball_volume(n)


def ball_intrinsic_volume(n: int, j: int) -> float:
    """V_j(D_n) = binom(n, j) |D_n| / |D_{n-j}|."""
    if not 0 <= j <= n:
        raise ValueError("need 0 <= j <= n")
    lbinom = lgamma(n + 1) - lgamma(j + 1) - lgamma(n - j + 1)
    lvol = (0.5 * n * log(pi) - lgamma(0.5 * n + 1.0)) \
        - (0.5 * (n - j) * log(pi) - lgamma(0.5 * (n - j) + 1.0))
    return exp(lbinom + lvol)


def ball_volume_analytic(n: int, q: float) -> float:
    """Analytic extension of V_q(D_n) to real q in [0, n] via Gamma factors."""
    if not 0.0 <= q <= n:
        raise ValueError("need 0 <= q <= n")
    lval = (0.5 * q * log(pi) + lgamma(n + 1) - lgamma(q + 1) - lgamma(n - q + 1)
            + lgamma(0.5 * (n - q) + 1.0) - lgamma(0.5 * n + 1.0))
    return exp(lval)


def dual_volume_constant(n: int, q: float) -> float:
    """Normalizing constant for the q-th dual volume: V_|q|(D_n) when
    |q| <= n and |D_n| beyond."""
    aq = abs(q)
    return ball_volume_analytic(n, aq) if aq <= n else ball_volume(n)


# -- result containers --------------------------------------------------------

@dataclass(frozen=True)
class EstimatorResult:
    value: float
    std_error: float
    samples: int
    seed: int

    def to_dict(self):
        return {"value": self.value, "std_error": self.std_error,
                "samples": self.samples, "seed": self.seed}


@dataclass(frozen=True)
class IntrinsicVolumeVector:
    """Estimates of (V_0, ..., V_n); std_errors are 0 for exact entries."""

    values: np.ndarray
    std_errors: np.ndarray
    method: str
    samples: int = 0
    seed: int = 0

    @property
    def n(self):
        return len(self.values) - 1

    def __getitem__(self, j):
        return float(self.values[j])

    def error(self, j):
        return float(self.std_errors[j])

    def to_dict(self):
        return {"values": [float(v) for v in self.values],
                "std_errors": [float(s) for s in self.std_errors],
                "method": self.method, "samples": self.samples, "seed": self.seed}


def exact_vector(values) -> IntrinsicVolumeVector:
    values = np.asarray(values, dtype=float)
    return IntrinsicVolumeVector(values, np.zeros_like(values), "exact")


# -- exact polytope intrinsic volumes ----------------------------------------

def intrinsic_volumes_exact(p: Polytope) -> IntrinsicVolumeVector:
    """Full (V_0, ..., V_n) of a polytope for n <= 3.

    V_n by fan triangulation, V_{n-1} as half the boundary measure, and in
    n = 3 the mean-width term from edge lengths and exterior dihedral
    angles.
    """
    if p.n == 2:
        vals = [1.0, 0.5 * p.perimeter(), p.volume()]
    elif p.n == 3:
        vals = [1.0, p.mean_width_v1(), 0.5 * p.surface_area(), p.volume()]
    else:
        raise UnsupportedDimension("exact full intrinsic volume vectors need n <= 3")
    return exact_vector(vals)


def exact_vj(body, j: int) -> float:
    """Exact V_j where a closed form exists; raises otherwise.

    Balls: any j.  Polytopes: any j for n <= 3, j in {n-1, n} in general.
    Planar caps: j in {0, 1, 2}.
    """
    n = body.n
    if isinstance(body, Ball):
        return ball_intrinsic_volume(n, j) * body.radius ** j
    if isinstance(body, Polytope):
        if j == n:
            return body.volume()
        if j == n - 1:
            return 0.5 * body.surface_area()
        if j == 0:
            return 1.0
        if n <= 3:
            return intrinsic_volumes_exact(body)[j]
        raise UnsupportedDimension(f"no exact V_{j} for a polytope in R^{n}")
    if getattr(body, "kind", None) == "cap":
        if n == 2:
            return float(body.intrinsic_volumes_exact()[j])
        if j == n:
            return body.volume_exact()
        if j == 0:
            return 1.0
    raise UnsupportedBodyKind(f"no exact V_{j} for body kind {getattr(body, 'kind', '?')}")


# -- Monte Carlo estimators ----------------------------------------------------

def kubota_estimate(p: Polytope, j: int, samples: int = 10_000, seed: int = 0) -> EstimatorResult:
    """V_j via uniform random j-dimensional projections.

    Orthonormalized Gaussian frames are Haar-distributed on the
    Grassmannian; the projected hull volume is averaged and rescaled by
    binom(n, j) |D_n| / (|D_j| |D_{n-j}|).
    """
    n = p.n
    if not 1 <= j <= n - 1:
        raise UnsupportedDimension("kubota needs 1 <= j <= n-1")
    if j > 8:
        raise UnsupportedDimension("projected hulls computed only up to j = 8")
    const = exp(lgamma(n + 1) - lgamma(j + 1) - lgamma(n - j + 1)) \
        * ball_volume(n) / (ball_volume(j) * ball_volume(n - j))
    verts = p.vertices
    vals = np.empty(samples)
    done = 0
    for c in range(0, samples, _rng.CHUNK):
        hi = min(c + _rng.CHUNK, samples)
        g = _rng.substream(seed, c // _rng.CHUNK).standard_normal((hi - c, n, j))
        q, _ = np.linalg.qr(g)
        if j == 1:
            proj = verts @ q[:, :, 0].T              # (V, m)
            vals[c:hi] = proj.max(axis=0) - proj.min(axis=0)
        else:
            for i in range(hi - c):
                proj = verts @ q[i]
                vals[c + i] = hull_area_2d(proj) if j == 2 else hull_volume(proj)
        done = hi
    mean = float(vals.mean())
    std = float(vals.std(ddof=1) / np.sqrt(done)) if done > 1 else 0.0
    return EstimatorResult(const * mean, const * std, done, seed)


def _chebyshev_radii(count: int, lo: float, hi: float) -> np.ndarray:
    k = np.arange(count)
    nodes = np.cos((2 * k + 1) * pi / (2 * count))
    return 0.5 * (lo + hi) + 0.5 * (hi - lo) * nodes


def _parallel_body_fit(body: Body, radii, samples: int, seed: int,
                       distance_fn, method: str) -> IntrinsicVolumeVector:
    """Shared linear-fit core of steiner_fit / radial_steiner_fit.

    Estimates |{x : distance_fn(x) <= r}| over the given radii from one
    uniform point set in an enlarged box, then solves
    vol(r) = sum_m r^m |D_m| w_m by least squares; V_{n-m} = w_m.
    """
    n = body.n
    if radii is None:
        d = body.diameter_bound()
        radii = _chebyshev_radii(n + 3, 0.1 * d, 1.0 * d)
    radii = np.sort(np.asarray(radii, dtype=float))
    if len(radii) < n + 1:
        raise ValueError("need at least n+1 distinct radii")
    rmax = float(radii[-1])
    lo, hi = body.bounding_box()
    lo = lo - rmax
    hi = hi + rmax
    box_vol = float(np.prod(hi - lo))

    hits = np.zeros(len(radii))
    for c in range(0, samples, _rng.CHUNK):
        top = min(c + _rng.CHUNK, samples)
        u = _rng.substream(seed, c // _rng.CHUNK).random((top - c, n))
        pts = lo + u * (hi - lo)
        d = distance_fn(pts)
        hits += (d[:, None] <= radii[None, :]).sum(axis=0)
    p = hits / samples
    vols = box_vol * p

    design = np.stack([radii ** m * ball_volume(m) for m in range(n + 1)], axis=1)
    if np.linalg.cond(design) > 1e8:
        raise IllConditioned("radius design matrix condition number exceeds 1e8")
    pinv = np.linalg.pinv(design)
    w = pinv @ vols

    # indicator covariance: events are nested across radii
    pmin = np.minimum.outer(p, p)
    cov_v = (box_vol ** 2) * (pmin - np.outer(p, p)) / samples
    cov_w = pinv @ cov_v @ pinv.T
    w_err = np.sqrt(np.maximum(0.0, np.diag(cov_w)))

    values = w[::-1].copy()           # V_j = w_{n-j}
    errors = w_err[::-1].copy()
    return IntrinsicVolumeVector(values, errors, method, samples, seed)


def steiner_fit(body: Body, radii=None, samples: int = 100_000, seed: int = 0) -> IntrinsicVolumeVector:
    """(V_0, ..., V_n) from parallel-body volumes |K + r D_n|."""
    return _parallel_body_fit(body, radii, samples, seed, body.dist, "steiner_fit")


def radial_steiner_fit(body: Body, radii=None, samples: int = 100_000, seed: int = 0) -> IntrinsicVolumeVector:
    """Dual vector (V~_0, ..., V~_n) from radial parallel bodies."""
    if not body.contains_origin_interior():
        raise OriginNotInterior("radial Steiner fit needs the origin interior")
    return _parallel_body_fit(body, radii, samples, seed, body.rdist, "radial_steiner_fit")


def dual_volume(body: Body, q: float, samples: int = 100_000, seed: int = 0) -> EstimatorResult:
    """q-th dual volume as a spherical average of rho^q.

    For q = 0 this returns the log functional (mean of ln rho), a different
    semantic from the q != 0 values; see dual_volume_constant.
    """
    if not body.contains_origin_interior():
        raise OriginNotInterior("dual volumes need the origin interior")
    n = body.n
    u = _rng.sphere_directions(seed, samples, n)
    rho = body.radial(u)
    if q == 0.0:
        vals = np.log(rho)
        c = 1.0
    else:
        vals = rho ** q
        c = dual_volume_constant(n, q)
    mean = float(vals.mean())
    std = float(vals.std(ddof=1) / np.sqrt(samples))
    return EstimatorResult(c * mean, c * std, samples, seed)


def omega_q(body: Body, q: float, samples: int = 100_000, seed: int = 0) -> EstimatorResult:
    """Weighted curvature integral over the boundary.

    Omega_q(K) = ∫_{∂K} ||x||^{(q-n)(n-1)/(n+1)} H_{n-1}^{1/(n+1)} dmu,
    by parametric surface sampling with the area Jacobian of the sphere
    parametrization; balls and ellipsoids only (closed-form curvature).
    """
    n = body.n
    expo = (q - n) * (n - 1) / (n + 1)
    if isinstance(body, Ball):
        s = _rng.sphere_directions(seed, samples, n)
        x = body.center[None, :] + body.radius * s
        jac = body.radius ** (n - 1)
        curv = body.radius ** (-(n - 1))
    elif isinstance(body, Ellipsoid):
        s = _rng.sphere_directions(seed, samples, n)
        a = body.semi_axes
        x = s * a[None, :]
        jac = np.prod(a) * np.linalg.norm(s / a[None, :], axis=1)
        curv = body.gauss_curvature(x)
    else:
        raise UnsupportedBodyKind("omega_q supports balls and ellipsoids")
    weight = np.linalg.norm(x, axis=1) ** expo * curv ** (1.0 / (n + 1))
    vals = ball_surface(n) * weight * jac
    mean = float(vals.mean())
    std = float(vals.std(ddof=1) / np.sqrt(samples))
    return EstimatorResult(mean, std, samples, seed)


def l1_metric(k: Body, l: Body, samples: int = 100_000, seed: int = 0) -> EstimatorResult:
    """delta_1(K, L): spherical average of |h_K - h_L|."""
    n = k.n
    u = _rng.sphere_directions(seed, samples, n)
    vals = np.abs(k.support(u) - l.support(u))
    mean = float(vals.mean())
    std = float(vals.std(ddof=1) / np.sqrt(samples))
    return EstimatorResult(mean, std, samples, seed)
