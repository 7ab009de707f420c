"""Random polytope constructions and the scaled-limit harness.

Inscribed hulls of boundary samples, circumscribed tangent-halfspace
intersections, boundary samplers for the curvature-weighted optimal
densities, and an expectation harness that runs seeded trials at several
budgets N, scales by N^(2/(n-1)) and extrapolates the limit.

Trials draw from counter-derived substreams keyed by (seed, N-index,
trial), so results are bitwise reproducible no matter how trials are
scheduled.
"""

from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import combinations
from math import comb, sqrt

import numpy as np

from . import rng as _rng
from .bodies import Ball, Body, Ellipsoid, Polytope, convex_hull, halfspace_intersection
from .errors import BudgetTooSmall, OffBoundary, RejectionStall, UnsupportedBodyKind

BOUNDARY_TOL = 1e-9
STALL_RATE = 1e-4


# -- curvature ------------------------------------------------------------------

def curvature_H(body: Body, x, k: int) -> float:
    """k-th normalized elementary symmetric function of the principal
    curvatures of the body at boundary point x; H_0 = 1."""
    x = np.asarray(x, dtype=float)
    n = body.n
    if not 0 <= k <= n - 1:
        raise ValueError("need 0 <= k <= n-1")
    if k == 0:
        _check_boundary(body, x)
        return 1.0
    if isinstance(body, Ball):
        _check_boundary(body, x)
        return body.radius ** (-k)
    if isinstance(body, Ellipsoid):
        kappa = body.principal_curvatures(x)
        e_k = sum(float(np.prod(c)) for c in combinations(kappa, k))
        return e_k / comb(n - 1, k)
    raise UnsupportedBodyKind("curvatures available for balls and ellipsoids")


def _check_boundary(body, x):
    if isinstance(body, Ball):
        off = abs(np.linalg.norm(x - body.center) - body.radius)
    elif isinstance(body, Ellipsoid):
        off = abs(np.sum((x / body.semi_axes) ** 2) - 1.0) * body.semi_axes.min() / 2.0
    else:
        off = body.dist(x)
    if off > 100.0 * BOUNDARY_TOL:
        raise OffBoundary("point is not on the body boundary")


def _curv_h_batch(body, x, k):
    """H_k at a batch of boundary points (vectorized for n <= 3)."""
    n = body.n
    if k == 0:
        return np.ones(len(x))
    if isinstance(body, Ball):
        return np.full(len(x), body.radius ** (-float(k)))
    if not isinstance(body, Ellipsoid):
        raise UnsupportedBodyKind("curvatures available for balls and ellipsoids")
    if k == n - 1:
        return body.gauss_curvature(x)
    if n == 3 and k == 1:
        # mean curvature of the quadric: (tr A - nu.A nu) / ((n-1) |A x|)
        a = 1.0 / body.semi_axes ** 2
        ax = x * a[None, :]
        nax = np.linalg.norm(ax, axis=1)
        nu = ax / nax[:, None]
        quad = np.einsum("ij,j,ij->i", nu, a, nu)
        return (a.sum() - quad) / ((n - 1) * nax)
    return np.array([curvature_H(body, xi, k) for xi in x])


# -- boundary densities -----------------------------------------------------------

class BoundaryDensity:
    """Probability density on the boundary of a ball or ellipsoid.

    kinds:
      uniform      - constant with respect to surface measure
      phi_j        - H_{n-j}^{(n-1)/(n+1)} H_{n-1}^{1/(n+1)}
      psi_tilde_j  - ||x||^{(j-n)(n-1)/(n+1)} H_{n-1}^{1/(n+1)}
      psi_weighted - (||x||^{q-n})^{(n-1)/(n+1)} H_{n-1}^{1/(n+1)}
    The normalization constant is estimated by surface Monte Carlo at
    construction.
    """

    def __init__(self, body: Body, kind: str = "uniform", j: int = None,
                 q: float = None, norm_samples: int = 50_000, seed: int = 0):
        if kind != "uniform" and not isinstance(body, (Ball, Ellipsoid)):
            raise UnsupportedBodyKind("non-uniform densities need a ball or ellipsoid")
        if kind in ("phi_j", "psi_tilde_j") and j is None:
            raise ValueError(f"{kind} needs the index j")
        if kind == "psi_tilde_j":
            q = float(j)
            kind = "psi_weighted"
            self.kind_alias = "psi_tilde_j"
        else:
            self.kind_alias = kind
        if kind == "psi_weighted" and q is None:
            raise ValueError("psi_weighted needs the weight exponent q")
        self.body = body
        self.kind = kind
        self.j = j
        self.q = q
        n = body.n
        self._norm_exp = (q - n) * (n - 1) / (n + 1) if kind == "psi_weighted" else 0.0
        self.normalization, self.normalization_std = self._estimate_normalization(
            norm_samples, seed)

    # weight with respect to the surface measure, up to the normalization
    def weight(self, x) -> np.ndarray:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n = self.body.n
        if self.kind == "uniform":
            return np.ones(len(x))
        hn1 = _curv_h_batch(self.body, x, n - 1) ** (1.0 / (n + 1))
        if self.kind == "phi_j":
            hnj = _curv_h_batch(self.body, x, n - self.j) ** ((n - 1.0) / (n + 1.0))
            return hnj * hn1
        return np.linalg.norm(x, axis=1) ** self._norm_exp * hn1

    def pdf(self, x) -> np.ndarray:
        return self.weight(x) / self.normalization

    def _estimate_normalization(self, samples, seed):
        from .measures import ball_surface
        body = self.body
        n = body.n
        s = _rng.sphere_directions(seed, samples, n, 7)
        if isinstance(body, Ball):
            x = body.center[None, :] + body.radius * s
            jac = body.radius ** (n - 1)
        elif isinstance(body, Ellipsoid):
            x = s * body.semi_axes[None, :]
            jac = np.prod(body.semi_axes) * np.linalg.norm(s / body.semi_axes[None, :], axis=1)
        else:
            # uniform on a general body: normalization is the surface area,
            # also estimated on the sphere parametrization of the ball case
            raise UnsupportedBodyKind("normalization sampling needs a ball or ellipsoid")
        vals = ball_surface(n) * self.weight(x) * jac
        return float(vals.mean()), float(vals.std(ddof=1) / sqrt(samples))

    def _envelope(self):
        """Analytic upper bound for weight(x) * jacobian(s) on the body."""
        body = self.body
        n = body.n
        if isinstance(body, Ball):
            wmax = 1.0 if self.kind == "uniform" else self._ball_weight_max()
            return body.radius ** (n - 1) * wmax * (1.0 + 1e-9)
        a = body.semi_axes
        amin, amax = float(a.min()), float(a.max())
        jac_max = float(np.prod(a)) / amin
        bound = jac_max
        if self.kind == "uniform":
            return bound
        prod_inv = float(np.prod(a ** -2.0))
        k_min = prod_inv * amin ** (n + 1)
        k_max = prod_inv * amax ** (n + 1)
        bound *= k_max ** (1.0 / (n + 1))
        if self.kind == "phi_j":
            kappa_max = amax / amin ** 2
            bound *= (kappa_max ** (n - self.j)) ** ((n - 1.0) / (n + 1.0))
        else:
            e = self._norm_exp
            bound *= amax ** e if e >= 0 else amin ** e
        return bound * (1.0 + 1e-9)

    def _ball_weight_max(self):
        body = self.body
        n = body.n
        r = body.radius
        hn1 = r ** (-(n - 1.0) / (n + 1.0))
        if self.kind == "phi_j":
            return (r ** (-(n - self.j))) ** ((n - 1.0) / (n + 1.0)) * hn1
        cn = float(np.linalg.norm(body.center))
        e = self._norm_exp
        hi, lo = cn + r, max(1e-12, r - cn if cn < r else cn - r)
        return (hi ** e if e >= 0 else lo ** e) * hn1


def sample_sphere(n: int, count: int = 1, seed: int = 0) -> np.ndarray:
    """Uniform points on S^{n-1} via normalized Gaussians."""
    return _rng.sphere_directions(seed, count, n)


def sample_boundary(body: Body, density: BoundaryDensity, count: int = 1,
                    seed: int = 0) -> np.ndarray:
    """Boundary points distributed according to ``density``.

    Balls with weights that are constant on the sphere sample directly;
    everything else goes through rejection against the analytic envelope of
    weight * jacobian.  Raises RejectionStall below an acceptance of 1e-4.
    """
    n = body.n
    if isinstance(body, Ball) and (density.kind == "uniform" or _ball_weight_constant(density)):
        s = _rng.sphere_directions(seed, count, n)
        return body.center[None, :] + body.radius * s
    if not isinstance(body, (Ball, Ellipsoid)):
        raise UnsupportedBodyKind("boundary sampling needs a ball or ellipsoid")
    envelope = density._envelope()
    out = np.empty((count, n))
    have = 0
    proposed = 0
    block = 0
    while have < count:
        m = max(1024, 2 * (count - have))
        s = _rng.sphere_directions(seed, m, n, 11, block)
        u = _rng.substream(seed, 13, block).random(m)
        block += 1
        if isinstance(body, Ball):
            x = body.center[None, :] + body.radius * s
            jac = np.full(m, body.radius ** (n - 1))
        else:
            x = s * body.semi_axes[None, :]
            jac = np.prod(body.semi_axes) * np.linalg.norm(s / body.semi_axes[None, :], axis=1)
        w = density.weight(x) * jac
        if np.any(w > envelope * (1.0 + 1e-9)):
            raise RejectionStall("rejection envelope violated; bad analytic bound")
        acc = x[u < w / envelope]
        take = min(len(acc), count - have)
        out[have:have + take] = acc[:take]
        have += take
        proposed += m
        if proposed >= 20_000 and have / proposed < STALL_RATE:
            raise RejectionStall(f"acceptance rate {have / proposed:.2e} below {STALL_RATE}")
    return out


def _ball_weight_constant(density):
    # on a centered unit-type ball every curvature/norm weight is constant
    body = density.body
    return isinstance(body, Ball) and float(np.linalg.norm(body.center)) < 1e-14


# -- random constructions -----------------------------------------------------------

def random_inscribed(body: Body, budget: int, density: BoundaryDensity = None,
                     seed: int = 0) -> Polytope:
    """Hull of ``budget`` i.i.d. boundary points of the body."""
    if budget < body.n + 1:
        raise BudgetTooSmall("need at least n+1 boundary points")
    density = density or BoundaryDensity(body, "uniform")
    pts = sample_boundary(body, density, budget, seed)
    return convex_hull(pts)


def default_clip(body: Body) -> Ball:
    """Clip body for circumscribed constructions: the circumscribed ball of
    the unit enlargement (equals K + D_n exactly when K is a ball)."""
    if isinstance(body, Ball):
        return Ball(body.n, body.radius + 1.0, body.center)
    if isinstance(body, Ellipsoid):
        return Ball(body.n, float(body.semi_axes.max()) + 1.0)
    lo, hi = body.bounding_box()
    center = 0.5 * (lo + hi)
    return Ball(body.n, 0.5 * float(np.linalg.norm(hi - lo)) + 1.0, center)


def boundary_normal(body: Body, x) -> np.ndarray:
    """Outward unit normal at boundary points (balls and ellipsoids)."""
    x = np.atleast_2d(np.asarray(x, dtype=float))
    if isinstance(body, Ball):
        d = x - body.center
        return d / np.linalg.norm(d, axis=1)[:, None]
    if isinstance(body, Ellipsoid):
        g = x / body.semi_axes[None, :] ** 2
        return g / np.linalg.norm(g, axis=1)[:, None]
    raise UnsupportedBodyKind("tangent halfspaces need a smooth body")


def random_circumscribed(body: Body, budget: int, density: BoundaryDensity = None,
                         clip: Body = None, seed: int = 0,
                         angles: np.ndarray = None) -> Polytope:
    """Intersection of tangent halfspaces at sampled boundary points,
    bounded by the box of the clip body (default: circumscribed ball of
    K + D_n).  ``angles`` fixes deterministic touch directions in the
    plane instead of sampling."""
    if budget < body.n + 1:
        raise BudgetTooSmall("need at least n+1 tangent halfspaces")
    clip = clip or default_clip(body)
    if angles is not None:
        s = np.stack([np.cos(angles), np.sin(angles)], axis=1)
        pts = body.center[None, :] + body.radius * s if isinstance(body, Ball) \
            else s * body.semi_axes[None, :]
    else:
        density = density or BoundaryDensity(body, "uniform")
        pts = sample_boundary(body, density, budget, seed)
    normals = boundary_normal(body, pts)
    offsets = np.einsum("ij,ij->i", normals, pts)
    halfspaces = [(normals[i], float(offsets[i])) for i in range(len(pts))]
    return halfspace_intersection(halfspaces, clip.bounding_box())


# -- picklable building blocks for harness runs ----------------------------------------

def uniform_sphere_hull(budget, rng, n=3):
    """Hull of ``budget`` uniform points on S^{n-1} (construction callable)."""
    pts = rng.standard_normal((budget, n))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return convex_hull(pts)


def ball_deviation_exact(poly, j=3):
    """Delta_j(D_n, P) for P inscribed in the unit ball, n <= 3 exact."""
    from .measures import ball_intrinsic_volume, intrinsic_volumes_exact
    vec = intrinsic_volumes_exact(poly)
    return ball_intrinsic_volume(poly.n, j) - vec[j]


# -- expectation harness --------------------------------------------------------------

@dataclass(frozen=True)
class TrialSummary:
    budget: int
    trials: int
    scaled_mean: float
    std_error: float
    raw_mean: float

    def to_dict(self):
        return {"N": self.budget, "trials": self.trials, "scaled_mean": self.scaled_mean,
                "std_error": self.std_error, "raw_mean": self.raw_mean}


@dataclass(frozen=True)
class HarnessResult:
    summaries: tuple
    limit: float
    limit_std_error: float
    fit_covariance: tuple
    rate_exponent: float

    def to_dict(self):
        return {"summaries": [s.to_dict() for s in self.summaries],
                "limit": self.limit, "limit_std_error": self.limit_std_error,
                "fit_covariance": [list(r) for r in self.fit_covariance],
                "rate_exponent": self.rate_exponent}


def _trial_batch(args):
    construction, functional, budget, seed, n_index, t0, t1 = args
    vals = np.empty(t1 - t0)
    for t in range(t0, t1):
        rng = _rng.substream(seed, n_index, t)
        obj = construction(budget, rng)
        vals[t - t0] = functional(obj)
    return vals


def expectation_harness(construction, functional, budgets, trials: int,
                        seed: int = 0, dimension: int = None,
                        threads: int = 1) -> HarnessResult:
    """Scaled expectations N^(2/(n-1)) E f over seeded trials, with an
    extrapolated limit from the fit a + b * N^(-2/(n-1)).

    ``construction(N, rng) -> object``, ``functional(object) -> float``.
    The correction exponent of the extrapolation model is a pragmatic
    choice; the per-N data is reported so callers can refit.  With
    ``threads > 1`` the batches run in worker processes (construction and
    functional must be picklable); results are identical for any worker
    count.
    """
    budgets = [int(b) for b in budgets]
    if sorted(budgets) != budgets:
        raise ValueError("budgets must be increasing")
    if trials < 2:
        raise ValueError("need at least 2 trials")
    if dimension is None:
        probe = construction(budgets[0], _rng.substream(seed, 0, 0))
        dimension = probe.n
    k = 2.0 / (dimension - 1.0)

    summaries = []
    for i, budget in enumerate(budgets):
        if threads > 1:
            step = max(1, trials // (4 * threads))
            batches = [(construction, functional, budget, seed, i, t, min(t + step, trials))
                       for t in range(0, trials, step)]
            with ProcessPoolExecutor(max_workers=threads) as pool:
                vals = np.concatenate(list(pool.map(_trial_batch, batches)))
        else:
            vals = _trial_batch((construction, functional, budget, seed, i, 0, trials))
        scale = budget ** k
        summaries.append(TrialSummary(budget, trials,
                                      scale * float(vals.mean()),
                                      scale * float(vals.std(ddof=1) / sqrt(trials)),
                                      float(vals.mean())))

    y = np.array([s.scaled_mean for s in summaries])
    sig = np.array([max(s.std_error, 1e-15) for s in summaries])
    x = np.array([float(s.budget) ** (-k) for s in summaries])
    design = np.stack([np.ones_like(x), x], axis=1)
    w = 1.0 / sig ** 2
    ata = design.T @ (design * w[:, None])
    atb = design.T @ (y * w)
    cov = np.linalg.inv(ata)
    coef = cov @ atb
    return HarnessResult(tuple(summaries), float(coef[0]), float(sqrt(cov[0, 0])),
                         tuple(tuple(row) for row in cov), k)
