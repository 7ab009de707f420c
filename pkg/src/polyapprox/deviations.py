"""Deviation functionals between convex bodies.

Intrinsic-volume deviations Delta_j(K, L) = V_j(K) + V_j(L) - 2 V_j(K∩L),
their Wills and stochastic-Wills aggregates, the dual (radial) deviations
with their two independent evaluation routes, the L^1 support comparison,
the cap-based triangle-inequality tester, and the planar disk/triangle
curves with their closed-form branches.

Intersections are computed exactly for polytope pairs and as composite
oracles (ball/ellipsoid parts + halfspaces) otherwise; an intersection with
empty interior is reported by the EMPTY marker and contributes V_j = 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import acos, asin, pi, sqrt

import numpy as np

from . import rng as _rng
from .bodies import (EMPTY, Ball, Body, Cap, EmptyBody, Ellipsoid,
                     IntersectionBody, Polytope, halfspace_intersection)
from .errors import EmptyIntersection, OriginNotInterior, UnsupportedBodyKind, UnsupportedDimension
from .measures import (EstimatorResult, IntrinsicVolumeVector, _chebyshev_radii,
                       ball_intrinsic_volume, ball_volume, dual_volume_constant,
                       exact_vector, intrinsic_volumes_exact, l1_metric, steiner_fit)

CONTAINMENT_DIRECTIONS = 10_000
CONTAINMENT_TOL = 1e-9


# -- moment sequences ----------------------------------------------------------

@dataclass(frozen=True)
class MomentSequence:
    """Moments (E L^0, ..., E L^n) of a nonnegative random variable."""

    moments: np.ndarray
    label: str = ""

    def __post_init__(self):
        m = np.asarray(self.moments, dtype=float)
        object.__setattr__(self, "moments", m)
        if abs(m[0] - 1.0) > 1e-12:
            raise ValueError("zeroth moment must be 1")
        if np.any(m < 0.0):
            raise ValueError("moments of a nonnegative variable are nonnegative")
        # log-convexity m_k^2 <= m_{k-1} m_{k+1} holds for any moment sequence
        for k in range(1, len(m) - 1):
            if m[k] ** 2 > m[k - 1] * m[k + 1] * (1.0 + 1e-9) + 1e-300:
                raise ValueError(f"moment sequence is not log-convex at k={k}")

    def __getitem__(self, k):
        return float(self.moments[k])

    @property
    def order(self):
        return len(self.moments) - 1

    @staticmethod
    def constant(r: float, n: int) -> "MomentSequence":
        """Moments of the constant radius r: m_k = r^k."""
        return MomentSequence(np.array([r ** k for k in range(n + 1)]),
                              label=f"constant {r}")

    @staticmethod
    def wills_weibull(n: int) -> "MomentSequence":
        """Weibull(2, sqrt(1/pi)) moments m_k = 1/|D_k|, which turn the
        stochastic Wills functional into the classical one."""
        return MomentSequence(np.array([1.0 / ball_volume(k) for k in range(n + 1)]),
                              label="Weibull(2, sqrt(1/pi))")

    @staticmethod
    def point_mass_zero(n: int) -> "MomentSequence":
        """Lambda = 0: moments (1, 0, ..., 0)."""
        return MomentSequence(np.array([1.0] + [0.0] * n), label="constant 0")


# -- reports --------------------------------------------------------------------

@dataclass(frozen=True)
class DeviationReport:
    kind: str
    value: float
    std_error: float
    samples: int = 0
    seed: int = 0
    components: tuple = None
    cross_value: float = None
    cross_std_error: float = None

    def to_dict(self):
        out = {"kind": self.kind, "value": self.value, "std_error": self.std_error,
               "samples": self.samples, "seed": self.seed}
        if self.components is not None:
            out["components"] = list(self.components)
        if self.cross_value is not None:
            out["cross_value"] = self.cross_value
            out["cross_std_error"] = self.cross_std_error
        return out


@dataclass(frozen=True)
class WillsReport:
    """A Wills-type functional evaluated along its two routes."""

    sum_form: EstimatorResult
    integral_form: EstimatorResult

    def agree_within(self, k_sigma=3.0):
        sigma = sqrt(self.sum_form.std_error ** 2 + self.integral_form.std_error ** 2)
        return abs(self.sum_form.value - self.integral_form.value) <= k_sigma * max(sigma, 1e-12)


# -- containment and intersection ------------------------------------------------

def contains(outer: Body, inner: Body, seed: int = 0) -> bool:
    """inner ⊆ outer, exactly where possible, else support dominance on
    sampled directions (tolerance 1e-9)."""
    if isinstance(inner, Polytope):
        return bool(np.all(outer.membership(inner.vertices, tol=CONTAINMENT_TOL)))
    if isinstance(inner, Ball) and isinstance(outer, Ball):
        gap = np.linalg.norm(inner.center - outer.center) + inner.radius - outer.radius
        return bool(gap <= CONTAINMENT_TOL)
    if isinstance(outer, Polytope):
        # exact: support of the inner body against each true facet
        a, b = outer.facet_normals, outer.facet_offsets
        return bool(np.all(inner.support(a) <= b + CONTAINMENT_TOL))
    u = _rng.sphere_directions(seed, CONTAINMENT_DIRECTIONS, outer.n)
    return bool(np.all(inner.support(u) <= outer.support(u) + CONTAINMENT_TOL))


def _halfspaces_of(body: Body):
    """(parts, A, b) decomposition of a body into smooth parts + halfspaces."""
    if isinstance(body, Polytope):
        return [], body.facet_normals, body.facet_offsets
    if isinstance(body, Cap):
        return [body.ball], -body._e[None, :], np.array([-body.eps])
    if isinstance(body, IntersectionBody):
        a, b = body.halfspaces
        return list(body.parts), a, b
    return [body], np.zeros((0, body.n)), np.zeros(0)


def _feasible_interior(parts, a, b, n, margin=1e-9, iters=5000):
    """A point interior to the intersection, or None.

    Cyclic projections onto the margin-tightened sets converge to a
    feasible point when the interior is nonempty.
    """
    shrink_parts = []
    for p in parts:
        if isinstance(p, Ball) and p.radius > 2 * margin:
            shrink_parts.append(Ball(p.n, p.radius - margin, p.center))
        else:
            shrink_parts.append(p)
    x = np.zeros((1, n))
    for p in shrink_parts:
        x += p.project(np.zeros((1, n)))
    if shrink_parts:
        x /= len(shrink_parts)
    bt = b - margin
    for _ in range(iters):
        moved = 0.0
        for p in shrink_parts:
            y = p.project(x)
            moved = max(moved, float(np.abs(y - x).max()))
            x = y
        if len(a):
            viol = x @ a.T - bt
            j = int(np.argmax(viol[0]))
            if viol[0, j] > 0.0:
                y = x - viol[:, j:j + 1] * a[j][None, :]
                moved = max(moved, float(np.abs(y - x).max()))
                x = y
        if moved < 1e-13:
            break
    ok = all(p.membership(x[0], tol=0.0) for p in shrink_parts)
    ok = ok and (len(a) == 0 or float((x @ a.T - bt).max()) <= 1e-12)
    return x[0] if ok else None


def intersect(a: Body, b: Body):
    """K ∩ L as a Polytope (both polytopal), a composite oracle otherwise,
    or EMPTY when the intersection has no interior point."""
    if isinstance(a, Polytope) and isinstance(b, Polytope):
        halfspaces = [(nrm, off) for nrm, off in zip(a.facet_normals, a.facet_offsets)]
        halfspaces += [(nrm, off) for nrm, off in zip(b.facet_normals, b.facet_offsets)]
        lo = np.maximum(a.bounding_box()[0], b.bounding_box()[0]) - 1.0
        hi = np.minimum(a.bounding_box()[1], b.bounding_box()[1]) + 1.0
        if np.any(hi <= lo):
            return EMPTY
        try:
            return halfspace_intersection(halfspaces, (lo, hi))
        except EmptyIntersection:
            return EMPTY
    parts_a, ha, ba = _halfspaces_of(a)
    parts_b, hb, bb = _halfspaces_of(b)
    parts = parts_a + parts_b
    hs_a = np.vstack([ha, hb])
    hs_b = np.concatenate([ba, bb])
    if _feasible_interior(parts, hs_a, hs_b, a.n) is None:
        return EMPTY
    return IntersectionBody(parts, (hs_a, hs_b))


# -- V_j estimation dispatcher ----------------------------------------------------

def _vj(body, j: int, samples: int, seed: int, method: str = "auto", radii=None):
    """(value, std_error) of V_j for one operand."""
    from .measures import exact_vj, kubota_estimate

    if isinstance(body, EmptyBody):
        return 0.0, 0.0
    n = body.n
    if method in ("auto", "exact"):
        try:
            return exact_vj(body, j), 0.0
        except (UnsupportedBodyKind, UnsupportedDimension):
            if method == "exact":
                raise
    if method == "kubota":
        res = kubota_estimate(body, j, samples=samples, seed=seed)
        return res.value, res.std_error
    if j == n:
        return _volume_mc(body, samples, seed)
    if j == 1 and _has_support(body):
        u = _rng.sphere_directions(seed, samples, n)
        h = body.support(u)
        c = ball_intrinsic_volume(n, 1)
        return c * float(h.mean()), c * float(h.std(ddof=1) / sqrt(samples))
    if method == "auto" and isinstance(body, Polytope) and 1 <= j <= n - 1:
        res = kubota_estimate(body, j, samples=max(1000, samples // 25), seed=seed)
        return res.value, res.std_error
    vec = steiner_fit(body, radii=radii, samples=samples, seed=seed)
    return vec[j], vec.error(j)


def _has_support(body) -> bool:
    if isinstance(body, IntersectionBody):
        return body.n == 2 and len(body.parts) == 1 and isinstance(body.parts[0], Ball)
    return True


def _volume_mc(body, samples, seed):
    lo, hi = body.bounding_box()
    box_vol = float(np.prod(hi - lo))
    hits = 0
    for c in range(0, samples, _rng.CHUNK):
        top = min(c + _rng.CHUNK, samples)
        u = _rng.substream(seed, c // _rng.CHUNK).random((top - c, body.n))
        pts = lo + u * (hi - lo)
        hits += int(np.count_nonzero(body.membership(pts)))
    p = hits / samples
    return box_vol * p, box_vol * sqrt(max(p * (1.0 - p), 0.0) / samples)


def intrinsic_vector(body, samples: int = 100_000, seed: int = 0) -> IntrinsicVolumeVector:
    """(V_0, ..., V_n): exact for balls, planar caps and polytopes with
    n <= 3, Steiner-fit Monte Carlo otherwise."""
    if isinstance(body, Ball):
        return exact_vector(body.intrinsic_volumes_exact())
    if isinstance(body, Polytope) and body.n <= 3:
        return intrinsic_volumes_exact(body)
    if isinstance(body, Cap) and body.n == 2:
        return exact_vector(body.intrinsic_volumes_exact())
    return steiner_fit(body, samples=samples, seed=seed)


# -- intrinsic volume deviations ---------------------------------------------------

def delta_j(k: Body, l: Body, j: int, method: str = "auto",
            samples: int = 100_000, seed: int = 0, radii=None) -> DeviationReport:
    """j-th intrinsic volume deviation V_j(K) + V_j(L) - 2 V_j(K ∩ L).

    Nested operands reduce to a one-sided difference; an empty intersection
    contributes V_j = 0.  ``radii`` overrides the Steiner-fit radius design
    of Monte Carlo operands.
    """
    n = k.n
    if not 1 <= j <= n:
        raise ValueError("need 1 <= j <= n")
    if contains(k, l, seed=seed):
        vk, sk = _vj(k, j, samples, seed, method, radii)
        vl, sl = _vj(l, j, samples, seed + 1, method, radii)
        value, err = vk - vl, sqrt(sk * sk + sl * sl)
    elif contains(l, k, seed=seed):
        vk, sk = _vj(k, j, samples, seed, method, radii)
        vl, sl = _vj(l, j, samples, seed + 1, method, radii)
        value, err = vl - vk, sqrt(sk * sk + sl * sl)
    else:
        inter = intersect(k, l)
        vk, sk = _vj(k, j, samples, seed, method, radii)
        vl, sl = _vj(l, j, samples, seed + 1, method, radii)
        vi, si = _vj(inter, j, samples, seed + 2, method, radii)
        value = vk + vl - 2.0 * vi
        err = sqrt(sk * sk + sl * sl + 4.0 * si * si)
    return DeviationReport("delta_j", value, err, samples, seed)


def delta_sigma(k: Body, l: Body, samples: int = 100_000, seed: int = 0) -> DeviationReport:
    """Wills deviation: sum of Delta_j over j = 1..n."""
    comps = [delta_j(k, l, j, samples=samples, seed=seed) for j in range(1, k.n + 1)]
    value = sum(c.value for c in comps)
    err = sqrt(sum(c.std_error ** 2 for c in comps))
    return DeviationReport("delta_sigma", value, err, samples, seed,
                           components=tuple(c.value for c in comps))


def wills(k: Body, samples: int = 100_000, seed: int = 0) -> WillsReport:
    """Wills functional along both routes: the intrinsic volume sum and the
    Gaussian distance integral over an enlarged box."""
    vec = intrinsic_vector(k, samples=samples, seed=seed)
    sum_form = EstimatorResult(float(vec.values.sum()),
                               float(np.sqrt((vec.std_errors ** 2).sum())),
                               vec.samples, seed)
    integral_form = _gauss_integral(k, k.dist, samples, seed + 1)
    return WillsReport(sum_form, integral_form)


def _gauss_integral(body, distance_fn, samples, seed):
    # exp(-pi t^2) < 5e-13 for t >= 3, so a 3-inflated box captures the mass
    lo, hi = body.bounding_box()
    lo = lo - 3.0
    hi = hi + 3.0
    box_vol = float(np.prod(hi - lo))
    total = 0.0
    total_sq = 0.0
    for c in range(0, samples, _rng.CHUNK):
        top = min(c + _rng.CHUNK, samples)
        u = _rng.substream(seed, c // _rng.CHUNK).random((top - c, body.n))
        pts = lo + u * (hi - lo)
        vals = np.exp(-pi * distance_fn(pts) ** 2)
        total += float(vals.sum())
        total_sq += float((vals ** 2).sum())
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return EstimatorResult(box_vol * mean, box_vol * sqrt(var / samples), samples, seed)


def stochastic_wills(k: Body, mom: MomentSequence,
                     samples: int = 100_000, seed: int = 0) -> EstimatorResult:
    """W_Lambda(K) = sum_j V_j(K) |D_{n-j}| E Lambda^{n-j}."""
    n = k.n
    if mom.order < n:
        raise ValueError("moment sequence too short for this dimension")
    vec = intrinsic_vector(k, samples=samples, seed=seed)
    w = np.array([ball_volume(n - j) * mom[n - j] for j in range(n + 1)])
    value = float(w @ vec.values)
    err = float(np.sqrt(((w * vec.std_errors) ** 2).sum()))
    return EstimatorResult(value, err, vec.samples, seed)


def delta_lambda(k: Body, l: Body, mom: MomentSequence,
                 samples: int = 100_000, seed: int = 0) -> DeviationReport:
    """Stochastic Wills deviation sum_j Delta_j |D_{n-j}| E Lambda^{n-j}."""
    n = k.n
    if mom.order < n:
        raise ValueError("moment sequence too short for this dimension")
    comps = []
    value = 0.0
    var = 0.0
    for j in range(1, n + 1):
        w = ball_volume(n - j) * mom[n - j]
        if w == 0.0:
            comps.append(0.0)
            continue
        dj = delta_j(k, l, j, samples=samples, seed=seed)
        comps.append(w * dj.value)
        value += w * dj.value
        var += (w * dj.std_error) ** 2
    return DeviationReport("delta_lambda", value, sqrt(var), samples, seed,
                           components=tuple(comps))


# -- dual deviations ----------------------------------------------------------------

def _radial_pair(k, l, samples, seed):
    if not (k.contains_origin_interior() and l.contains_origin_interior()):
        raise OriginNotInterior("dual deviations need the origin interior to both bodies")
    u = _rng.sphere_directions(seed, samples, k.n)
    return k.radial(u), l.radial(u)


def dual_delta(k: Body, l: Body, q: float, samples: int = 100_000, seed: int = 0) -> DeviationReport:
    """q-th dual volume deviation, evaluated two independent ways.

    value: spherical route c_q * mean |rho_K^q - rho_L^q|;
    cross_value: weighted symmetric-difference route, rejection sampling of
    the norm weight over an inflated bounding box of K ∪ L.  q = 0 uses the
    logarithmic radial gap.
    """
    n = k.n
    rk, rl = _radial_pair(k, l, samples, seed)
    if q == 0.0:
        vals = np.abs(np.log(rk) - np.log(rl))
        c = 1.0
        kind = "dual_delta_0hat"
    else:
        vals = np.abs(rk ** q - rl ** q)
        c = dual_volume_constant(n, q)
        kind = "dual_delta_q"
    value = c * float(vals.mean())
    err = c * float(vals.std(ddof=1) / sqrt(samples))

    cross, cross_err = _dual_delta_weighted(k, l, q, samples, seed + 1)
    return DeviationReport(kind, value, err, samples, seed,
                           cross_value=cross, cross_std_error=cross_err)


def _dual_delta_weighted(k, l, q, samples, seed):
    """Weighted symmetric-difference route for the dual deviation."""
    n = k.n
    lo = np.minimum(k.bounding_box()[0], l.bounding_box()[0]) - 1e-6
    hi = np.maximum(k.bounding_box()[1], l.bounding_box()[1]) + 1e-6
    box_vol = float(np.prod(hi - lo))
    if q == 0.0:
        factor = 1.0 / (n * ball_volume(n))
        expo = -n
    else:
        # |q| c_q / (n |D_n|) for every q: reduces to |q| V_|q| / (n |D_n|)
        # inside the index range and to |q| / n beyond it, which is what the
        # polar-coordinates computation of the symmetric difference yields
        factor = abs(q) * dual_volume_constant(n, q) / (n * ball_volume(n))
        expo = q - n
    total = 0.0
    total_sq = 0.0
    for c in range(0, samples, _rng.CHUNK):
        top = min(c + _rng.CHUNK, samples)
        u = _rng.substream(seed, c // _rng.CHUNK).random((top - c, n))
        pts = lo + u * (hi - lo)
        sym = k.membership(pts) != l.membership(pts)
        vals = np.zeros(top - c)
        if np.any(sym):
            # the weight is integrable on K △ L: a neighborhood of the
            # origin lies in K ∩ L and never reaches this branch
            vals[sym] = np.linalg.norm(pts[sym], axis=1) ** expo
        total += float(vals.sum())
        total_sq += float((vals ** 2).sum())
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0)
    return factor * box_vol * mean, factor * box_vol * sqrt(var / samples)


def dual_wills(k: Body, samples: int = 100_000, seed: int = 0) -> WillsReport:
    """Dual Wills functional: radial moment sum vs Gaussian rdist integral."""
    n = k.n
    if not k.contains_origin_interior():
        raise OriginNotInterior("dual Wills needs the origin interior")
    u = _rng.sphere_directions(seed, samples, n)
    rho = k.radial(u)
    coeff = np.array([ball_intrinsic_volume(n, j) for j in range(n + 1)])
    per_sample = np.polynomial.polynomial.polyval(rho, coeff)   # sum_j c_j rho^j
    sum_form = EstimatorResult(float(per_sample.mean()),
                               float(per_sample.std(ddof=1) / sqrt(samples)),
                               samples, seed)
    integral_form = _gauss_integral(k, k.rdist, samples, seed + 1)
    return WillsReport(sum_form, integral_form)


def dual_delta_sigma(k: Body, l: Body, samples: int = 100_000, seed: int = 0) -> DeviationReport:
    """Dual Wills deviation: sum over j = 1..n of the j-th dual deviation,
    evaluated from one common set of radial samples."""
    n = k.n
    rk, rl = _radial_pair(k, l, samples, seed)
    comps = []
    per_sample = np.zeros(samples)
    for j in range(1, n + 1):
        c = ball_intrinsic_volume(n, j)
        term = c * np.abs(rk ** j - rl ** j)
        comps.append(float(term.mean()))
        per_sample += term
    value = float(per_sample.mean())
    err = float(per_sample.std(ddof=1) / sqrt(samples))
    return DeviationReport("dual_delta_sigma", value, err, samples, seed,
                           components=tuple(comps))


def dual_delta_lambda(k: Body, l: Body, mom: MomentSequence,
                      samples: int = 100_000, seed: int = 0) -> DeviationReport:
    """Dual stochastic Wills deviation sum_j dual-Delta_j |D_{n-j}| m_{n-j}."""
    n = k.n
    if mom.order < n:
        raise ValueError("moment sequence too short for this dimension")
    rk, rl = _radial_pair(k, l, samples, seed)
    comps = []
    per_sample = np.zeros(samples)
    for j in range(1, n + 1):
        w = ball_volume(n - j) * mom[n - j] * ball_intrinsic_volume(n, j)
        term = w * np.abs(rk ** j - rl ** j)
        comps.append(float(term.mean()))
        per_sample += term
    value = float(per_sample.mean())
    err = float(per_sample.std(ddof=1) / sqrt(samples))
    return DeviationReport("dual_delta_lambda", value, err, samples, seed,
                           components=tuple(comps))


# -- Delta_1 vs the L^1 metric -------------------------------------------------------

@dataclass(frozen=True)
class Delta1Comparison:
    delta_1: float
    delta_1_std: float
    v1_delta1: float          # V_1(D_n) * delta_1(K, L)
    v1_delta1_std: float
    gap: float
    gap_std: float
    union_convex: bool

    def to_dict(self):
        return {"delta_1": self.delta_1, "delta_1_std": self.delta_1_std,
                "v1_delta1": self.v1_delta1, "v1_delta1_std": self.v1_delta1_std,
                "gap": self.gap, "gap_std": self.gap_std,
                "union_convex": self.union_convex}


def _sample_inside(body, count, seed):
    lo, hi = body.bounding_box()
    out = []
    have = 0
    for c in range(10_000):
        u = _rng.substream(seed, c).random((max(4 * count, 256), body.n))
        pts = lo + u * (hi - lo)
        pts = pts[body.membership(pts)]
        out.append(pts)
        have += len(pts)
        if have >= count:
            break
    return np.vstack(out)[:count]


def delta1_comparison(k: Body, l: Body, samples: int = 100_000, seed: int = 0,
                      midpoint_pairs: int = 2000) -> Delta1Comparison:
    """Delta_1 against V_1(D_n) * delta_1, plus a sampled test of whether
    K ∪ L is convex (midpoints of cross segments stay in the union)."""
    n = k.n
    d1 = delta_j(k, l, 1, samples=samples, seed=seed)
    lm = l1_metric(k, l, samples=samples, seed=seed + 10)
    c = ball_intrinsic_volume(n, 1)
    gap = d1.value - c * lm.value
    gap_std = sqrt(d1.std_error ** 2 + (c * lm.std_error) ** 2)
    xs = _sample_inside(k, midpoint_pairs, seed + 20)
    ys = _sample_inside(l, midpoint_pairs, seed + 21)
    mid = 0.5 * (xs + ys)
    in_union = k.membership(mid) | l.membership(mid)
    return Delta1Comparison(d1.value, d1.std_error, c * lm.value, c * lm.std_error,
                            gap, gap_std, bool(np.all(in_union)))


# -- cap counterexample ----------------------------------------------------------------

@dataclass(frozen=True)
class TriangleViolation:
    lhs: float
    lhs_std: float
    rhs: float
    rhs_std: float
    violated: bool

    def to_dict(self):
        return {"lhs": self.lhs, "lhs_std": self.lhs_std,
                "rhs": self.rhs, "rhs_std": self.rhs_std, "violated": self.violated}


def triangle_violation(n: int, j: int, eps: float,
                       samples: int = 200_000, seed: int = 0) -> TriangleViolation:
    """Tests Delta_j(D_n, L_eps) + Delta_j(D_n, L_-eps) < Delta_j(L_eps, L_-eps)
    with a 3-sigma margin; the caps are disjoint so the right side is
    2 V_j(L_eps) and the criterion is V_j(D_n) < 2 V_j(L_eps)."""
    if not 1 <= j <= n - 1:
        raise ValueError("the deviation fails the triangle inequality for 1 <= j <= n-1")
    ball = Ball(n)
    cap_hi = Cap(n, eps, +1)
    cap_lo = Cap(n, eps, -1)
    # caps live inside the unit ball, so unit-scale Steiner radii keep the
    # sampling box small and the fit variance workable
    radii = None if n == 2 else _chebyshev_radii(n + 3, 0.1, 1.0)
    d_hi = delta_j(ball, cap_hi, j, samples=samples, seed=seed, radii=radii)
    d_lo = delta_j(ball, cap_lo, j, samples=samples, seed=seed + 1, radii=radii)
    d_caps = delta_j(cap_hi, cap_lo, j, samples=samples, seed=seed + 2, radii=radii)
    lhs = d_hi.value + d_lo.value
    lhs_std = sqrt(d_hi.std_error ** 2 + d_lo.std_error ** 2)
    rhs = d_caps.value
    rhs_std = d_caps.std_error
    margin = 3.0 * sqrt(lhs_std ** 2 + rhs_std ** 2)
    return TriangleViolation(lhs, lhs_std, rhs, rhs_std, lhs < rhs - margin)


# -- planar disk/triangle curves -------------------------------------------------------

def figure1_closed(h: float) -> tuple:
    """Closed-form (pi * delta_1, Delta_1) between D_2 and the regular
    triangle T(h) with circumradius 1 + h; three branches, continuous at
    h = 0 and h = 1."""
    if h <= -1.0:
        raise ValueError("need h > -1")
    s = 1.5 * sqrt(3.0) * (1.0 + h)
    if h <= 0.0:
        v = pi - s
        return v, v
    if h >= 1.0:
        v = s - pi
        return v, v
    root = sqrt(9.0 - 6.0 * h - 3.0 * h * h)
    pd = -2.0 * pi - s + 6.0 * sqrt(2.0 * h + h * h) + 6.0 * asin(1.0 / (1.0 + h))
    d1 = pi + s - sqrt(3.0) * root - 6.0 * acos((1.0 + h + root) / 4.0)
    return pd, d1


@dataclass(frozen=True)
class Figure1Row:
    h: float
    pi_delta1_closed: float
    delta1_closed: float
    pi_delta1_mc: float = None
    pi_delta1_mc_std: float = None
    delta1_mc: float = None
    delta1_mc_std: float = None

    def to_dict(self):
        return {k: v for k, v in self.__dict__.items()}


def figure1_curves(h_grid, samples: int = 0, seed: int = 0) -> list:
    """Closed-form curves on the grid; Monte Carlo columns are attached when
    ``samples`` > 0 (support sampling for delta_1, intrinsic widths of disk,
    triangle and their intersection for Delta_1)."""
    from .bodies import make_triangle_T

    rows = []
    disk = Ball(2)
    for idx, h in enumerate(np.asarray(h_grid, dtype=float)):
        pd, d1 = figure1_closed(float(h))
        if samples <= 0:
            rows.append(Figure1Row(float(h), pd, d1))
            continue
        tri = make_triangle_T(float(h))
        u = _rng.sphere_directions(seed, samples, 2, idx)
        h_d = disk.support(u)
        h_t = tri.support(u)
        gap = np.abs(h_d - h_t)
        pd_mc = pi * float(gap.mean())
        pd_std = pi * float(gap.std(ddof=1) / sqrt(samples))
        inter = IntersectionBody([disk], (tri.facet_normals, tri.facet_offsets))
        h_i = inter.support(u)
        # Delta_1 = V_1(D) + V_1(T) - 2 V_1(D ∩ T) with V_1 = pi * mean support
        v1_d = pi
        v1_t = 0.5 * tri.perimeter()
        d1_vals = pi * h_i
        d1_mc = v1_d + v1_t - 2.0 * float(d1_vals.mean())
        d1_std = 2.0 * float(d1_vals.std(ddof=1) / sqrt(samples))
        rows.append(Figure1Row(float(h), pd, d1, pd_mc, pd_std, d1_mc, d1_std))
    return rows
