"""Convex bodies with uniform oracle access.

Every body exposes membership, support h(u), radial rho(u), nearest-point
distance, and radial distance, vectorized over batches of query points or
directions.  Polytopes carry both a vertex list and an H-representation of
merged (true) facets; smooth bodies (balls, ellipsoids, caps) answer their
queries in closed form where one exists and by Dykstra-style alternating
projections otherwise.

All bodies are immutable after construction and safe to share across
threads.
"""

from __future__ import annotations

import json
from math import acos, sqrt

import numpy as np
from scipy.optimize import linprog
from scipy.special import betainc, beta as beta_fn

from . import hull as _hull
from .errors import (BudgetTooSmall, DegenerateInput, EmptyIntersection,
                     GeometryError, NonConvergence, OriginNotInterior,
                     UnsupportedBodyKind, UnsupportedDimension)

MEMBERSHIP_TOL = 1e-9
PROJECTION_TOL = 1e-10
PROJECTION_CAP = 10_000


def _as_batch(x):
    x = np.asarray(x, dtype=float)
    if x.ndim == 1:
        return x[None, :], True
    return x, False


def _unbatch(v, single):
    return float(v[0]) if single else v


class Body:
    """Abstract convex body in R^n."""

    kind = "abstract"
    n: int

    # -- queries ----------------------------------------------------------
    def membership(self, x, tol=MEMBERSHIP_TOL):
        raise NotImplementedError

    def support(self, u):
        raise NotImplementedError

    def radial(self, u):
        raise NotImplementedError

    def dist(self, x):
        raise NotImplementedError

    def project(self, x):
        """Nearest point of the body to x (batched)."""
        raise NotImplementedError

    def rdist(self, x):
        """Radial distance max(0, ||x|| - rho(x/||x||)); needs 0 in int K."""
        if not self.contains_origin_interior():
            raise OriginNotInterior(f"{self.kind}: origin is not interior")
        xb, single = _as_batch(x)
        norms = np.linalg.norm(xb, axis=1)
        out = np.zeros(len(xb))
        mask = norms > 0.0
        if np.any(mask):
            dirs = xb[mask] / norms[mask, None]
            out[mask] = np.maximum(0.0, norms[mask] - self.radial(dirs))
        return _unbatch(out, single)

    def bounding_box(self):
        raise NotImplementedError

    def contains_origin_interior(self) -> bool:
        raise NotImplementedError

    def diameter_bound(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))


class EmptyBody:
    """Marker for an empty (or lower-dimensional) intersection."""

    kind = "empty"

    def __repr__(self):
        return "EmptyBody()"


EMPTY = EmptyBody()


def _halfspace_project(a, b):
    """Projector onto {x : a.x <= b} with a a unit vector."""
    def proj(x):
        viol = x @ a - b
        out = x.copy()
        mask = viol > 0.0
        if np.any(mask):
            out[mask] -= viol[mask, None] * a[None, :]
        return out
    return proj


def dykstra(x, projectors, tol=PROJECTION_TOL, max_cycles=PROJECTION_CAP):
    """Dykstra's alternating projection onto an intersection of convex sets.

    ``projectors`` are batched maps (m, n) -> (m, n); points whose iterate
    stops moving are frozen so one slow point never stalls the batch.
    Raises NonConvergence past the cycle cap, which signals a geometry bug
    rather than a tight tolerance.
    """
    xb, single = _as_batch(x)
    xb = xb.copy()
    out = xb.copy()
    active = np.arange(len(xb))
    incr = [np.zeros_like(xb) for _ in projectors]
    for _ in range(max_cycles):
        x_prev = xb
        for k, proj in enumerate(projectors):
            y = proj(xb + incr[k])
            incr[k] = xb + incr[k] - y
            xb = y
        moved = np.abs(xb - x_prev).max(axis=1)
        done = moved < tol
        if np.any(done):
            out[active[done]] = xb[done]
            keep = ~done
            active = active[keep]
            xb = xb[keep]
            incr = [inc[keep] for inc in incr]
            if active.size == 0:
                return out[0] if single else out
    raise NonConvergence(f"Dykstra projection did not reach {tol} in {max_cycles} cycles")


# after this many Dykstra cycles the slow tail is handed to the exact
# active-set solve; see _wedge_projection
POLISH_AFTER = 400


def _project_affine(x, a_rows, b_rows):
    """Projection of x onto the affine subspace {a_rows . z = b_rows}."""
    gram = a_rows @ a_rows.T
    resid = a_rows @ x - b_rows
    corr, *_ = np.linalg.lstsq(gram, resid, rcond=None)
    return x - a_rows.T @ corr


def _wedge_projection(x0, y, ball, a, b, tol, near_tol=1e-3):
    """Nearest point of ball ∩ {a.z <= b} to x0, by enumerating active sets
    near the iterate y and solving each candidate in closed form.

    The active set of the projection is near-active at an iterate within
    ``near_tol`` of it, its candidate is feasible, and every feasible
    candidate is at least as far as the projection, so the feasible minimum
    is exact once the enumeration captured the right set; the caller
    re-runs with a widened ``near_tol`` until self-consistent.
    """
    from itertools import combinations

    n = len(x0)
    near = np.nonzero(a @ y - b > -near_tol)[0] if len(a) else np.array([], int)
    subsets = [()]
    for r in range(1, min(len(near), n) + 1):
        subsets.extend(combinations(near.tolist(), r))
    ball_flags = (False, True) if ball is not None else (False,)
    feas_tol = 10.0 * tol
    best = None
    best_d = np.inf
    for subset in subsets:
        rows = a[list(subset)] if subset else None
        for ball_active in ball_flags:
            if not subset and not ball_active:
                z = x0
            elif not ball_active:
                z = _project_affine(x0, rows, b[list(subset)])
            else:
                if subset:
                    x_l = _project_affine(x0, rows, b[list(subset)])
                    c_l = _project_affine(ball.center, rows, b[list(subset)])
                else:
                    x_l, c_l = x0, ball.center
                rad2 = ball.radius ** 2 - float(np.sum((ball.center - c_l) ** 2))
                if rad2 <= 0.0:
                    continue
                d = x_l - c_l
                nd = float(np.linalg.norm(d))
                if nd < 1e-14:
                    continue
                z = c_l + (np.sqrt(rad2) / nd) * d
            if ball is not None and np.linalg.norm(z - ball.center) > ball.radius + feas_tol:
                continue
            if len(a) and float((a @ z - b).max()) > feas_tol:
                continue
            dist_z = float(np.linalg.norm(z - x0))
            if dist_z < best_d:
                best, best_d = z, dist_z
    return best


def project_ball_halfspaces(x, ball, a, b, tol=PROJECTION_TOL, max_cycles=PROJECTION_CAP):
    """Nearest points of (optional ball) ∩ {a.z <= b}, batched.

    Dykstra alternating projections with per-point freezing.  Points whose
    iterates creep along a sphere/halfspace wedge are finished by the exact
    active-set solve once the iterate certifies its face (candidate within
    1e-5 of the iterate); their residual error is below Monte Carlo
    resolution.  Fast points converge to ``tol`` as usual.
    """
    xb, single = _as_batch(x)
    out = xb.copy()
    inside = np.ones(len(xb), dtype=bool)
    if ball is not None:
        inside &= np.linalg.norm(xb - ball.center, axis=1) <= ball.radius + tol
    if len(a):
        inside &= (xb @ a.T - b).max(axis=1) <= tol
    active = np.nonzero(~inside)[0]
    if active.size == 0:
        return out[0] if single else out

    scale = max(1.0, float(np.abs(b).max()) if len(b) else 1.0,
                ball.radius if ball is not None else 1.0)
    projs = []
    if ball is not None:
        projs.append(ball.project)
    projs.extend(_halfspace_project(ai, float(bi)) for ai, bi in zip(a, b))
    cur = xb[active].copy()
    incr = [np.zeros_like(cur) for _ in projs]
    next_polish = POLISH_AFTER
    cycle = 0
    while cycle < max_cycles:
        cycle += 1
        prev = cur
        for k, proj in enumerate(projs):
            y = proj(cur + incr[k])
            incr[k] = cur + incr[k] - y
            cur = y
        moved = np.abs(cur - prev).max(axis=1)
        done = moved < tol
        if cycle >= next_polish and active.size:
            next_polish *= 2
            for row in np.nonzero(~done)[0]:
                x0 = xb[active[row]]
                near_tol = 1e-3 * scale
                z = _wedge_projection(x0, cur[row], ball, a, b, tol, near_tol)
                # widen the enumeration until it covers the candidate's own
                # active set; the feasible minimum is then the projection
                for _ in range(4):
                    if z is None:
                        break
                    gap = float(np.linalg.norm(z - cur[row]))
                    if gap <= 0.45 * near_tol:
                        cur[row] = z
                        done[row] = True
                        break
                    near_tol = 4.0 * max(gap, near_tol)
                    z = _wedge_projection(x0, cur[row], ball, a, b, tol, near_tol)
        if np.any(done):
            out[active[done]] = cur[done]
            keep = ~done
            active = active[keep]
            cur = cur[keep]
            incr = [inc[keep] for inc in incr]
            if active.size == 0:
                return out[0] if single else out
    raise NonConvergence("projection did not converge within the cycle cap")


class Ball(Body):
    kind = "ball"

    def __init__(self, n, radius=1.0, center=None):
        if radius <= 0.0:
            raise ValueError("radius must be positive")
        self.n = int(n)
        self.radius = float(radius)
        self.center = np.zeros(self.n) if center is None else np.asarray(center, float).copy()
        if self.center.shape != (self.n,):
            raise ValueError("center has wrong dimension")
        self.center.setflags(write=False)

    def membership(self, x, tol=MEMBERSHIP_TOL):
        xb, single = _as_batch(x)
        val = np.linalg.norm(xb - self.center, axis=1) <= self.radius + tol
        return bool(val[0]) if single else val

    def support(self, u):
        ub, single = _as_batch(u)
        return _unbatch(ub @ self.center + self.radius, single)

    def radial(self, u):
        if not self.contains_origin_interior():
            raise OriginNotInterior("ball does not contain the origin")
        ub, single = _as_batch(u)
        uc = ub @ self.center
        disc = uc * uc - (self.center @ self.center - self.radius ** 2)
        return _unbatch(uc + np.sqrt(disc), single)

    def dist(self, x):
        xb, single = _as_batch(x)
        return _unbatch(np.maximum(0.0, np.linalg.norm(xb - self.center, axis=1) - self.radius), single)

    def project(self, x):
        xb, single = _as_batch(x)
        d = xb - self.center
        norms = np.linalg.norm(d, axis=1)
        out = xb.copy()
        mask = norms > self.radius
        if np.any(mask):
            out[mask] = self.center + d[mask] * (self.radius / norms[mask])[:, None]
        return out[0] if single else out

    def bounding_box(self):
        return self.center - self.radius, self.center + self.radius

    def contains_origin_interior(self):
        return float(np.linalg.norm(self.center)) < self.radius - 1e-14

    def scale(self, lam):
        return Ball(self.n, lam * self.radius, lam * self.center)

    def intrinsic_volumes_exact(self):
        from .measures import ball_intrinsic_volume
        return np.array([ball_intrinsic_volume(self.n, j) * self.radius ** j
                         for j in range(self.n + 1)])


class Ellipsoid(Body):
    """Axis-aligned ellipsoid sum (x_i / a_i)^2 <= 1 centered at the origin."""

    kind = "ellipsoid"

    def __init__(self, semi_axes):
        self.semi_axes = np.asarray(semi_axes, dtype=float).copy()
        if np.any(self.semi_axes <= 0.0):
            raise ValueError("semi-axes must be positive")
        self.n = self.semi_axes.size
        self.semi_axes.setflags(write=False)

    def membership(self, x, tol=MEMBERSHIP_TOL):
        xb, single = _as_batch(x)
        q = np.einsum("ij,ij->i", xb / self.semi_axes, xb / self.semi_axes)
        val = q <= 1.0 + 2.0 * tol / self.semi_axes.min()
        return bool(val[0]) if single else val

    def support(self, u):
        ub, single = _as_batch(u)
        return _unbatch(np.sqrt(np.einsum("ij,ij->i", ub * self.semi_axes, ub * self.semi_axes)), single)

    def radial(self, u):
        ub, single = _as_batch(u)
        q = np.einsum("ij,ij->i", ub / self.semi_axes, ub / self.semi_axes)
        return _unbatch(1.0 / np.sqrt(q), single)

    def project(self, x):
        xb, single = _as_batch(x)
        a2 = self.semi_axes ** 2
        q = np.einsum("ij,ij->i", xb / self.semi_axes, xb / self.semi_axes)
        out = xb.copy()
        mask = q > 1.0
        if np.any(mask):
            xo = xb[mask]
            # nearest point solves y_i = a_i^2 x_i / (a_i^2 + lam) with
            # g(lam) = sum (a_i x_i / (a_i^2 + lam))^2 = 1, g decreasing
            lo = np.zeros(len(xo))
            hi = np.full(len(xo), self.semi_axes.max() * (np.linalg.norm(xo, axis=1).max() + self.semi_axes.max()))

            def g(lam):
                denom = a2[None, :] + lam[:, None]
                t = (self.semi_axes[None, :] * xo) / denom
                return np.einsum("ij,ij->i", t, t)

            while np.any(g(hi) > 1.0):
                hi *= 2.0
            for _ in range(100):
                mid = 0.5 * (lo + hi)
                too_far = g(mid) > 1.0
                lo = np.where(too_far, mid, lo)
                hi = np.where(too_far, hi, mid)
            lam = 0.5 * (lo + hi)
            out[mask] = xo * (a2[None, :] / (a2[None, :] + lam[:, None]))
        return out[0] if single else out

    def dist(self, x):
        xb, single = _as_batch(x)
        proj = self.project(xb)
        return _unbatch(np.linalg.norm(xb - proj, axis=1), single)

    def bounding_box(self):
        return -self.semi_axes.copy(), self.semi_axes.copy()

    def contains_origin_interior(self):
        return True

    def scale(self, lam):
        return Ellipsoid(lam * self.semi_axes)

    def gauss_curvature(self, x):
        """Gauss-Kronecker curvature H_{n-1} at boundary points x."""
        xb, single = _as_batch(x)
        a2 = self.semi_axes ** 2
        s = np.einsum("ij,ij->i", xb / a2[None, :], xb / a2[None, :])
        k = 1.0 / (np.prod(a2) * s ** ((self.n + 1) / 2.0))
        return _unbatch(k, single)

    def principal_curvatures(self, x, tol=MEMBERSHIP_TOL):
        """Principal curvatures at a boundary point (eigenvalues of the
        shape operator of the quadric)."""
        x = np.asarray(x, dtype=float)
        q = float(np.sum((x / self.semi_axes) ** 2))
        if abs(q - 1.0) > 100.0 * tol:
            from .errors import OffBoundary
            raise OffBoundary("point is not on the ellipsoid boundary")
        grad = x / self.semi_axes ** 2
        gn = np.linalg.norm(grad)
        nu = grad / gn
        shape_op = (np.eye(self.n) - np.outer(nu, nu)) @ np.diag(1.0 / self.semi_axes ** 2) / gn
        eig = np.linalg.eigvals(shape_op)
        eig = np.sort(np.real(eig))
        # drop the ~0 eigenvalue in the normal direction
        drop = int(np.argmin(np.abs(eig)))
        return np.array([e for i, e in enumerate(eig) if i != drop])


class Cap(Body):
    """Spherical cap D_n intersected with {x . e >= eps}, e = sign * axis."""

    kind = "cap"

    def __init__(self, n, eps, sign=+1, axis=None):
        if not 0.0 < eps < 1.0:
            raise ValueError("cap height eps must lie in (0, 1)")
        if sign not in (+1, -1):
            raise ValueError("sign must be +1 or -1")
        self.n = int(n)
        self.eps = float(eps)
        self.sign = int(sign)
        ax = np.zeros(self.n)
        ax[-1] = 1.0
        if axis is not None:
            ax = np.asarray(axis, float)
            ax = ax / np.linalg.norm(ax)
        self.axis = ax.copy()
        self.axis.setflags(write=False)
        self._e = self.sign * self.axis          # cap is on the side x.e >= eps
        self.ball = Ball(self.n)

    def membership(self, x, tol=MEMBERSHIP_TOL):
        xb, single = _as_batch(x)
        val = (np.linalg.norm(xb, axis=1) <= 1.0 + tol) & (xb @ self._e >= self.eps - tol)
        return bool(val[0]) if single else val

    def support(self, u):
        ub, single = _as_batch(u)
        d = ub @ self._e
        perp = np.sqrt(np.maximum(0.0, 1.0 - d * d))
        vals = np.where(d >= self.eps, 1.0,
                        self.eps * d + sqrt(1.0 - self.eps ** 2) * perp)
        return _unbatch(vals, single)

    def radial(self, u):
        raise OriginNotInterior("caps do not contain the origin")

    def project(self, x):
        return project_ball_halfspaces(x, self.ball, -self._e[None, :],
                                       np.array([-self.eps]))

    def dist(self, x):
        xb, single = _as_batch(x)
        proj = self.project(xb)
        return _unbatch(np.linalg.norm(xb - proj, axis=1), single)

    def bounding_box(self):
        # exact along the cap axis when it is a coordinate axis, else the ball box
        lo = -np.ones(self.n)
        hi = np.ones(self.n)
        idx = np.nonzero(np.abs(np.abs(self._e) - 1.0) < 1e-14)[0]
        if idx.size == 1 and np.count_nonzero(self._e) == 1:
            k = int(idx[0])
            width = sqrt(1.0 - self.eps ** 2)
            lo[:] = -width
            hi[:] = width
            if self._e[k] > 0:
                lo[k], hi[k] = self.eps, 1.0
            else:
                lo[k], hi[k] = -1.0, -self.eps
        return lo, hi

    def contains_origin_interior(self):
        return False

    def volume_exact(self):
        """|D_n ∩ {x.e >= eps}| = |D_{n-1}| * ∫_eps^1 (1-t^2)^{(n-1)/2} dt."""
        from .measures import ball_volume
        n = self.n
        a, b = 0.5, (n + 1) / 2.0
        tail = 0.5 * beta_fn(a, b) * (1.0 - betainc(a, b, self.eps ** 2))
        return ball_volume(n - 1) * tail

    def intrinsic_volumes_exact(self):
        """(V_0, V_1, V_2) of a planar cap: half arc+chord perimeter, area."""
        if self.n != 2:
            raise UnsupportedDimension("closed-form cap intrinsic volumes only in the plane")
        e = self.eps
        v1 = acos(e) + sqrt(1.0 - e * e)
        v2 = acos(e) - e * sqrt(1.0 - e * e)
        return np.array([1.0, v1, v2])


def make_cap(n, eps, sign=+1) -> Cap:
    """Cap L_eps = D_n ∩ {x_n >= eps} (sign=+1) or its reflection (sign=-1)."""
    return Cap(n, eps, sign=sign)


class Polytope(Body):
    """Convex polytope with dual representation (vertices + true facets)."""

    kind = "polytope"

    def __init__(self, raw: _hull.RawHull):
        self._raw = raw
        self.n = raw.n
        vid = raw.vertex_indices()
        coords = raw.points[vid]
        order = np.lexsort(coords.T[::-1])       # lexicographic by x_0, x_1, ...
        self.vertices = np.ascontiguousarray(coords[order])
        self.vertices.setflags(write=False)
        self.interior_point = raw.interior.copy()
        self.interior_point.setflags(write=False)
        self._facets = None
        self._f_counts = None

    # -- representations --------------------------------------------------
    def _ensure_merged(self):
        if self._raw.groups is None:
            _hull._merge_coplanar(self._raw)

    @property
    def facet_normals(self):
        if self._facets is None:
            self._ensure_merged()
            a = self._raw.group_normals.copy()
            b = self._raw.group_offsets.copy()
            a.setflags(write=False)
            b.setflags(write=False)
            self._facets = (a, b)
        return self._facets[0]

    @property
    def facet_offsets(self):
        self.facet_normals
        return self._facets[1]

    @property
    def f_counts(self):
        if self._f_counts is None:
            self._ensure_merged()
            self._f_counts = _hull.face_counts(self._raw)
        return self._f_counts

    @property
    def simplicial_flag(self):
        self._ensure_merged()
        return self._raw.is_simplicial() and all(
            len(v) == self.n for v in self._raw.group_vertices)

    @property
    def num_vertices(self):
        return self.vertices.shape[0]

    # -- queries -----------------------------------------------------------
    def membership(self, x, tol=MEMBERSHIP_TOL):
        xb, single = _as_batch(x)
        val = (xb @ self.facet_normals.T - self.facet_offsets).max(axis=1) <= tol
        return bool(val[0]) if single else val

    def support(self, u, chunk=4096):
        ub, single = _as_batch(u)
        out = np.empty(len(ub))
        vt = self.vertices.T
        for c in range(0, len(ub), chunk):
            out[c:c + chunk] = (ub[c:c + chunk] @ vt).max(axis=1)
        return _unbatch(out, single)

    def radial(self, u, chunk=8192):
        if not self.contains_origin_interior():
            raise OriginNotInterior("polytope does not contain the origin")
        ub, single = _as_batch(u)
        a, b = self.facet_normals, self.facet_offsets
        out = np.empty(len(ub))
        for c in range(0, len(ub), chunk):
            au = ub[c:c + chunk] @ a.T
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(au > 1e-14, b[None, :] / au, np.inf)
            out[c:c + chunk] = t.min(axis=1)
        return _unbatch(out, single)

    def project(self, x):
        return project_ball_halfspaces(x, None, self.facet_normals, self.facet_offsets)

    def dist(self, x):
        xb, single = _as_batch(x)
        proj = self.project(xb)
        return _unbatch(np.linalg.norm(xb - proj, axis=1), single)

    def bounding_box(self):
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    def contains_origin_interior(self):
        return bool(np.all(self.facet_offsets > 1e-12))

    # -- measures ----------------------------------------------------------
    def volume(self):
        return _hull.fan_volume(self._raw)

    def surface_area(self):
        return _hull.boundary_measure(self._raw)

    def mean_width_v1(self):
        if self.n == 2:
            return 0.5 * self.perimeter()
        return _hull.mean_width_3d(self._raw)

    def perimeter(self):
        if self.n != 2:
            raise UnsupportedDimension("perimeter is a planar notion")
        return _hull.boundary_measure(self._raw)

    # -- transforms ---------------------------------------------------------
    def scale(self, lam):
        if lam <= 0.0:
            raise ValueError("scale factor must be positive")
        return convex_hull(self.vertices * lam)

    def translate(self, t):
        t = np.asarray(t, dtype=float)
        return convex_hull(self.vertices + t)

    # -- serialization ------------------------------------------------------
    def to_dict(self):
        facets = sorted(
            ({"normal": [float(v) for v in a], "offset": float(b)}
             for a, b in zip(self.facet_normals, self.facet_offsets)),
            key=lambda f: (f["normal"], f["offset"]))
        return {"n": self.n,
                "vertices": [[float(v) for v in row] for row in self.vertices],
                "facets": facets}

    def to_json(self, **kwargs):
        return json.dumps(self.to_dict(), **kwargs)

    @staticmethod
    def from_dict(data):
        return convex_hull(np.asarray(data["vertices"], dtype=float))

    @staticmethod
    def from_json(text):
        return Polytope.from_dict(json.loads(text))

    def __repr__(self):
        return f"Polytope(n={self.n}, f={self.f_counts})"


class IntersectionBody(Body):
    """Intersection of smooth bodies and halfspaces (with interior)."""

    kind = "intersection"

    def __init__(self, parts, halfspaces=None):
        self.parts = tuple(parts)
        if not self.parts and halfspaces is None:
            raise ValueError("empty intersection description")
        self.n = self.parts[0].n if self.parts else len(halfspaces[0][0])
        if halfspaces is not None and len(halfspaces[0]):
            a = np.asarray(halfspaces[0], dtype=float).copy()
            b = np.asarray(halfspaces[1], dtype=float).copy()
            norms = np.linalg.norm(a, axis=1)
            a /= norms[:, None]
            b /= norms
            a.setflags(write=False)
            b.setflags(write=False)
            self.halfspaces = (a, b)
        else:
            self.halfspaces = (np.zeros((0, self.n)), np.zeros(0))
        self._support_candidates = None

    def membership(self, x, tol=MEMBERSHIP_TOL):
        xb, single = _as_batch(x)
        ok = np.ones(len(xb), dtype=bool)
        for part in self.parts:
            ok &= part.membership(xb, tol=tol)
        a, b = self.halfspaces
        if len(a):
            ok &= (xb @ a.T - b).max(axis=1) <= tol
        return bool(ok[0]) if single else ok

    def radial(self, u):
        ub, single = _as_batch(u)
        vals = np.full(len(ub), np.inf)
        for part in self.parts:
            vals = np.minimum(vals, part.radial(ub))
        a, b = self.halfspaces
        if len(a):
            if np.any(b <= 1e-12):
                raise OriginNotInterior("intersection does not contain the origin")
            au = ub @ a.T
            with np.errstate(divide="ignore", invalid="ignore"):
                t = np.where(au > 1e-14, b[None, :] / au, np.inf)
            vals = np.minimum(vals, t.min(axis=1))
        return _unbatch(vals, single)

    def project(self, x):
        a, b = self.halfspaces
        if len(self.parts) == 1 and isinstance(self.parts[0], Ball):
            return project_ball_halfspaces(x, self.parts[0], a, b)
        if not self.parts:
            return project_ball_halfspaces(x, None, a, b)
        xb, _ = _as_batch(x)
        projs = [p.project for p in self.parts]
        projs += [_halfspace_project(ai, float(bi)) for ai, bi in zip(a, b)]
        return dykstra(xb, projs)

    def dist(self, x):
        xb, single = _as_batch(x)
        proj = self.project(xb)
        return _unbatch(np.linalg.norm(xb - proj, axis=1), single)

    def support(self, u):
        """Exact in the plane for one ball + halfspaces; the maximizer of a
        linear functional over a disk/polygon intersection is a corner of
        the arrangement or the arc point in direction u."""
        if not (self.n == 2 and len(self.parts) == 1 and isinstance(self.parts[0], Ball)):
            raise UnsupportedBodyKind(
                "support of general intersection bodies is only exact in the plane")
        ball = self.parts[0]
        a, b = self.halfspaces
        if self._support_candidates is None:
            self._support_candidates = self._corner_candidates(ball, a, b)
        cands = self._support_candidates
        ub, single = _as_batch(u)
        best = np.full(len(ub), -np.inf)
        if len(cands):
            best = (ub @ cands.T).max(axis=1)
        arc = ball.center + ball.radius * ub
        on_poly = (arc @ a.T - b).max(axis=1) <= MEMBERSHIP_TOL if len(a) else np.ones(len(ub), bool)
        arc_val = ub @ ball.center + ball.radius
        best = np.where(on_poly, np.maximum(best, arc_val), best)
        return _unbatch(best, single)

    @staticmethod
    def _corner_candidates(ball, a, b):
        tol = MEMBERSHIP_TOL
        pts = []
        k = len(a)
        # line-line corners inside the disk
        for i in range(k):
            for j in range(i + 1, k):
                m = np.array([a[i], a[j]])
                if abs(np.linalg.det(m)) < 1e-12:
                    continue
                p = np.linalg.solve(m, np.array([b[i], b[j]]))
                if np.linalg.norm(p - ball.center) <= ball.radius + tol \
                        and (p @ a.T - b).max() <= tol:
                    pts.append(p)
        # line-circle corners on the feasible boundary
        for i in range(k):
            h = b[i] - a[i] @ ball.center
            if abs(h) > ball.radius:
                continue
            foot = ball.center + h * a[i]
            t = sqrt(max(0.0, ball.radius ** 2 - h * h))
            perp = np.array([-a[i][1], a[i][0]])
            for p in (foot + t * perp, foot - t * perp):
                if (p @ a.T - b).max() <= tol:
                    pts.append(p)
        return np.array(pts) if pts else np.zeros((0, 2))

    def bounding_box(self):
        lo = np.full(self.n, -np.inf)
        hi = np.full(self.n, np.inf)
        for part in self.parts:
            plo, phi = part.bounding_box()
            lo = np.maximum(lo, plo)
            hi = np.minimum(hi, phi)
        if not np.all(np.isfinite(lo)):
            raise GeometryError("unbounded intersection body")
        return lo, hi

    def contains_origin_interior(self):
        ok = all(p.contains_origin_interior() for p in self.parts)
        a, b = self.halfspaces
        return ok and (len(a) == 0 or bool(np.all(b > 1e-12)))


# -- constructions ----------------------------------------------------------

def convex_hull(points) -> Polytope:
    """Polytope hull of a full-dimensional point set (n <= 8)."""
    return Polytope(_hull.raw_hull(np.asarray(points, dtype=float)))


def box_polytope(lo, hi) -> Polytope:
    """Axis-aligned box as a Polytope."""
    lo = np.asarray(lo, dtype=float)
    hi = np.asarray(hi, dtype=float)
    n = lo.size
    corners = np.array(np.meshgrid(*[(lo[i], hi[i]) for i in range(n)],
                                   indexing="ij")).reshape(n, -1).T
    return convex_hull(corners)


def chebyshev_center(a, b):
    """Center and radius of the largest ball in {x: a.x <= b} (a unit rows)."""
    m, n = a.shape
    c = np.zeros(n + 1)
    c[-1] = -1.0
    a_ub = np.hstack([a, np.ones((m, 1))])
    res = linprog(c, A_ub=a_ub, b_ub=b, bounds=[(None, None)] * n + [(0, None)],
                  method="highs")
    if not res.success:
        return None, 0.0
    return res.x[:n], float(res.x[n])


def halfspace_intersection(halfspaces, bounding_box) -> Polytope:
    """Polytope (∩ halfspaces) ∩ box, via polarity about an interior point.

    ``halfspaces`` is a sequence of (normal, offset) pairs meaning
    normal . x <= offset; ``bounding_box`` is a Polytope (or (lo, hi) pair)
    that keeps the intersection bounded.
    """
    a = np.array([np.asarray(h[0], dtype=float) for h in halfspaces])
    b = np.array([float(h[1]) for h in halfspaces])
    norms = np.linalg.norm(a, axis=1)
    if np.any(norms == 0.0):
        raise ValueError("zero halfspace normal")
    a /= norms[:, None]
    b /= norms
    if isinstance(bounding_box, Polytope):
        abox, bbox = bounding_box.facet_normals, bounding_box.facet_offsets
    else:
        lo, hi = bounding_box
        n = len(lo)
        abox = np.vstack([np.eye(n), -np.eye(n)])
        bbox = np.concatenate([np.asarray(hi, float), -np.asarray(lo, float)])
    a = np.vstack([a, abox])
    b = np.concatenate([b, bbox])

    center, rad = chebyshev_center(a, b)
    scale = max(1.0, float(np.abs(b).max()))
    if center is None or rad <= 1e-9 * scale:
        raise EmptyIntersection("halfspace intersection has no interior")

    slack = b - a @ center
    dual_points = a / slack[:, None]
    dual = _hull.raw_hull(dual_points)
    _hull._merge_coplanar(dual)
    verts = dual.group_normals / dual.group_offsets[:, None] + center
    return convex_hull(verts)


def make_regular_polygon(nv, circumradius=1.0) -> Polytope:
    """Regular polygon with nv vertices, inscribed in circumradius * S^1."""
    if nv < 3:
        raise BudgetTooSmall("a polygon needs at least 3 vertices")
    if circumradius <= 0.0:
        raise ValueError("circumradius must be positive")
    ang = 2.0 * np.pi * np.arange(nv) / nv
    pts = circumradius * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return convex_hull(pts)


def make_triangle_T(h) -> Polytope:
    """Regular triangle centered at the origin with circumradius 1 + h,
    vertices at 90, 210 and 330 degrees."""
    if h <= -1.0:
        raise ValueError("circumradius 1 + h must be positive")
    ang = np.deg2rad([90.0, 210.0, 330.0])
    pts = (1.0 + h) * np.stack([np.cos(ang), np.sin(ang)], axis=1)
    return convex_hull(pts)


def circumscribed_polygon(nv, angles=None) -> Polytope:
    """Polygon of tangent lines to the unit circle at the given angles
    (regular when omitted)."""
    if nv < 3:
        raise BudgetTooSmall("a polygon needs at least 3 tangent lines")
    if angles is None:
        angles = 2.0 * np.pi * np.arange(nv) / nv
    normals = np.stack([np.cos(angles), np.sin(angles)], axis=1)
    halfspaces = [(normals[i], 1.0) for i in range(len(normals))]
    return halfspace_intersection(halfspaces, (np.full(2, -2.0 * nv), np.full(2, 2.0 * nv)))


# -- free-function oracles ---------------------------------------------------

def _check_unit(u):
    ub, _ = _as_batch(u)
    err = np.abs(np.linalg.norm(ub, axis=1) - 1.0)
    if np.any(err > 1e-12):
        raise ValueError("directions must be unit vectors (within 1e-12)")


def support(body, u):
    """h_K(u) = max over x in K of x . u, for unit u."""
    _check_unit(u)
    return body.support(u)


def radial(body, u):
    """rho_K(u) = max {r > 0 : r u in K}, for unit u; needs 0 in int K."""
    _check_unit(u)
    return body.radial(u)


def dist(body, x):
    """Euclidean distance from x to the body."""
    return body.dist(x)


def rdist(body, x):
    """Radial distance from x to the body through the origin."""
    return body.rdist(x)
