"""Best-approximation solvers for inscribed and circumscribed polytopes.

Multi-start simulated annealing over boundary-parametrized vertex (or
tangent touch) directions, followed by a deterministic shrinking-step
pattern search.  Objectives are evaluated exactly in the plane (gap
formulas for inscribed/circumscribed polygons of the disk) and for balls
in R^3 (exact polytope intrinsic volumes); other deviation objectives fall
back to seeded Monte Carlo with common random numbers inside a chain.

The search space is restricted to polytopes whose vertices (facet touch
points) lie on the boundary of the approximated body; this is provably
optimal for the volume deviation and matches the classical constructions.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import exp, pi, sin, sqrt, tan

import numpy as np

from . import rng as _rng
from .bodies import Ball, Body, Polytope, convex_hull, halfspace_intersection
from .deviations import delta_j as _delta_j_report
from .errors import BudgetTooSmall, UnsupportedBodyKind, UnsupportedDimension
from .measures import ball_intrinsic_volume, intrinsic_volumes_exact


@dataclass(frozen=True)
class OptimizerConfig:
    restarts: int = 8
    steps: int = 2000
    initial_step: float = 0.5        # radians on the boundary parametrization
    cooling: float = 0.995
    tolerance: float = 1e-10         # relative objective change in the polish
    seed: int = 0
    mc_samples: int = 20_000         # only used by Monte Carlo objectives


@dataclass(frozen=True)
class BestApproxResult:
    polytope: Polytope
    value: float
    std_error: float
    history: tuple                   # best value per restart
    budget: int
    mode: str

    def to_dict(self):
        return {"value": self.value, "std_error": self.std_error,
                "history": list(self.history), "budget": self.budget,
                "mode": self.mode, "polytope": self.polytope.to_dict()}


# -- closed-form 2-d objectives ------------------------------------------------

def _gaps(angles):
    a = np.sort(np.mod(angles, 2.0 * pi))
    g = np.diff(a, append=a[0] + 2.0 * pi)
    return g


def inscribed_polygon_vj(angles, j):
    """V_j of the polygon with vertices at the given angles on S^1."""
    g = _gaps(angles)
    if j == 2:
        return 0.5 * float(np.sin(g).sum())
    if j == 1:
        return float(np.sin(0.5 * g).sum())
    return 1.0


def circumscribed_polygon_vj(angles, j):
    """V_j of the polygon of tangent lines at the given angles (inf when
    the tangent directions leave a gap of pi or more)."""
    g = _gaps(angles)
    if np.any(g >= pi - 1e-12):
        return np.inf
    t = np.tan(0.5 * g)
    if j == 2:
        return float(t.sum())
    if j == 1:
        return float(t.sum())
    return 1.0


def oracle_2d(budget: int, mode: str, j: int = 2) -> float:
    """Exact Delta_j(D_2, regular polygon) values: pi - (N/2) sin(2pi/N)
    inscribed and N tan(pi/N) - pi circumscribed (j in {1, 2} coincide for
    circumscribed polygons; inscribed j = 1 is pi - N sin(pi/N))."""
    if budget < 3:
        raise BudgetTooSmall("polygons need at least 3 vertices")
    if mode == "inscribed":
        if j == 2:
            return pi - 0.5 * budget * sin(2.0 * pi / budget)
        if j == 1:
            return pi - budget * sin(pi / budget)
        raise ValueError("j must be 1 or 2 in the plane")
    if mode == "circumscribed":
        return budget * tan(pi / budget) - pi
    raise ValueError("mode must be inscribed or circumscribed")


# -- objective factory -----------------------------------------------------------

class _Objective:
    """Objective over N boundary directions; exact where possible."""

    def __init__(self, body, mode, kind="delta_j", j=None, samples=20_000, seed=0):
        self.body = body
        self.mode = mode
        self.kind = kind
        self.j = j
        self.samples = samples
        self.seed = seed
        self.n = body.n
        self.exact2d = isinstance(body, Ball) and body.n == 2 \
            and float(np.linalg.norm(body.center)) < 1e-14 and abs(body.radius - 1.0) < 1e-14 \
            and kind in ("delta_j", "delta_sigma")
        self.exact3d = isinstance(body, Ball) and body.n == 3 \
            and float(np.linalg.norm(body.center)) < 1e-14 and abs(body.radius - 1.0) < 1e-14 \
            and kind in ("delta_j", "delta_sigma")
        self.is_exact = self.exact2d or self.exact3d

    def __call__(self, dirs):
        if self.exact2d:
            angles = np.arctan2(dirs[:, 1], dirs[:, 0])
            poly_vj = inscribed_polygon_vj if self.mode == "inscribed" else circumscribed_polygon_vj
            js = [self.j] if self.kind == "delta_j" else [1, 2]
            total = 0.0
            for j in js:
                vp = poly_vj(angles, j)
                vb = ball_intrinsic_volume(2, j)
                total += (vb - vp) if self.mode == "inscribed" else (vp - vb)
            return total
        poly = self.build(dirs)
        if self.exact3d:
            vec = intrinsic_volumes_exact(poly)
            js = [self.j] if self.kind == "delta_j" else [1, 2, 3]
            total = 0.0
            for j in js:
                vb = ball_intrinsic_volume(3, j)
                total += (vb - vec[j]) if self.mode == "inscribed" else (vec[j] - vb)
            return total
        rep = _delta_j_report(self.body, poly, self.j, samples=self.samples, seed=self.seed)
        return rep.value

    def build(self, dirs) -> Polytope:
        """Polytope realized by the given boundary directions."""
        if self.mode == "inscribed":
            pts = _boundary_points(self.body, dirs)
            return convex_hull(pts)
        pts = _boundary_points(self.body, dirs)
        normals = _boundary_normals(self.body, pts)
        offsets = np.einsum("ij,ij->i", normals, pts)
        lo, hi = self.body.bounding_box()
        margin = 2.0 + float(np.max(hi - lo))
        return halfspace_intersection(
            [(normals[i], float(offsets[i])) for i in range(len(pts))],
            (lo - margin, hi + margin))

    def final_value(self, dirs):
        """Re-evaluate the incumbent; fresh larger sample for MC objectives."""
        if self.is_exact:
            return float(self(dirs)), 0.0
        poly = self.build(dirs)
        rep = _delta_j_report(self.body, poly, self.j,
                              samples=4 * self.samples, seed=self.seed + 99_991)
        return rep.value, rep.std_error


def _boundary_points(body, dirs):
    if isinstance(body, Ball):
        return body.center[None, :] + body.radius * dirs
    rho = body.radial(dirs)
    return dirs * rho[:, None]


def _boundary_normals(body, pts):
    from .randpoly import boundary_normal
    return boundary_normal(body, pts)


# -- annealing + pattern search ----------------------------------------------------

def _tangent_basis(u):
    """Orthonormal basis of the tangent space at unit vector u."""
    n = len(u)
    basis = []
    for k in range(n):
        e = np.zeros(n)
        e[k] = 1.0
        v = e - (e @ u) * u
        for w in basis:
            v -= (v @ w) * w
        nv = np.linalg.norm(v)
        if nv > 1e-8:
            basis.append(v / nv)
        if len(basis) == n - 1:
            break
    return basis


def _polish(dirs, objective, tolerance, max_sweeps=200):
    """Deterministic shrinking-step pattern search on the unit directions."""
    dirs = dirs.copy()
    val = objective(dirs)
    step = 0.05
    for _ in range(max_sweeps):
        improved = False
        for i in range(len(dirs)):
            for t in _tangent_basis(dirs[i]):
                for sgn in (1.0, -1.0):
                    cand = dirs.copy()
                    v = dirs[i] + sgn * step * t
                    cand[i] = v / np.linalg.norm(v)
                    cv = objective(cand)
                    if cv < val - 1e-15:
                        dirs, val = cand, cv
                        improved = True
        if not improved:
            step *= 0.5
            if step < 1e-9:
                break
        if val != 0.0 and step < tolerance * abs(val):
            break
    return dirs, val


def _anneal_once(objective, budget, n, config, restart):
    rng = _rng.substream(config.seed, restart)
    dirs = rng.standard_normal((budget, n))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    val = objective(dirs)
    while not np.isfinite(val):
        dirs = rng.standard_normal((budget, n))
        dirs /= np.linalg.norm(dirs, axis=1)[:, None]
        val = objective(dirs)
    best_dirs, best_val = dirs.copy(), val
    t0 = max(abs(val), 1e-6) * 0.1
    temp = t0
    for step in range(config.steps):
        temp = t0 * config.cooling ** step
        size = config.initial_step * max(temp / t0, 1e-3)
        i = int(rng.integers(budget))
        cand = dirs.copy()
        v = dirs[i] + size * rng.standard_normal(n)
        cand[i] = v / np.linalg.norm(v)
        cv = objective(cand)
        if not np.isfinite(cv):
            continue
        if cv < val or rng.random() < exp(-(cv - val) / max(temp, 1e-300)):
            dirs, val = cand, cv
            if cv < best_val:
                best_dirs, best_val = cand.copy(), cv
    best_dirs, best_val = _polish(best_dirs, objective, config.tolerance)
    return best_dirs, best_val


def _optimize(body, budget, mode, kind, j, config):
    if budget < body.n + 1:
        raise BudgetTooSmall("budget below n+1")
    if body.n > 4:
        raise UnsupportedDimension("optimizer supports n <= 4")
    if j is None and kind == "delta_j":
        j = body.n
    objective = _Objective(body, mode, kind=kind, j=j,
                           samples=config.mc_samples, seed=config.seed)
    history = []
    best_dirs, best_val = None, np.inf
    for restart in range(config.restarts):
        dirs, val = _anneal_once(objective, budget, body.n, config, restart)
        history.append(val)
        if val < best_val:
            best_dirs, best_val = dirs, val
    value, std = objective.final_value(best_dirs)
    poly = objective.build(best_dirs)
    return BestApproxResult(poly, value, std, tuple(history), budget, mode)


def best_inscribed(body: Body, budget: int, j: int = None, kind: str = "delta_j",
                   config: OptimizerConfig = None) -> BestApproxResult:
    """Best inscribed polytope with at most ``budget`` vertices for the
    j-th intrinsic volume deviation (or the Wills deviation sum)."""
    return _optimize(body, budget, "inscribed", kind, j, config or OptimizerConfig())


def best_circumscribed(body: Body, budget: int, j: int = None, kind: str = "delta_j",
                       config: OptimizerConfig = None) -> BestApproxResult:
    """Best circumscribed polytope with at most ``budget`` facets (tangent
    halfspaces at boundary touch points)."""
    if not isinstance(body, (Ball,)) and not hasattr(body, "semi_axes"):
        raise UnsupportedBodyKind("circumscribed optimization needs a smooth body")
    return _optimize(body, budget, "circumscribed", kind, j, config or OptimizerConfig())


# -- simultaneous approximation ------------------------------------------------------

@dataclass(frozen=True)
class SimultaneousRatio:
    value: float
    argmax_j: int
    ratios: tuple

    def to_dict(self):
        return {"value": self.value, "argmax_j": self.argmax_j, "ratios": list(self.ratios)}


def simultaneous_ratio(body: Ball, poly: Polytope, samples: int = 100_000,
                       seed: int = 0) -> SimultaneousRatio:
    """max over j of Delta_j(D_n, P) / V_j(D_n) for an inscribed or
    circumscribed polytope of the ball.  The maximizing j is reported, not
    asserted."""
    if not isinstance(body, Ball):
        raise UnsupportedBodyKind("simultaneous ratio is defined against the ball")
    n = body.n
    ratios = []
    for j in range(1, n + 1):
        rep = _delta_j_report(body, poly, j, samples=samples, seed=seed)
        ratios.append(rep.value / (ball_intrinsic_volume(n, j) * body.radius ** j))
    arg = int(np.argmax(ratios)) + 1
    return SimultaneousRatio(float(max(ratios)), arg, tuple(ratios))
