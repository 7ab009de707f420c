"""Seeded body corpus and the invariant check battery.

The test suite runs these checks at full size; the CLI ``verify`` command
runs a quick subset after the inequality suite.  Every check is a pure
function of its seed.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import acos, pi, sqrt

import numpy as np

from . import rng as _rng
from .bodies import Ball, Cap, Polytope, convex_hull, make_regular_polygon
from .constants import alpha, alpha_from_beta
from .deviations import (delta1_comparison, delta_j, dual_delta, intrinsic_vector)
from .measures import (ball_intrinsic_volume, dual_volume, intrinsic_volumes_exact,
                       kubota_estimate, steiner_fit)
from .randpoly import random_inscribed


@dataclass(frozen=True)
class CheckRecord:
    check: str
    ok: bool
    detail: str = ""

    def to_dict(self):
        return {"check": self.check, "ok": self.ok, "detail": self.detail}


def random_polytope(n: int, seed: int, count: int = None) -> Polytope:
    """Hull of seeded uniform sphere points (count defaults to 6(n+1))."""
    count = count or 6 * (n + 1)
    rng = _rng.substream(seed, 101)
    pts = rng.standard_normal((count, n))
    pts /= np.linalg.norm(pts, axis=1)[:, None]
    return convex_hull(pts)


def random_body_pair(n: int, seed: int):
    """Seeded variety of overlapping body pairs with the origin interior."""
    rng = _rng.substream(seed, 202)
    mode = seed % 3
    p = random_polytope(n, seed)
    if mode == 0:
        q = random_polytope(n, seed + 1000)
        return p, q
    if mode == 1:
        r = 0.5 + 0.4 * rng.random()
        return Ball(n, r), p
    shift = 0.15 * rng.standard_normal(n)
    return p, p.scale(0.7 + 0.5 * rng.random()).translate(shift)


def polytope_invariants(p: Polytope, tol: float = 1e-9) -> list:
    """The structural Polytope invariants as (name, ok) pairs."""
    out = []
    a, b = p.facet_normals, p.facet_offsets
    slack = p.vertices @ a.T - b
    out.append(("vertices_satisfy_facets", bool(slack.max() <= tol)))
    on_facet = np.abs(slack) <= tol
    out.append(("vertex_on_n_facets", bool(on_facet.sum(axis=1).min() >= p.n)))
    out.append(("facet_has_n_vertices", bool(on_facet.sum(axis=0).min() >= p.n)))
    f = p.f_counts
    n = p.n
    euler = sum((-1) ** k * f[k] for k in range(n))
    out.append(("euler_relation", euler == 1 + (-1) ** (n - 1)))
    if n >= 3:
        out.append(("handshaking", f[1] >= n / 2 * f[0] and f[n - 2] >= n / 2 * f[n - 1]))
    if p.simplicial_flag and n >= 4:
        half = n // 2
        out.append(("unimodality", all(f[k] < f[k + 1] for k in range(half))))
    return out


def run_quick_corpus(seed: int = 0) -> list:
    """Compact invariant battery for the CLI verify command."""
    records = []

    # hull structure on random point sets in n = 3 and 4
    ok = True
    details = []
    for n in (3, 4):
        for s in range(5):
            p = random_polytope(n, seed + 7 * s + n)
            for name, good in polytope_invariants(p):
                if not good:
                    ok = False
                    details.append(f"n={n} seed={s}: {name}")
    records.append(CheckRecord("hull_invariants", ok, "; ".join(details)))

    # hull idempotence
    p = random_polytope(3, seed + 55)
    q = convex_hull(p.vertices)
    records.append(CheckRecord(
        "hull_idempotence",
        p.vertices.shape == q.vertices.shape and bool(np.allclose(np.sort(p.vertices, axis=0),
                                                                  np.sort(q.vertices, axis=0))),
    ))

    # scaling homogeneity of support/radial
    u = _rng.sphere_directions(seed + 3, 64, 3)
    lam = 1.7
    ok = bool(np.allclose(p.scale(lam).support(u), lam * p.support(u), rtol=1e-9, atol=1e-9))
    ok &= bool(np.allclose(p.scale(lam).radial(u), lam * p.radial(u), rtol=1e-9, atol=1e-9))
    records.append(CheckRecord("scaling_homogeneity", ok))

    # estimator cross-agreement on the unit cube
    from .bodies import box_polytope
    cube = box_polytope(np.zeros(3), np.ones(3))
    exact = intrinsic_volumes_exact(cube)
    kb = kubota_estimate(cube, 1, samples=20_000, seed=seed + 4)
    sf = steiner_fit(cube, samples=40_000, seed=seed + 5)
    ok = abs(kb.value - exact[1]) <= 3.0 * max(kb.std_error, 1e-12)
    for j in range(4):
        ok &= abs(sf[j] - exact[j]) <= 3.0 * max(sf.error(j), 1e-12)
    records.append(CheckRecord("estimator_cross_agreement", ok))

    # dual normalization on the ball
    dv = dual_volume(Ball(3), 2.0, samples=10_000, seed=seed + 6)
    records.append(CheckRecord("dual_ball_normalization",
                               abs(dv.value - ball_intrinsic_volume(3, 2)) < 1e-9))

    # deviation symmetry / nonnegativity / definiteness on seeded pairs
    ok = True
    details = []
    for s in range(4):
        k, l = random_body_pair(2 + (s % 2), seed + 31 * s)
        d_kl = delta_j(k, l, 1, samples=20_000, seed=seed)
        d_lk = delta_j(l, k, 1, samples=20_000, seed=seed)
        sig = 3.0 * sqrt(d_kl.std_error ** 2 + d_lk.std_error ** 2) + 1e-9
        if abs(d_kl.value - d_lk.value) > sig or d_kl.value < -3.0 * d_kl.std_error - 1e-12:
            ok = False
            details.append(f"pair {s}")
    d_self = delta_j(Ball(2), Ball(2), 2)
    ok &= d_self.value == 0.0
    records.append(CheckRecord("deviation_symmetry_nonneg", ok, "; ".join(details)))

    # dual deviation two-route agreement on square vs disk
    from .bodies import box_polytope as _box
    sq = _box(-np.ones(2), np.ones(2))
    ok = True
    for q in (-1.0, 0.0, 1.0, 1.5, 2.0, 4.0):
        rep = dual_delta(Ball(2), sq, q, samples=40_000, seed=seed + 8)
        sig = 3.0 * sqrt(rep.std_error ** 2 + rep.cross_std_error ** 2) + 1e-9
        ok &= abs(rep.value - rep.cross_value) <= sig
    records.append(CheckRecord("dual_two_route_agreement", ok))

    # Delta_1 >= V_1 delta_1 with nested equality
    cmp_nested = delta1_comparison(Ball(2), make_regular_polygon(7), samples=30_000, seed=seed + 9)
    ok = cmp_nested.gap >= -3.0 * cmp_nested.gap_std and cmp_nested.union_convex
    ok &= abs(cmp_nested.gap) <= 3.0 * cmp_nested.gap_std + 1e-9
    records.append(CheckRecord("delta1_l1_inequality", ok))

    # inscribed/circumscribed containment of random constructions
    p_in = random_inscribed(Ball(3), 40, seed=seed + 10)
    ok = bool(np.all(np.linalg.norm(p_in.vertices, axis=1) <= 1.0 + 1e-9))
    records.append(CheckRecord("random_containment", ok))

    # isoperimetric chain and log-concavity of the cube vector
    vec = intrinsic_vector(cube)
    ratios = [vec[j] / ball_intrinsic_volume(3, j) for j in range(4)]
    chain = [(ratios[3]) ** (1 / 3), (ratios[2]) ** (1 / 2), ratios[1]]
    ok = all(chain[i] <= chain[i + 1] + 1e-12 for i in range(2))
    ok &= all(ratios[j] ** 2 >= ratios[j - 1] * ratios[j + 1] - 1e-12 for j in (1, 2))
    records.append(CheckRecord("isoperimetric_chain", ok))

    # alpha monotone in j, beta inversion
    ok = all(alpha(5, j) < alpha(5, j + 1) for j in range(1, 5))
    ok &= abs(alpha_from_beta(7, 4) - alpha(7, 4)) < 1e-12 * alpha(7, 4)
    records.append(CheckRecord("alpha_beta_relations", ok))

    # cap valuation sanity: V_1(L_eps) + V_1(L_-eps) -> pi + 2
    vals = [2.0 * (acos(e) + sqrt(1 - e * e)) for e in (0.2, 0.1, 0.05)]
    target = pi + 2.0
    gaps = [abs(v - target) for v in vals]
    records.append(CheckRecord("cap_valuation_limit", gaps[0] > gaps[1] > gaps[2]))

    return records
