"""Incremental convex hull in R^n for 2 <= n <= 8.

Beneath-beyond insertion with a facet adjacency graph and outside-set
bookkeeping: every pending exterior point is charged to one facet it
violates, points are inserted farthest-first, and the visible cone is grown
by BFS over facet neighbors.  Nearly coplanar adjacent facets are merged in
a post-pass so the H-representation lists true facets even for degenerate
inputs (boxes, bipyramids over squares, ...).

The hull of points with n == 2 takes a fast monotone-chain path that yields
the same facet/adjacency structure as the general code.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .errors import DegenerateInput, GeometryError, UnsupportedDimension

MAX_HULL_DIM = 8

# Relative tolerances (scaled by the coordinate magnitude of the input):
# points closer than VIS to a facet plane are treated as on it, adjacent
# facets closer than MERGE_ANGLE are one true facet.
VIS = 1e-10
DEGEN = 1e-9
MERGE_ANGLE = 1e-9


@dataclass
class RawHull:
    """Simplicial facet complex of a hull plus its merged true facets."""

    points: np.ndarray            # the input coordinates (referenced, not copied)
    simplices: np.ndarray         # (F, n) vertex indices of simplicial facets
    normals: np.ndarray           # (F, n) outward unit normals
    offsets: np.ndarray           # (F,) so that facet = {x : normal.x = offset}
    adjacency: list               # per facet: dict ridge(tuple) -> facet index
    interior: np.ndarray          # a point strictly inside the hull
    scale: float
    groups: np.ndarray = field(default=None)        # merge group id per simplicial facet
    group_vertices: list = field(default=None)      # vertex index tuple per group
    group_normals: np.ndarray = field(default=None)
    group_offsets: np.ndarray = field(default=None)

    @property
    def n(self) -> int:
        return self.points.shape[1]

    def vertex_indices(self) -> np.ndarray:
        return np.unique(self.simplices)

    def is_simplicial(self) -> bool:
        return len(self.group_vertices) == self.simplices.shape[0]


def _plane(block: np.ndarray):
    """Unit normal + offset of the hyperplane through the rows of ``block``."""
    n = block.shape[1]
    if n == 2:
        d = block[1] - block[0]
        nrm = np.array([d[1], -d[0]])
    elif n == 3:
        u = block[1] - block[0]
        v = block[2] - block[0]
        nrm = np.array([u[1] * v[2] - u[2] * v[1],
                        u[2] * v[0] - u[0] * v[2],
                        u[0] * v[1] - u[1] * v[0]])
    else:
        a = (block[1:] - block[0]).T
        q, _ = np.linalg.qr(a, mode="complete")
        nrm = q[:, -1]
    ln = float(np.sqrt(nrm @ nrm))
    if ln == 0.0:
        return None
    nrm = nrm / ln
    return nrm, float(nrm @ block[0])


def _planes_batch(pts: np.ndarray, vert_sets: np.ndarray):
    """Planes for a batch of facets, vectorized for n in {2, 3}."""
    n = pts.shape[1]
    blocks = pts[vert_sets]                        # (H, n, n)
    if n == 2:
        d = blocks[:, 1] - blocks[:, 0]
        nrm = np.stack([d[:, 1], -d[:, 0]], axis=1)
    elif n == 3:
        u = blocks[:, 1] - blocks[:, 0]
        v = blocks[:, 2] - blocks[:, 0]
        nrm = np.stack([u[:, 1] * v[:, 2] - u[:, 2] * v[:, 1],
                        u[:, 2] * v[:, 0] - u[:, 0] * v[:, 2],
                        u[:, 0] * v[:, 1] - u[:, 1] * v[:, 0]], axis=1)
    else:
        nrm = np.empty((len(vert_sets), n))
        for i, blk in enumerate(blocks):
            pl = _plane(blk)
            if pl is None:
                raise GeometryError("degenerate facet during hull construction")
            nrm[i] = pl[0]
    ln = np.linalg.norm(nrm, axis=1)
    if np.any(ln == 0.0):
        raise GeometryError("degenerate facet during hull construction")
    nrm = nrm / ln[:, None]
    off = np.einsum("ij,ij->i", nrm, blocks[:, 0])
    return nrm, off


def _initial_simplex(pts: np.ndarray, degen_tol: float) -> list:
    """Indices of n+1 points spanning R^n, greedily far apart."""
    m, n = pts.shape
    spread = pts.max(axis=0) - pts.min(axis=0)
    ax = int(np.argmax(spread))
    i0 = int(np.argmin(pts[:, ax]))
    i1 = int(np.argmax(pts[:, ax]))
    if i0 == i1 or not np.linalg.norm(pts[i1] - pts[i0]) > degen_tol:
        raise DegenerateInput("input points are not full-dimensional")
    chosen = [i0, i1]
    while len(chosen) < n + 1:
        base = pts[chosen[0]]
        span = (pts[chosen[1:]] - base).T           # (n, k)
        q, _ = np.linalg.qr(span)
        diffs = pts - base
        resid = diffs - (diffs @ q) @ q.T
        dist = np.linalg.norm(resid, axis=1)
        j = int(np.argmax(dist))
        if dist[j] <= degen_tol:
            raise DegenerateInput("input points are not full-dimensional")
        chosen.append(j)
    return chosen


def raw_hull(points: np.ndarray, vis_tol: float | None = None) -> RawHull:
    """Simplicial hull of ``points``; merged facets attached afterwards."""
    pts = np.ascontiguousarray(points, dtype=float)
    if pts.ndim != 2:
        raise ValueError("points must be a 2-d array")
    m, n = pts.shape
    if n < 2 or n > MAX_HULL_DIM:
        raise UnsupportedDimension(f"hulls supported for 2 <= n <= {MAX_HULL_DIM}, got {n}")
    if m < n + 1:
        raise DegenerateInput(f"need at least {n + 1} points in R^{n}")
    scale = max(1.0, float(np.abs(pts).max()))
    vis_eps = VIS * scale if vis_tol is None else vis_tol

    if n == 2:
        hull = _hull_2d(pts, scale, vis_eps)
    else:
        hull = _hull_nd(pts, scale, vis_eps)
    _merge_coplanar(hull)
    return hull


def _hull_2d(pts: np.ndarray, scale: float, vis_eps: float) -> RawHull:
    """Monotone chain, strict turns only, packaged as a RawHull."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    eps2 = vis_eps * scale

    def chain(idx):
        out = []
        for i in idx:
            while len(out) >= 2:
                o, a = pts[out[-2]], pts[out[-1]]
                cross = (a[0] - o[0]) * (pts[i][1] - o[1]) - (a[1] - o[1]) * (pts[i][0] - o[0])
                if cross <= eps2:          # non-left turn: pop (collinear points dropped)
                    out.pop()
                else:
                    break
            out.append(i)
        return out

    lower = chain(order)
    upper = chain(order[::-1])
    ring = lower[:-1] + upper[:-1]          # counterclockwise vertex ring
    if len(ring) < 3:
        raise DegenerateInput("input points are not full-dimensional")
    k = len(ring)
    simplices = np.array([(ring[i], ring[(i + 1) % k]) for i in range(k)], dtype=np.intp)
    normals, offsets = _planes_batch(pts, simplices)
    interior = pts[ring].mean(axis=0)
    flip = normals @ interior > offsets
    normals[flip] *= -1.0
    offsets[flip] *= -1.0
    adjacency = []
    for i in range(k):
        adjacency.append({(ring[i],): (i - 1) % k, (ring[(i + 1) % k],): (i + 1) % k})
    return RawHull(pts, simplices, normals, offsets, adjacency, interior, scale)


def _hull_nd(pts: np.ndarray, scale: float, vis_eps: float) -> RawHull:
    m, n = pts.shape
    chosen = _initial_simplex(pts, DEGEN * scale)
    interior = pts[chosen].mean(axis=0)

    fverts: list = []
    fnorm: list = []
    foff: list = []
    fnbr: list = []
    fout: list = []
    alive: list = []

    def new_facet(verts: tuple, plane=None) -> int:
        if plane is None:
            plane = _plane(pts[list(verts)])
            if plane is None:
                raise GeometryError("degenerate facet during hull construction")
        nrm, off = plane
        if nrm @ interior > off:
            nrm, off = -nrm, -off
        fverts.append(tuple(verts))
        fnorm.append(nrm)
        foff.append(off)
        fnbr.append({})
        fout.append(None)
        alive.append(True)
        return len(fverts) - 1

    # initial simplex facets; facet k omits chosen[k]
    for k in range(n + 1):
        new_facet(tuple(chosen[:k] + chosen[k + 1:]))
    for k in range(n + 1):
        for j in range(n + 1):
            if j == k:
                continue
            ridge = tuple(sorted(set(fverts[k]) - {chosen[j]}))
            fnbr[k][ridge] = j

    # initial outside assignment: each exterior point charged to its worst facet
    normals = np.array(fnorm)
    offsets = np.array(foff)
    viol = pts @ normals.T - offsets
    best = np.argmax(viol, axis=1)
    vmax = viol[np.arange(m), best]
    outside_mask = vmax > vis_eps
    pending = []
    for k in range(n + 1):
        mine = np.nonzero(outside_mask & (best == k))[0]
        if mine.size:
            fout[k] = mine
            pending.append(k)

    while pending:
        f = pending.pop()
        if not alive[f] or fout[f] is None:
            continue
        cand = fout[f]
        viol_f = pts[cand] @ fnorm[f] - foff[f]
        j = int(np.argmax(viol_f))
        if viol_f[j] <= vis_eps:
            fout[f] = None
            continue
        p_idx = int(cand[j])
        p = pts[p_idx]

        # grow the visible cone by BFS over the adjacency graph
        visible = {f}
        stack = [f]
        while stack:
            g = stack.pop()
            for nb in fnbr[g].values():
                if nb not in visible and alive[nb] and fnorm[nb] @ p - foff[nb] > vis_eps:
                    visible.add(nb)
                    stack.append(nb)

        horizon = []                       # (ridge, neighbor outside the cone)
        for g in visible:
            for ridge, nb in fnbr[g].items():
                if nb not in visible:
                    horizon.append((ridge, nb))
        if not horizon:
            raise GeometryError("empty horizon; inconsistent visibility")

        new_verts = [tuple(sorted(ridge + (p_idx,))) for ridge, _ in horizon]
        nrm_batch, off_batch = _planes_batch(pts, np.array(new_verts, dtype=np.intp))

        new_ids = []
        ridge_map: dict = {}               # ridges through p, to pair new facets
        for (ridge, nb), verts, nrm, off in zip(horizon, new_verts, nrm_batch, off_batch):
            fid = new_facet(verts, plane=(nrm, float(off)))
            new_ids.append(fid)
            fnbr[fid][ridge] = nb
            fnbr[nb][ridge] = fid
            for drop in ridge:
                key = tuple(sorted(set(verts) - {drop}))
                other = ridge_map.pop(key, None)
                if other is None:
                    ridge_map[key] = fid
                else:
                    fnbr[fid][key] = other
                    fnbr[other][key] = fid
        if ridge_map:
            raise GeometryError("unpaired ridge; inconsistent horizon")

        # retest the outside points of the cone against the new facets
        pools = [fout[g] for g in visible if fout[g] is not None]
        for g in visible:
            alive[g] = False
            fout[g] = None
        if pools:
            # outside pools are disjoint by construction
            cand = np.concatenate(pools) if len(pools) > 1 else pools[0]
            cand = cand[cand != p_idx]
            if cand.size:
                nn = np.array([fnorm[i] for i in new_ids])
                bb = np.array([foff[i] for i in new_ids])
                d = pts[cand] @ nn.T - bb
                best = np.argmax(d, axis=1)
                vmax = d[np.arange(len(cand)), best]
                keep = vmax > vis_eps
                for col, fid in enumerate(new_ids):
                    mine = cand[keep & (best == col)]
                    if mine.size:
                        fout[fid] = mine
                        pending.append(fid)

    keep = [i for i, a in enumerate(alive) if a]
    remap = {old: new for new, old in enumerate(keep)}
    simplices = np.array([fverts[i] for i in keep], dtype=np.intp)
    normals = np.array([fnorm[i] for i in keep])
    offsets = np.array([foff[i] for i in keep])
    adjacency = [{r: remap[nb] for r, nb in fnbr[i].items()} for i in keep]
    return RawHull(pts, simplices, normals, offsets, adjacency, interior, scale)


def _merge_coplanar(hull: RawHull) -> None:
    """Union-find over adjacent, nearly coplanar simplicial facets."""
    f = hull.simplices.shape[0]
    parent = list(range(f))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    off_tol = MERGE_ANGLE * hull.scale
    for i in range(f):
        for j in hull.adjacency[i].values():
            if j <= i:
                continue
            if (hull.normals[i] @ hull.normals[j] >= 1.0 - MERGE_ANGLE
                    and abs(hull.offsets[i] - hull.offsets[j]) <= off_tol):
                parent[find(i)] = find(j)

    roots: dict = {}
    groups = np.empty(f, dtype=np.intp)
    for i in range(f):
        r = find(i)
        groups[i] = roots.setdefault(r, len(roots))
    k = len(roots)

    members: list = [[] for _ in range(k)]
    for i in range(f):
        members[groups[i]].append(i)
    gverts, gnorm, goff = [], np.empty((k, hull.n)), np.empty(k)
    for g, mem in enumerate(members):
        vids = np.unique(hull.simplices[mem])
        gverts.append(tuple(int(v) for v in vids))
        if len(mem) == 1:
            gnorm[g] = hull.normals[mem[0]]
            goff[g] = hull.offsets[mem[0]]
        else:
            # refit the supporting plane over all member vertices
            coords = hull.points[vids]
            center = coords.mean(axis=0)
            _, _, vh = np.linalg.svd(coords - center)
            nrm = vh[-1]
            if nrm @ hull.interior > nrm @ center:
                nrm = -nrm
            gnorm[g] = nrm
            goff[g] = nrm @ center
    hull.groups = groups
    hull.group_vertices = gverts
    hull.group_normals = gnorm
    hull.group_offsets = goff


def face_counts(hull: RawHull) -> tuple:
    """(f_0, ..., f_{n-1}) of the hull; exact for n <= 3 and for simplicial
    hulls in any dimension, via face-lattice closure otherwise."""
    n = hull.n
    f0 = int(hull.vertex_indices().size)
    if n == 2:
        return (f0, f0)
    simplicial = hull.is_simplicial()
    fn1 = len(hull.group_vertices)
    if simplicial:
        counts = [f0]
        for k in range(1, n - 1):
            sets = set()
            for simplex in hull.simplices:
                for comb in itertools.combinations(sorted(simplex), k + 1):
                    sets.add(comb)
            counts.append(len(sets))
        counts.append(fn1)
        return tuple(counts)
    if n == 3:
        pairs = set()
        for i in range(hull.simplices.shape[0]):
            for j in hull.adjacency[i].values():
                gi, gj = hull.groups[i], hull.groups[j]
                if gi != gj:
                    pairs.add((min(gi, gj), max(gi, gj)))
        return (f0, len(pairs), fn1)
    return _face_counts_closure(hull, f0, fn1)


def _face_counts_closure(hull: RawHull, f0: int, fn1: int) -> tuple:
    """Face lattice by closing facet vertex sets under intersection.

    Every proper face of a polytope is an intersection of facets, and the
    vertex set of an intersection of faces is the intersection of their
    vertex sets.  Only used for degenerate hulls in n >= 4; guarded by size.
    """
    n = hull.n
    if f0 > 256 or fn1 > 128:
        raise UnsupportedDimension("face lattice too large for non-simplicial hull")
    facets = [frozenset(v) for v in hull.group_vertices]
    faces = set(facets)
    frontier = set(facets)
    while frontier:
        fresh = set()
        for a in frontier:
            for b in facets:
                c = a & b
                if c and c not in faces:
                    fresh.add(c)
        faces |= fresh
        frontier = fresh
    counts = [0] * n
    tol = DEGEN * hull.scale
    for face in faces:
        coords = hull.points[sorted(face)]
        if len(face) == 1:
            dim = 0
        else:
            sv = np.linalg.svd(coords - coords.mean(axis=0), compute_uv=False)
            dim = int(np.sum(sv > tol))
        if dim < n:
            counts[dim] += 1
    return tuple(counts)


def fan_volume(hull: RawHull) -> float:
    """Volume of the hull as a fan of simplices over the interior point."""
    n = hull.n
    blocks = hull.points[hull.simplices] - hull.interior   # (F, n, n)
    dets = np.abs(np.linalg.det(blocks))
    return float(dets.sum() / factorial(n))


def boundary_measure(hull: RawHull) -> float:
    """(n-1)-dimensional measure of the hull boundary."""
    n = hull.n
    blocks = hull.points[hull.simplices]
    edges = blocks[:, 1:, :] - blocks[:, :1, :]             # (F, n-1, n)
    grams = edges @ np.transpose(edges, (0, 2, 1))
    dets = np.linalg.det(grams)
    dets[dets < 0.0] = 0.0
    return float(np.sqrt(dets).sum() / factorial(n - 1))


def mean_width_3d(hull: RawHull) -> float:
    """V_1 of a 3-d hull: (1/2pi) * sum over edges of length * exterior angle.

    Coplanar (merged) edges contribute an exterior angle of ~0 and so drop
    out on their own.
    """
    if hull.n != 3:
        raise UnsupportedDimension("mean-width formula implemented for n == 3")
    simp = hull.simplices
    f = simp.shape[0]
    edges = np.concatenate([simp[:, [0, 1]], simp[:, [0, 2]], simp[:, [1, 2]]])
    edges.sort(axis=1)
    fids = np.tile(np.arange(f, dtype=np.intp), 3)
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    edges = edges[order]
    fids = fids[order]
    if not np.array_equal(edges[0::2], edges[1::2]):
        raise GeometryError("boundary complex is not edge-paired")
    fi, fj = fids[0::2], fids[1::2]
    seg = hull.points[edges[0::2, 0]] - hull.points[edges[0::2, 1]]
    lengths = np.linalg.norm(seg, axis=1)
    ni, nj = hull.normals[fi], hull.normals[fj]
    cosang = np.einsum("ij,ij->i", ni, nj)
    sinang = np.linalg.norm(np.cross(ni, nj), axis=1)
    ang = np.arctan2(sinang, cosang)
    return float((lengths * ang).sum() / (2.0 * np.pi))


def hull_volume(points: np.ndarray) -> float:
    """Volume of conv(points) in its ambient dimension (1 <= d <= 8)."""
    pts = np.asarray(points, dtype=float)
    if pts.ndim == 1:
        pts = pts[:, None]
    d = pts.shape[1]
    if d == 1:
        return float(pts.max() - pts.min())
    if d == 2:
        return hull_area_2d(pts)
    return fan_volume(raw_hull(pts))


def hull_area_2d(pts: np.ndarray) -> float:
    """Area of the planar hull of ``pts`` (monotone chain + shoelace)."""
    order = np.lexsort((pts[:, 1], pts[:, 0]))
    sorted_pts = pts[order]

    def chain(p):
        out = []
        for q in p:
            while len(out) >= 2 and ((out[-1][0] - out[-2][0]) * (q[1] - out[-2][1])
                                     - (out[-1][1] - out[-2][1]) * (q[0] - out[-2][0])) <= 0.0:
                out.pop()
            out.append(q)
        return out

    lower = chain(sorted_pts)
    upper = chain(sorted_pts[::-1])
    ring = np.array(lower[:-1] + upper[:-1])
    if len(ring) < 3:
        return 0.0
    x, y = ring[:, 0], ring[:, 1]
    return 0.5 * abs(float(np.dot(x, np.roll(y, -1)) - np.dot(y, np.roll(x, -1))))
