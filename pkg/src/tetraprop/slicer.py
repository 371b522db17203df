"""Numerical intersection of metric spheres and the h-function.

The solver seeds candidates near the first sphere in every chart sheet,
drives them onto the intersection with a batched Levenberg-Marquardt descent
(finite-difference Jacobians, no analytic derivatives), and clusters the
converged points under single linkage in the intrinsic metric.

Continua are recognised locally: at a cluster representative the constraint
Jacobian loses rank relative to the sheet dimension.  Flagged fragments that
are joined through the solution set are merged, and short continuation probes
give every flagged cluster its true extent, so ``is_continuum`` is exactly
"some cluster is wider than ``kappa_continuum * delta_cluster``".
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components
from scipy.spatial import cKDTree

from .spaces import (
    Point,
    SpaceError,
    SpaceSpec,
    ambient,
    ambient_lipschitz,
    ball_box,
    distance,
    distances_to,
    norm,
    pair_distances,
    point,
)

_SPHERE_CHARTS = ("sphere", "projective_plane", "cone_slice")
RANK_RTOL = 1e-6
STALL_WINDOW = 5  # LM rows must halve their cost within this many iterations


@dataclass(frozen=True)
class Tolerances:
    tau_sphere: float
    delta_cluster: float
    kappa_continuum: float = 10.0
    grid_m: int = 17
    refine_iters: int = 200
    samples: int = 4096
    seed: int = 0

    def __post_init__(self):
        if not (self.tau_sphere > 0 and self.delta_cluster > 0 and self.kappa_continuum > 1):
            raise ValueError("tolerances must be positive with kappa_continuum > 1")
        if not self.tau_sphere < self.delta_cluster:
            raise ValueError("tau_sphere must be smaller than delta_cluster")
        if self.grid_m < 3 or self.refine_iters < 1 or self.samples < 1:
            raise ValueError("grid_m >= 3, refine_iters >= 1 and samples >= 1 required")

    @classmethod
    def for_radius(cls, r: float, **overrides) -> "Tolerances":
        """Default policy scaled to the radius ``r`` of the probed sphere."""
        base = dict(tau_sphere=1e-7 * r, delta_cluster=1e-3 * r)
        base.update(overrides)
        return cls(**base)

    def to_dict(self) -> dict:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}

    @classmethod
    def from_dict(cls, d: dict) -> "Tolerances":
        return cls(**d)


@dataclass(frozen=True)
class SphereConstraint:
    center: Point
    radius: float

    def __post_init__(self):
        if not self.radius > 0:
            raise SpaceError("sphere radius must be positive")


@dataclass
class Cluster:
    representative: Point
    member_count: int
    cluster_diameter: float


@dataclass
class IntersectionSet:
    clusters: list = field(default_factory=list)
    is_continuum: bool = False
    residual_max: float = 0.0
    # representatives where the solution set is locally a continuum
    flagged: list = field(default_factory=list)

    def __len__(self):
        return len(self.clusters)

    @property
    def points(self) -> list[Point]:
        return [c.representative for c in self.clusters]


# --- chart parametrization ------------------------------------------------------------


def _to_coords(space: SpaceSpec, sheet: str, X: np.ndarray) -> np.ndarray:
    if space.kind in _SPHERE_CHARTS:
        return X / norm(X)[..., None]
    if space.kind == "glued_planes" and sheet == "YZ":
        return np.stack([X[..., 0], np.abs(X[..., 1])], axis=-1)
    if space.kind == "plane_ray" and sheet == "RAY":
        return np.abs(X)
    return X


def _length_scale(space: SpaceSpec) -> float:
    """Smallest intrinsic length per unit chart displacement (order of magnitude)."""
    if space.kind in ("sphere", "projective_plane"):
        return space.rho
    if space.kind == "cone":
        return space.base.rho
    if space.kind == "cone_slice":
        return space.s * space.base.rho
    return 1.0


def _candidates(space: SpaceSpec, c: Point, T: float, n: int, rng) -> list[tuple[str, np.ndarray]]:
    k = space.kind
    if k == "euclidean":
        g = rng.standard_normal((n, space.dim))
        return [("", c.array + T * g / np.linalg.norm(g, axis=1, keepdims=True))]
    if k in _SPHERE_CHARTS:
        g = rng.standard_normal((n, 3))
        return [("", g / np.linalg.norm(g, axis=1, keepdims=True))]
    if k in ("cone", "cone_rp2"):
        tc = float(np.linalg.norm(c.array))
        t = rng.uniform(abs(tc - T), tc + T, size=n)
        g = rng.standard_normal((n, 3))
        return [("", t[:, None] * g / np.linalg.norm(g, axis=1, keepdims=True))]
    boxes = ball_box(space, c, T)
    out = []
    if k == "plane_ray":
        n_ray = max(16, n // 16)
        counts = [n - n_ray, n_ray]
    else:
        vols = np.array([np.prod(hi - lo) for _, lo, hi in boxes])
        counts = [int(round(n * v / vols.sum())) for v in vols]
    for (sheet, lo, hi), m in zip(boxes, counts):
        if m <= 0 or np.any(hi <= lo):
            continue
        out.append((sheet, rng.uniform(lo, hi, size=(m, len(lo)))))
    return out


# --- batched Levenberg-Marquardt ------------------------------------------------------


class _Residual:
    def __init__(self, space, sheet, constraints):
        self.space = space
        self.sheet = sheet
        self.centers = [(c.center.sheet, c.center.array) for c in constraints]
        self.radii = np.array([c.radius for c in constraints])

    def __call__(self, X: np.ndarray) -> np.ndarray:
        Y = _to_coords(self.space, self.sheet, X)
        cols = [pair_distances(self.space, self.sheet, Y, cs, ca) for cs, ca in self.centers]
        return np.stack(cols, axis=-1) - self.radii


def _jacobian(F, X: np.ndarray, step: float, F0: Optional[np.ndarray] = None) -> np.ndarray:
    """Central differences, or forward differences when ``F0 = F(X)`` is supplied."""
    N, k = X.shape
    J = None
    for j in range(k):
        E = np.zeros_like(X)
        E[:, j] = step
        if F0 is None:
            col = (F(X + E) - F(X - E)) / (2 * step)
        else:
            col = (F(X + E) - F0) / step
        if J is None:
            J = np.empty((N, col.shape[1], k))
        J[:, :, j] = col
    return J


def _levenberg_marquardt(F, X0: np.ndarray, iters: int, target: float, step: float):
    """Minimize ``sum(F(x)**2)`` for every row of ``X0`` independently.

    Returns final parameters and residual vectors.  Rows stop once the largest
    residual is below ``target`` or the damping diverges.
    """
    X = np.array(X0, dtype=float)
    R = F(X)
    cost = np.einsum("ij,ij->i", R, R)
    lam = np.full(len(X), 1e-3)
    active = np.max(np.abs(R), axis=1) > target
    k = X.shape[1]
    eye = np.eye(k)
    snapshot = cost.copy()
    for it in range(iters):
        if it and it % STALL_WINDOW == 0:
            # rows that failed to halve their cost over the window are stuck
            active &= cost < 0.5 * snapshot
            snapshot = cost.copy()
        idx = np.flatnonzero(active)
        if idx.size == 0:
            break
        Xa, Ra = X[idx], R[idx]
        J = _jacobian(F, Xa, step, Ra)
        A = np.einsum("nmi,nmj->nij", J, J)
        g = np.einsum("nmi,nm->ni", J, Ra)
        # isotropic damping: null directions of a continuum stay damped, so
        # forward-difference noise there cannot produce long tangential steps
        scale = np.einsum("nii->n", A) / k + 1e-12
        M = A + (lam[idx] * scale)[:, None, None] * eye
        try:
            delta = np.linalg.solve(M, -g[:, :, None])[:, :, 0]
        except np.linalg.LinAlgError:
            delta = -np.einsum("nij,nj->ni", np.linalg.pinv(M), g)
        Xn = Xa + delta
        Rn = F(Xn)
        cn = np.einsum("ij,ij->i", Rn, Rn)
        ok = np.isfinite(cn) & (cn < cost[idx])
        acc = idx[ok]
        X[acc], R[acc], cost[acc] = Xn[ok], Rn[ok], cn[ok]
        lam[acc] = np.maximum(lam[acc] / 3.0, 1e-12)
        rej = idx[~ok]
        lam[rej] *= 4.0
        done = np.max(np.abs(R[idx]), axis=1) <= target
        active[idx[done]] = False
        active[lam > 1e10] = False
    return X, R


# --- solving ------------------------------------------------------------------------------


@dataclass
class _Converged:
    sheet: str
    params: np.ndarray
    coords: np.ndarray
    resid: np.ndarray  # max |residual| per row


def _scale(constraints: Sequence[SphereConstraint]) -> float:
    c0 = constraints[0]
    e = ambient(c0.center.space, c0.center.sheet, c0.center.array)[0]
    return c0.radius + float(np.linalg.norm(e))


def _fd_step(space: SpaceSpec, constraints) -> float:
    if space.kind in _SPHERE_CHARTS:
        return 1e-7
    return 1e-7 * _scale(constraints)


def _descend(space, constraints, starts, tol: Tolerances, step: float) -> list[_Converged]:
    out = []
    for sheet, X0 in starts:
        if len(X0) == 0:
            continue
        F = _Residual(space, sheet, constraints)
        X, R = _levenberg_marquardt(F, X0, tol.refine_iters, 1e-3 * tol.tau_sphere, step)
        r = np.max(np.abs(R), axis=1)
        keep = np.isfinite(r) & (r <= tol.tau_sphere)
        if np.any(keep):
            Xk = X[keep]
            out.append(_Converged(sheet, Xk, _to_coords(space, sheet, Xk), r[keep]))
    return out


def _check_constraints(space: SpaceSpec, constraints: Sequence[SphereConstraint]):
    if not constraints:
        raise SpaceError("at least one constraint is required")
    for c in constraints:
        if c.center.space != space:
            raise SpaceError("constraint center belongs to a different space")


def _canonical_order(constraints: Sequence[SphereConstraint]) -> list[SphereConstraint]:
    first, rest = constraints[0], list(constraints[1:])
    rest.sort(key=lambda c: (c.center.sheet, c.center.coords, c.radius))
    return [first] + rest


def _group_by_grid(space, conv: list[_Converged], cell: float):
    """Collapse points that share a fine ambient grid cell.

    Returns ``[source index, row, member count]`` for the lowest-residual
    member of every occupied cell, in sheet/cell order.
    """
    src, row, keys, res = [], [], [], []
    for si, c in enumerate(conv):
        emb = ambient(space, c.sheet, c.coords)[0]
        n = len(c.coords)
        src.append(np.full(n, si))
        row.append(np.arange(n))
        keys.append(np.floor(emb / cell).astype(np.int64))
        res.append(c.resid)
    src = np.concatenate(src)
    row = np.concatenate(row)
    keys = np.concatenate(keys)
    res = np.concatenate(res)
    order = np.lexsort((row, res) + tuple(keys.T[::-1]) + (src,))
    k_sorted = np.column_stack([src[order], keys[order]])
    new = np.ones(len(order), dtype=bool)
    new[1:] = np.any(k_sorted[1:] != k_sorted[:-1], axis=1)
    starts = np.flatnonzero(new)
    sizes = np.diff(np.append(starts, len(order)))
    first = order[starts]
    return [[int(src[i]), int(row[i]), int(n)] for i, n in zip(first, sizes)]


def _point_of(space, sheet, coords) -> Point:
    coords = np.asarray(coords, dtype=float)
    if space.kind in _SPHERE_CHARTS:
        coords = coords / np.linalg.norm(coords)
    if space.kind == "glued_planes" and sheet == "YZ":
        coords = np.array([coords[0], max(coords[1], 0.0)])
    if space.kind == "plane_ray" and sheet == "RAY":
        coords = np.maximum(coords, 0.0)
    return point(space, coords, sheet)


def _rank_deficient(space, sheet, constraints, params, step) -> bool:
    d = space.natural_dim(sheet)
    if len(constraints) < d:
        return True
    F = _Residual(space, sheet, constraints)
    J = _jacobian(F, params[None, :], step)[0]
    sv = np.linalg.svd(J, compute_uv=False)
    if sv[0] == 0:
        return True
    return sv[d - 1] < RANK_RTOL * sv[0]


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def solve_intersection(
    space: SpaceSpec,
    constraints: Sequence[SphereConstraint],
    tol: Optional[Tolerances] = None,
) -> IntersectionSet:
    """Numerically compute ``S(c_1..c_j; t_1..t_j)`` as clustered points."""
    _check_constraints(space, constraints)
    constraints = _canonical_order(constraints)
    T0 = constraints[0].radius
    if tol is None:
        tol = Tolerances.for_radius(T0)
    rng = np.random.default_rng(tol.seed)
    step = _fd_step(space, constraints)
    starts = _candidates(space, constraints[0].center, T0, tol.samples, rng)
    conv = _descend(space, constraints, starts, tol, step)
    if not conv:
        return IntersectionSet()

    delta = tol.delta_cluster
    groups = _group_by_grid(space, conv, delta / 8.0)
    sheets = [conv[g[0]].sheet for g in groups]
    coords = [conv[g[0]].coords[g[1]] for g in groups]
    params = [conv[g[0]].params[g[1]] for g in groups]
    resid = np.array([conv[g[0]].resid[g[1]] for g in groups])
    counts = np.array([g[2] for g in groups])
    n = len(groups)

    # single linkage at delta in the intrinsic metric, candidates from a kd-tree
    emb, owner = [], []
    for i in range(n):
        for e in ambient(space, sheets[i], coords[i]):
            emb.append(e)
            owner.append(i)
    emb = np.array(emb)
    owner = np.array(owner)
    tree = cKDTree(emb)
    pairs = tree.query_pairs(delta * ambient_lipschitz(space) * (1 + 1e-9), output_type="ndarray")
    rows, cols = [], []
    if len(pairs):
        a, b = owner[pairs[:, 0]], owner[pairs[:, 1]]
        keep = a != b
        a, b = a[keep], b[keep]
        for i, j in zip(a, b):
            if pair_distances(space, sheets[i], coords[i], sheets[j], coords[j]) <= delta:
                rows.append(i)
                cols.append(j)
    graph = coo_matrix((np.ones(len(rows)), (rows, cols)), shape=(n, n))
    _, labels = connected_components(graph, directed=False)

    # representative per component: smallest residual, then lexicographic coordinates
    comp: dict[int, list[int]] = {}
    for i, lab in enumerate(labels):
        comp.setdefault(int(lab), []).append(i)
    reps = []
    for members in comp.values():
        best = min(members, key=lambda i: (resid[i], sheets[i], tuple(coords[i])))
        reps.append((best, members))

    flags = [_rank_deficient(space, sheets[b], constraints, params[b], step) for b, _ in reps]
    uf = _UnionFind(len(reps))
    flagged_idx = [i for i, f in enumerate(flags) if f]
    if len(flagged_idx) > 1:
        _merge_fragments(space, constraints, tol, step, reps, flagged_idx, sheets, coords, params, uf)

    probes = {}
    if flagged_idx:
        probes = _continuation_probes(space, constraints, tol, step, reps, flagged_idx, sheets, params)

    merged: dict[int, list[int]] = {}
    for i in range(len(reps)):
        merged.setdefault(uf.find(i), []).append(i)

    clusters = []
    flagged_points = []
    for root, parts in merged.items():
        members = [m for i in parts for m in reps[i][1]]
        best = min(members, key=lambda i: (resid[i], sheets[i], tuple(coords[i])))
        rep = _point_of(space, sheets[best], coords[best])
        pts = [(sheets[m], coords[m]) for m in members]
        for i in parts:
            pts.extend(probes.get(i, []))
        diam = _diameter_estimate(space, pts)
        clusters.append(Cluster(rep, int(sum(counts[m] for m in members)), diam))
        if any(flags[i] for i in parts):
            flagged_points.append(rep)
    clusters.sort(key=lambda c: (c.representative.sheet, c.representative.coords))
    flagged_points.sort(key=lambda p: (p.sheet, p.coords))
    kappa_delta = tol.kappa_continuum * delta
    return IntersectionSet(
        clusters=clusters,
        is_continuum=any(c.cluster_diameter > kappa_delta for c in clusters),
        residual_max=float(max(c.resid.max() for c in conv)),
        flagged=flagged_points,
    )


def _closest_rep(space, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    if space.quotient and np.linalg.norm(a + b) < np.linalg.norm(a - b):
        return -b
    return b


def _merge_fragments(space, constraints, tol, step, reps, flagged_idx, sheets, coords, params, uf):
    """Join flagged fragments whose connecting chord projects onto the solution set.

    A k-nearest-neighbour pass links most fragments; Boruvka rounds then test
    the shortest edge leaving each remaining component.
    """
    L = 0.25 * constraints[0].radius * ambient_lipschitz(space)
    emb, owner = [], []
    for fi in flagged_idx:
        b = reps[fi][0]
        for e in ambient(space, sheets[b], coords[b]):
            emb.append(e)
            owner.append(fi)
    emb = np.array(emb)
    owner = np.array(owner)
    tree = cKDTree(emb)
    kq = min(6, len(emb))
    dist, nbr = tree.query(emb, k=kq, distance_upper_bound=L)
    cand = set()
    for row in range(len(emb)):
        for j in range(1, kq):
            if np.isfinite(dist[row, j]):
                cand.add((owner[row], owner[nbr[row, j]]))
    tested: set = set()
    _test_links(space, constraints, tol, step, reps, sheets, coords, params, uf, cand, tested)

    for _ in range(20):
        roots = np.array([uf.find(o) for o in owner])
        comps = np.unique(roots)
        if len(comps) < 2 or len(comps) > 64:
            return
        cand = set()
        for c in comps:
            inside = roots == c
            other = np.flatnonzero(~inside)
            d, j = cKDTree(emb[other]).query(emb[inside], k=1, distance_upper_bound=L)
            if not np.any(np.isfinite(d)):
                continue
            i = int(np.argmin(d))
            cand.add((owner[np.flatnonzero(inside)[i]], owner[other[j[i]]]))
        if not _test_links(space, constraints, tol, step, reps, sheets, coords, params, uf, cand, tested):
            return


def _test_links(space, constraints, tol, step, reps, sheets, coords, params, uf, cand, tested) -> bool:
    """Midpoint-projection test for candidate fragment pairs; returns True if any union happened."""
    by_sheet: dict[str, list] = {}
    for a, b in sorted((min(a, b), max(a, b)) for a, b in cand):
        if a == b or (a, b) in tested or uf.find(a) == uf.find(b):
            continue
        tested.add((a, b))
        ia, ib = reps[a][0], reps[b][0]
        if sheets[ia] != sheets[ib]:
            continue
        pa = params[ia]
        pb = _closest_rep(space, pa, params[ib])
        by_sheet.setdefault(sheets[ia], []).append((a, b, 0.5 * (pa + pb), ia, ib))
    merged = False
    for sheet, items in by_sheet.items():
        mids = np.array([it[2] for it in items])
        F = _Residual(space, sheet, constraints)
        X, R = _levenberg_marquardt(F, mids, tol.refine_iters, 1e-3 * tol.tau_sphere, step)
        ok = np.max(np.abs(R), axis=1) <= tol.tau_sphere
        proj = _to_coords(space, sheet, X)
        start = _to_coords(space, sheet, mids)
        dev = pair_distances(space, sheet, proj, sheet, start)
        for (a, b, _, ia, ib), good, dv in zip(items, ok, dev):
            gap = float(pair_distances(space, sheet, coords[ia], sheet, coords[ib]))
            if good and dv <= 0.25 * gap:
                uf.union(a, b)
                merged = True
    return merged


def _continuation_probes(space, constraints, tol, step, reps, flagged_idx, sheets, params):
    """Push flagged representatives off along each chart axis and re-project."""
    eta = 4.0 * tol.kappa_continuum * tol.delta_cluster / _length_scale(space)
    out: dict[int, list] = {}
    by_sheet: dict[str, list] = {}
    for fi in flagged_idx:
        b = reps[fi][0]
        p = params[b]
        for j in range(len(p)):
            for sgn in (1.0, -1.0):
                q = p.copy()
                q[j] += sgn * eta
                by_sheet.setdefault(sheets[b], []).append((fi, q))
    for sheet, items in by_sheet.items():
        X0 = np.array([q for _, q in items])
        F = _Residual(space, sheet, constraints)
        X, R = _levenberg_marquardt(F, X0, tol.refine_iters, 1e-3 * tol.tau_sphere, step)
        ok = np.max(np.abs(R), axis=1) <= tol.tau_sphere
        Y = _to_coords(space, sheet, X)
        for (fi, _), good, y in zip(items, ok, Y):
            if good:
                out.setdefault(fi, []).append((sheet, y))
    return out


def _diameter_estimate(space, pts: list) -> float:
    """Double-sweep diameter estimate of a finite point list."""
    if len(pts) < 2:
        return 0.0

    def far(src):
        best, arg = -1.0, 0
        by_sheet: dict[str, list] = {}
        for i, (s, c) in enumerate(pts):
            by_sheet.setdefault(s, []).append(i)
        for s, idx in by_sheet.items():
            d = pair_distances(space, s, np.array([pts[i][1] for i in idx]), src[0], src[1])
            j = int(np.argmax(d))
            if d[j] > best:
                best, arg = float(d[j]), idx[j]
        return best, arg

    _, a = far(pts[0])
    d, _ = far(pts[a])
    return d


# --- h-function ------------------------------------------------------------------------------


def _sorted_apex_radii(apexes, t):
    pairs = sorted(zip(apexes, t), key=lambda q: (q[0].sheet, q[0].coords, q[1]))
    return [a for a, _ in pairs], [float(x) for _, x in pairs]


def h_raw(space, p: Point, r: float, apexes: Sequence[Point], t, tol: Optional[Tolerances] = None) -> float:
    """h without the apex-on-sphere precondition (used by slice integrals)."""
    t = list(np.atleast_1d(np.asarray(t, dtype=float)))
    if len(t) != len(apexes):
        raise SpaceError("need one radius per apex")
    if any(not ti > 0 for ti in t):
        return 0.0
    apexes, t = _sorted_apex_radii(apexes, t)
    if tol is None:
        tol = Tolerances.for_radius(r)
    cons = [SphereConstraint(p, r)] + [SphereConstraint(a, ti) for a, ti in zip(apexes, t)]
    S = solve_intersection(space, cons, tol)
    return h_of_set(space, S)


def h_of_set(space: SpaceSpec, S: IntersectionSet) -> float:
    if len(S) < 2 or S.is_continuum:
        return 0.0
    pts = S.points
    best = math.inf
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            best = min(best, distance(space, pts[i], pts[j]))
    return float(best)


def h_value(
    space: SpaceSpec,
    p: Point,
    apexes: Sequence[Point],
    r: float,
    t,
    tol: Optional[Tolerances] = None,
) -> float:
    """The h-function: smallest gap between distinct points of the slice set.

    Returns 0 when the set is empty, a single point, or contains a continuum.
    """
    if not r > 0:
        raise SpaceError("r must be positive")
    if tol is None:
        tol = Tolerances.for_radius(r)
    for a in apexes:
        if abs(distance(space, p, a) - r) > tol.tau_sphere:
            raise SpaceError("apex is not on the sphere S(p; r)")
    return h_raw(space, p, r, apexes, t, tol)


def sphere_points(space: SpaceSpec, center: Point, radius: float, count: int, seed: int = 0,
                  tol: Optional[Tolerances] = None) -> list[Point]:
    """Up to ``count`` distinct points of ``S(center; radius)`` found by the solver."""
    if tol is None:
        tol = Tolerances.for_radius(radius)
    tol = replace(tol, seed=seed, samples=max(count, 1))
    cons = [SphereConstraint(center, radius)]
    rng = np.random.default_rng(seed)
    step = _fd_step(space, cons)
    conv = _descend(space, cons, _candidates(space, center, radius, tol.samples, rng), tol, step)
    pts, seen = [], set()
    for c in conv:
        for y in c.coords:
            q = _point_of(space, c.sheet, y)
            key = (q.sheet, tuple(np.round(np.array(q.coords) / tol.delta_cluster).astype(int)))
            if key not in seen:
                seen.add(key)
                pts.append(q)
    return pts[:count]
