"""Certify or refute the (C, alpha, beta) tetrahedral property at a point."""
from __future__ import annotations

import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from typing import Optional, Sequence

import numpy as np
from scipy.optimize import minimize, minimize_scalar

from .slicer import Tolerances, h_raw, sphere_points
from .spaces import Point, SpaceSpec, diameter, distance, pair_distances

HOLDS = "HOLDS"
FAILS = "FAILS"
INCONCLUSIVE = "INCONCLUSIVE"

REFINE_STARTS = 5
INCONCLUSIVE_RTOL = 1e-3
DEFAULT_MAX_N = 4
MAX_REPEAT_DRAWS = 50


class QueryError(ValueError):
    """Malformed tetrahedral query."""


@dataclass(frozen=True)
class TetraQuery:
    space: SpaceSpec
    p: Point
    r: float
    n: int
    alpha: float
    beta: float
    C: Optional[float] = None
    apexes: Optional[tuple] = None
    tol: Optional[Tolerances] = None
    max_n: int = DEFAULT_MAX_N

    def tolerances(self) -> Tolerances:
        return self.tol if self.tol is not None else Tolerances.for_radius(self.r)


@dataclass
class TetraReport:
    verdict: str
    C_best: float
    t_witness: list
    apexes_used: list
    grid_min: float
    refined_min: float
    r: float
    alpha: float
    beta: float
    n: int
    C: Optional[float] = None
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "C_best": self.C_best,
            "t_witness": list(self.t_witness),
            "apexes_used": [a.to_dict() for a in self.apexes_used],
            "grid_min": self.grid_min,
            "refined_min": self.refined_min,
            "r": self.r,
            "alpha": self.alpha,
            "beta": self.beta,
            "n": self.n,
            "C": self.C,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, space: SpaceSpec, d: dict) -> "TetraReport":
        d = dict(d)
        d["apexes_used"] = [Point.from_dict(space, a) for a in d["apexes_used"]]
        d["t_witness"] = list(d["t_witness"])
        d["notes"] = list(d["notes"])
        return cls(**d)


def validate(q: TetraQuery, need_apexes: bool = True) -> None:
    if not q.r > 0:
        raise QueryError("r must be positive")
    if q.n < 2:
        raise QueryError("n must be at least 2")
    if q.n > q.max_n:
        raise QueryError(f"n = {q.n} exceeds the cap {q.max_n}; cost grows as grid_m^(n-1)")
    if not 0 < q.alpha < q.beta < 2:
        raise QueryError("need 0 < alpha < beta < 2")
    if q.C is not None and not q.C > 0:
        raise QueryError("C must be positive")
    if q.p.space != q.space:
        raise QueryError("p belongs to a different space")
    if not need_apexes:
        return
    if q.apexes is None:
        raise QueryError("apexes missing; run search_apexes first")
    if len(q.apexes) != q.n - 1:
        raise QueryError(f"need n-1 = {q.n - 1} apexes, got {len(q.apexes)}")
    tau = q.tolerances().tau_sphere
    for a in q.apexes:
        if a.space != q.space:
            raise QueryError("apex belongs to a different space")
        if abs(distance(q.space, q.p, a) - q.r) > tau:
            raise QueryError("apex is not on the sphere S(p; r)")


class HFunction:
    """Picklable, memoized ``t -> h(p, r, t)`` for fixed apexes."""

    def __init__(self, space, p, r, apexes, tol):
        self.space, self.p, self.r = space, p, r
        self.apexes = list(apexes)
        self.tol = tol
        self.cache: dict = {}
        self.evaluations = 0

    def __call__(self, t) -> float:
        key = tuple(float(x) for x in np.atleast_1d(t))
        if key not in self.cache:
            self.evaluations += 1
            self.cache[key] = h_raw(self.space, self.p, self.r, self.apexes, key, self.tol)
        return self.cache[key]


def _h_task(args):
    space, p, r, apexes, tol, t = args
    return h_raw(space, p, r, apexes, t, tol)


def evaluate_grid(hf: HFunction, cells: Sequence[tuple], workers: int = 1) -> list[float]:
    """Evaluate h on ``cells``; parallel results equal the sequential ones."""
    if workers > 1 and len(cells) > 1:
        todo = [c for c in cells if c not in hf.cache]
        args = [(hf.space, hf.p, hf.r, hf.apexes, hf.tol, c) for c in todo]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            for c, v in zip(todo, ex.map(_h_task, args, chunksize=max(1, len(args) // (4 * workers)))):
                hf.cache[c] = v
                hf.evaluations += 1
    return [hf(c) for c in cells]


def _axis(q: TetraQuery, m: int) -> np.ndarray:
    return np.linspace(q.alpha * q.r, q.beta * q.r, m)


def _refine(hf: HFunction, axis: np.ndarray, cell: tuple, dims: int) -> tuple[float, tuple]:
    """Derivative-free local descent inside the grid neighbourhood of ``cell``."""
    m = len(axis)
    lo = [axis[max(i - 1, 0)] for i in cell]
    hi = [axis[min(i + 1, m - 1)] for i in cell]
    x0 = np.array([axis[i] for i in cell])
    width = float(axis[1] - axis[0])
    if dims == 1:
        res = minimize_scalar(lambda t: hf((t,)), bounds=(lo[0], hi[0]), method="bounded",
                              options={"xatol": 1e-5 * width, "maxiter": 25})
        best_t = (float(res.x),)
        return hf(best_t), best_t
    simplex = [x0]
    for j in range(dims):
        v = x0.copy()
        v[j] = hi[j] if hi[j] > x0[j] else lo[j]
        simplex.append(v)
    res = minimize(lambda t: hf(tuple(np.clip(t, lo, hi))), x0, method="Nelder-Mead",
                   bounds=list(zip(lo, hi)),
                   options={"initial_simplex": np.array(simplex), "maxfev": 30 * dims,
                            "xatol": 1e-4 * width, "fatol": 1e-9})
    best_t = tuple(float(v) for v in np.clip(res.x, lo, hi))
    return hf(best_t), best_t


def verdict_for(C_best: float, C: Optional[float], floor: float) -> str:
    if C is None:
        return HOLDS if C_best >= floor else FAILS
    if abs(C_best - C) < INCONCLUSIVE_RTOL * C:
        return INCONCLUSIVE
    return HOLDS if C_best >= C else FAILS


def _structural_notes(q: TetraQuery) -> list[str]:
    notes = []
    sp = q.space
    if sp.kind == "cone" and diameter(sp.base) < math.pi / 3 and not any(q.p.coords):
        if q.alpha <= 1 <= q.beta:
            notes.append("structural: base diameter < pi/3 at the cone vertex, so S(o,(x,r); r, r) "
                         "is empty and h vanishes at t = r")
    return notes


def check_tetrahedral(q: TetraQuery, workers: int = 1, grid_m: Optional[int] = None,
                      hf: Optional[HFunction] = None) -> TetraReport:
    """Estimate ``inf h / r`` over the t-cube ``[alpha r, beta r]^(n-1)``.

    Tensor grid of ``grid_m`` points per axis, followed by local descent from
    the lowest cells.  Ties are broken lexicographically in ``t``.  Passing
    ``hf`` shares its memo with later quadratures of the same h.
    """
    validate(q)
    tol = q.tolerances()
    m = grid_m or tol.grid_m
    dims = q.n - 1
    axis = _axis(q, m)
    if hf is None:
        hf = HFunction(q.space, q.p, q.r, q.apexes, tol)
    idx_cells = list(itertools.product(range(m), repeat=dims))
    cells = [tuple(float(axis[i]) for i in c) for c in idx_cells]
    # h >= 0, so a zero settles the infimum; chunks run in lexicographic
    # order, hence the first zero is also the tie-break winner
    chunk = max(m, 4 * workers)
    vals: list[float] = []
    for start in range(0, len(cells), chunk):
        vals.extend(evaluate_grid(hf, cells[start:start + chunk], workers))
        if min(vals) == 0.0:
            break
    idx_cells, cells = idx_cells[:len(vals)], cells[:len(vals)]
    order = sorted(range(len(cells)), key=lambda i: (vals[i], cells[i]))
    grid_min = float(vals[order[0]])
    best = (grid_min, cells[order[0]])
    refined: list[tuple] = []
    for i in order[:REFINE_STARTS]:
        if best[0] == 0.0:
            break
        c = idx_cells[i]
        # a neighbouring start already searched this bracket
        if any(max(abs(a - b) for a, b in zip(c, d)) <= 1 for d in refined):
            continue
        refined.append(c)
        v, t = _refine(hf, axis, c, dims)
        best = min(best, (v, t))
    refined_min, witness = best
    C_best = refined_min / q.r
    floor = tol.kappa_continuum * tol.delta_cluster / q.r
    notes = [f"h evaluations: {hf.evaluations}"] + _structural_notes(q)
    if len(cells) < m ** dims:
        notes.append(f"grid stopped after {len(cells)} of {m ** dims} cells at h = 0")
    if q.C is None:
        notes.append(f"no target C: verdict compares C_best with the resolution floor {floor:.3g}")
    return TetraReport(
        verdict=verdict_for(C_best, q.C, floor),
        C_best=float(C_best),
        t_witness=[float(x) for x in witness],
        apexes_used=list(q.apexes),
        grid_min=grid_min,
        refined_min=float(refined_min),
        r=q.r,
        alpha=q.alpha,
        beta=q.beta,
        n=q.n,
        C=q.C,
        notes=notes,
    )


def legacy_interval(beta_legacy: float) -> tuple[float, float]:
    if not 0 < beta_legacy < 1:
        raise QueryError("legacy beta must lie in (0, 1)")
    return 1.0 - beta_legacy, 1.0 + beta_legacy


def check_legacy(q: TetraQuery, beta_legacy: float, workers: int = 1,
                 hf: Optional[HFunction] = None) -> TetraReport:
    """The (C, beta) property as the (C, 1 - beta, 1 + beta) property."""
    a, b = legacy_interval(beta_legacy)
    rep = check_tetrahedral(replace(q, alpha=a, beta=b), workers=workers, hf=hf)
    rep.notes.append(f"legacy beta = {beta_legacy!r}")
    return rep


def search_apexes(
    space: SpaceSpec,
    p: Point,
    r: float,
    n: int,
    alpha: float,
    beta: float,
    budget: int = 500,
    seed: int = 0,
    C: Optional[float] = None,
    tol: Optional[Tolerances] = None,
    pool_size: int = 256,
    coarse_m: int = 5,
) -> tuple[list, TetraReport]:
    """Seeded search for apexes maximizing C_best, then a full check.

    ``budget`` bounds the number of h evaluations spent scoring candidate
    tuples on a coarse ``coarse_m`` grid: random restarts use half of it,
    coordinate-wise moves to nearby sphere points use the rest.
    """
    if budget < 1:
        raise QueryError("budget must be at least 1")
    q0 = TetraQuery(space, p, r, n, alpha, beta, C=C, tol=tol)
    validate(q0, need_apexes=False)
    tol = q0.tolerances()
    pool = sphere_points(space, p, r, pool_size, seed=seed, tol=tol)
    pool = [a for a in pool if abs(distance(space, p, a) - r) <= tol.tau_sphere]
    dims = n - 1
    if not pool:
        rep = TetraReport(FAILS, 0.0, [], [], 0.0, 0.0, r, alpha, beta, n, C,
                          notes=["S(p; r) is empty within the solver's reach"])
        return [], rep

    rng = np.random.default_rng(seed)
    axis = np.linspace(alpha * r, beta * r, coarse_m)
    coarse = list(itertools.product(axis, repeat=dims))
    spent = 0
    scores: dict = {}

    def score(ix: tuple) -> float:
        nonlocal spent
        key = tuple(sorted(ix))
        if key not in scores:
            hf = HFunction(space, p, r, [pool[i] for i in key], tol)
            scores[key] = min(hf(t) for t in coarse) / r
            spent += len(coarse)
        return scores[key]

    def draw() -> tuple:
        k = min(dims, len(pool))
        ix = list(rng.choice(len(pool), size=k, replace=False))
        while len(ix) < dims:
            ix.append(int(rng.integers(len(pool))))
        return tuple(int(i) for i in ix)

    best_ix = draw()
    best = score(best_ix)
    repeats = 0  # cached draws cost nothing, so a tiny pool would never exhaust the budget
    while spent + len(coarse) <= budget // 2 and repeats < MAX_REPEAT_DRAWS:
        ix = draw()
        if tuple(sorted(ix)) in scores:
            repeats += 1
            continue
        s = score(ix)
        if s > best:
            best, best_ix = s, ix

    emb = np.array([a.array for a in pool]) if len({a.sheet for a in pool}) == 1 else None
    stalled = 0
    while spent + len(coarse) <= budget and stalled < 4 * dims:
        j = int(rng.integers(dims))
        cur = pool[best_ix[j]]
        if emb is not None:
            d = pair_distances(space, cur.sheet, emb, cur.sheet, cur.array)
            near = np.argsort(d, kind="stable")[1:9]
        else:
            near = rng.choice(len(pool), size=min(8, len(pool)), replace=False)
        cand = list(best_ix)
        cand[j] = int(near[int(rng.integers(len(near)))])
        cand = tuple(cand)
        if tuple(sorted(cand)) in scores:
            stalled += 1
            continue
        s = score(cand)
        if s > best:
            best, best_ix, stalled = s, cand, 0
        else:
            stalled += 1

    apexes = [pool[i] for i in sorted(best_ix)]
    rep = check_tetrahedral(replace(q0, apexes=tuple(apexes)))
    rep.notes.append(f"apex search: pool {len(pool)}, {len(scores)} tuples, {spent} coarse h evaluations")
    return apexes, rep
