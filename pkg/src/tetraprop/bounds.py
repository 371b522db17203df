"""Packing counts and an explicit diameter bound implied by a uniform volume lower bound."""
from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import numpy as np

from .spaces import Region, SpaceSpec, pair_distances, sample_points

DIAMETER_DERIVATION = (
    "Take a minimizing geodesic of length L between two points and mark points at spacing r0. "
    "The floor(L/r0)+1 marks have pairwise distance >= r0, so the open balls of radius r0/2 around "
    "them are disjoint, and each has volume >= C(beta-alpha)^(n-1)(r0/2)^n. Total volume V0 caps the "
    "count at N = V0/(C(beta-alpha)^(n-1)(r0/2)^n), hence L < r0 (N + 1) =: D0. "
    "The explicit constant is a choice made by this toolkit."
)


class BoundsError(ValueError):
    pass


def _frac(x) -> Fraction:
    # decimal-string conversion keeps inputs like 0.9 and 1.1 exact, so 10/0.04 is 250
    return Fraction(repr(float(x))) if not isinstance(x, (int, Fraction)) else Fraction(x)


def _check(V0, C, alpha, beta, n, length):
    if not (V0 > 0 and C > 0 and length > 0):
        raise BoundsError("V0, C and the length scale must be positive")
    if not 0 < alpha < beta < 2:
        raise BoundsError("need 0 < alpha < beta < 2")
    if int(n) != n or n < 1:
        raise BoundsError("n must be a positive integer")


def ball_lower_volume(C, alpha, beta, n: int, radius) -> Fraction:
    return _frac(C) * (_frac(beta) - _frac(alpha)) ** (int(n) - 1) * _frac(radius) ** int(n)


def packing_bound(V0: float, C: float, alpha: float, beta: float, n: int, eps: float) -> int:
    """Maximal number of disjoint ``eps``-balls in a space of total volume ``V0``."""
    _check(V0, C, alpha, beta, n, eps)
    return math.floor(_frac(V0) / ball_lower_volume(C, alpha, beta, n, eps))


def diameter_bound(V0: float, C: float, alpha: float, beta: float, n: int, r0: float) -> float:
    """``D0 = r0 (V0 / (C (beta-alpha)^(n-1) (r0/2)^n) + 1)``; see ``DIAMETER_DERIVATION``."""
    _check(V0, C, alpha, beta, n, r0)
    r0f = _frac(r0)
    D = r0f * (_frac(V0) / ball_lower_volume(C, alpha, beta, n, r0f / 2) + 1)
    return float(D)


def greedy_packing(space: SpaceSpec, region: Region, eps: float, candidate_count: int = 2000,
                   seed: int = 0) -> int:
    """Size of a greedy set of sampled points with pairwise distance >= 2 eps.

    Candidates are visited in sample order, so the count depends only on
    ``seed``.
    """
    if not eps > 0:
        raise BoundsError("eps must be positive")
    cands = sample_points(space, region, candidate_count, seed)
    chosen: dict[str, list[np.ndarray]] = {}
    for c in cands:
        x = c.array
        ok = True
        for sheet, pts in chosen.items():
            if pts and np.any(pair_distances(space, c.sheet, x[None, :], sheet, np.asarray(pts)) < 2 * eps):
                ok = False
                break
        if ok:
            chosen.setdefault(c.sheet, []).append(x)
    return sum(len(v) for v in chosen.values())


def bounds_report(V0: float, C: float, alpha: float, beta: float, n: int,
                  eps: Optional[float] = None, r0: Optional[float] = None) -> dict:
    out: dict = {"V0": V0, "C": C, "alpha": alpha, "beta": beta, "n": n}
    if eps is not None:
        out["eps"] = eps
        out["packing_bound"] = packing_bound(V0, C, alpha, beta, n, eps)
    if r0 is not None:
        out["r0"] = r0
        out["diameter_bound"] = diameter_bound(V0, C, alpha, beta, n, r0)
        out["diameter_derivation"] = DIAMETER_DERIVATION
    return out
