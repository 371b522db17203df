"""Ball volumes on catalog spaces and the volume lower bound."""
from __future__ import annotations

import hashlib
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence

import numpy as np

from .checker import HOLDS, FAILS, TetraReport
from .spaces import Point, SpaceSpec, _uniform_units, ball_box, distances_to, point

BATCH = 8192
DEFAULT_SAMPLES = 100_000


class VolumeError(ValueError):
    """Volume method unavailable or precondition not met."""


def _cap(rho: float, angle_len: float) -> float:
    """Area of a geodesic cap of radius ``angle_len`` on the round sphere of radius ``rho``."""
    a = min(angle_len, math.pi * rho)
    return 2 * math.pi * rho * rho * (1 - math.cos(a / rho))


def _segment(r: float, d: float) -> float:
    """Area of the part of a radius-``r`` disk beyond a chord at distance ``d`` from its center."""
    if d >= r:
        return 0.0
    return r * r * math.acos(d / r) - d * math.sqrt(r * r - d * d)


def _base_area(base: SpaceSpec) -> float:
    a = 4 * math.pi * base.rho ** 2
    return a / 2 if base.kind == "projective_plane" else a


def _touches_ray(space: SpaceSpec, p: Point, r: float) -> bool:
    if p.sheet == "RAY":
        return True
    return float(np.hypot(*p.coords)) < r


def analytic_volume(space: SpaceSpec, p: Point, r: float) -> float:
    k = space.kind
    if k == "euclidean":
        n = space.dim
        return math.pi ** (n / 2) / math.gamma(n / 2 + 1) * r ** n
    if k == "sphere":
        return _cap(space.rho, r)
    if k == "projective_plane":
        # below the diameter a ball lifts to one cap of the covering sphere
        return _cap(space.rho, min(r, math.pi * space.rho / 2))
    if k == "cone_slice":
        if r >= 2 * space.s:
            return space.s ** 2 * _base_area(space.base)
        d_b = 2 * math.asin(r / (2 * space.s))
        scale = space.s ** 2
        if space.base.kind == "sphere":
            return scale * _cap(space.base.rho, d_b)
        return scale * _cap(space.base.rho, min(d_b, math.pi * space.base.rho / 2))
    if k in ("cone", "cone_rp2"):
        at_vertex = not np.any(p.array)
        if k == "cone" and space.base.kind == "sphere" and space.base.rho == 1.0:
            return 4 * math.pi * r ** 3 / 3
        if at_vertex:
            area = 2 * math.pi if k == "cone_rp2" else _base_area(space.base)
            return area * r ** 3 / 3
        raise VolumeError("analytic cone volume only at the vertex")
    if k == "glued_planes":
        d = abs(p.coords[0]) if p.sheet == "XY" else p.coords[1]
        return math.pi * r * r + _segment(r, d)
    if k == "plane_ray":
        if _touches_ray(space, p, r):
            raise VolumeError("ball meets the ray: sheets of dimension 2 and 1, no single measure")
        return math.pi * r * r
    raise VolumeError(f"no analytic volume for {k}")


def _sheet_domains(space: SpaceSpec, p: Point, r: float):
    """(sheet, lo, hi, measure) per sampled sheet; ``lo is None`` means the whole sphere chart."""
    k = space.kind
    if k in ("sphere", "projective_plane"):
        return [("", None, None, _base_area(space))]
    if k == "cone_slice":
        return [("", None, None, space.s ** 2 * _base_area(space.base))]
    out = []
    for sheet, lo, hi in ball_box(space, p, r):
        if space.natural_dim(sheet) < max(space.natural_dim(s) for s in space.sheets):
            continue
        m = float(np.prod(hi - lo))
        if k == "cone":
            m *= space.base.rho ** 2
            if space.base.kind == "projective_plane":
                m /= 2
        elif k == "cone_rp2":
            m /= 2
        out.append((sheet, lo, hi, m))
    return out


def _batch_hits(args) -> int:
    space, p, r, sheet, lo, hi, seed_words, n = args
    rng = np.random.default_rng(seed_words)
    if lo is None:
        X = _uniform_units(rng, n)
    else:
        X = rng.uniform(lo, hi, size=(n, len(lo)))
    return int(np.count_nonzero(distances_to(space, sheet, X, p) < r))


def default_seed(space: SpaceSpec, p: Point, r: float) -> int:
    """Seed derived from ``(space, p, r)`` so repeated calls agree."""
    key = json.dumps([space.to_dict(), p.to_dict(), repr(float(r))], sort_keys=True)
    return int.from_bytes(hashlib.sha256(key.encode()).digest()[:8], "little")


def monte_carlo_volume(space: SpaceSpec, p: Point, r: float, samples: int = DEFAULT_SAMPLES,
                       seed: Optional[int] = None, workers: int = 1) -> tuple[float, float]:
    """Rejection estimate per sheet. Batches carry their own seeds, so the
    result does not depend on ``workers``; hit counts are integers and the
    per-sheet totals are combined with ``math.fsum``."""
    if space.kind == "plane_ray" and _touches_ray(space, p, r):
        raise VolumeError("ball meets the ray: sheets of dimension 2 and 1, no single measure")
    if samples < 1:
        raise VolumeError("samples must be positive")
    base_seed = default_seed(space, p, r) if seed is None else int(seed)
    domains = _sheet_domains(space, p, r)
    per_sheet = max(1, samples // len(domains))
    tasks, owners = [], []
    for j, (sheet, lo, hi, _) in enumerate(domains):
        for b, start in enumerate(range(0, per_sheet, BATCH)):
            n = min(BATCH, per_sheet - start)
            tasks.append((space, p, r, sheet, lo, hi, [base_seed, j, b], n))
            owners.append(j)
    if workers > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as ex:
            hits = list(ex.map(_batch_hits, tasks))
    else:
        hits = [_batch_hits(t) for t in tasks]
    parts, variances = [], []
    for j, (_, _, _, measure) in enumerate(domains):
        h = sum(c for c, o in zip(hits, owners) if o == j)
        frac = h / per_sheet
        parts.append(measure * frac)
        variances.append(measure ** 2 * frac * (1 - frac) / per_sheet)
    return math.fsum(parts), math.sqrt(math.fsum(variances))


def ball_volume(space: SpaceSpec, p: Point, r: float, method: str = "analytic",
                samples: int = DEFAULT_SAMPLES, seed: Optional[int] = None,
                workers: int = 1) -> tuple[float, float]:
    """Measure of ``B_r(p)`` in the space's natural dimension, with its standard error."""
    if not r > 0:
        raise VolumeError("r must be positive")
    p = point(space, p.coords, p.sheet)
    if method == "analytic":
        return analytic_volume(space, p, r), 0.0
    if method == "monte_carlo":
        return monte_carlo_volume(space, p, r, samples, seed, workers)
    raise VolumeError(f"unknown method {method!r}")


@dataclass
class VolumeReport:
    verdict: str
    value: float
    stderr: float
    bound: float
    slack: float
    r: float
    method: str
    notes: list = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "verdict": self.verdict,
            "value": self.value,
            "stderr": self.stderr,
            "bound": self.bound,
            "slack": self.slack,
            "r": self.r,
            "method": self.method,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "VolumeReport":
        return cls(**{**d, "notes": list(d.get("notes", []))})


def _space_dim(space: SpaceSpec) -> int:
    return max(space.natural_dim(s) for s in space.sheets)


def verify_volume_bound(space: SpaceSpec, p: Point, r: float, C: float, alpha: float, beta: float,
                        method: str = "analytic", samples: int = DEFAULT_SAMPLES,
                        seed: Optional[int] = None, certificate: Optional[TetraReport] = None,
                        workers: int = 1) -> VolumeReport:
    """Compare ``Vol(B_r(p))`` with ``C (beta-alpha)^(n-1) r^n``.

    When a checker ``certificate`` is passed it must be a HOLDS report for
    the same constants; anything else is rejected since no bound follows.
    """
    if not (C > 0 and 0 < alpha < beta < 2 and r > 0):
        raise VolumeError("need C > 0, 0 < alpha < beta < 2 and r > 0")
    if certificate is not None:
        if certificate.verdict != HOLDS:
            raise VolumeError(f"no certificate: checker verdict {certificate.verdict}")
        if (certificate.alpha, certificate.beta) != (alpha, beta):
            raise VolumeError("certificate is for a different interval")
        if certificate.C_best < C:
            raise VolumeError("certificate C_best below the requested C")
    n = _space_dim(space)
    value, err = ball_volume(space, p, r, method, samples, seed, workers)
    bound = C * (beta - alpha) ** (n - 1) * r ** n
    ok = value + 3 * err >= bound
    notes = [] if ok else [
        "volume below the bound: either the certificate or the volume computation is wrong",
        f"deficit {bound - value:.6g} with stderr {err:.3g}",
    ]
    return VolumeReport(HOLDS if ok else FAILS, value, err, bound, value / bound, r, method, notes)


def volume_sweep(space: SpaceSpec, p: Point, radii: Sequence[float], C: float, alpha: float,
                 beta: float, method: str = "analytic", samples: int = DEFAULT_SAMPLES,
                 seed: Optional[int] = None, workers: int = 1) -> list[dict]:
    """Rows ``r, volume, stderr, bound, slack`` for an r-sweep."""
    rows = []
    for r in radii:
        rep = verify_volume_bound(space, p, r, C, alpha, beta, method, samples, seed, workers=workers)
        rows.append({"r": r, "volume": rep.value, "stderr": rep.stderr,
                     "bound": rep.bound, "slack": rep.slack})
    return rows
