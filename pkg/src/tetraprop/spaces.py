"""Catalog of concrete metric spaces with exact intrinsic distances.

Every space is described by an immutable :class:`SpaceSpec` and points carry
canonical chart coordinates (see :class:`Point`).  Distances are evaluated by
vectorized kernels so the solver can work on thousands of candidates at once.

Charts
------
``euclidean``          n coordinates.
``sphere``             unit vector in R^3; the metric is ``rho * angle``.
``projective_plane``   unit vector in R^3 modulo sign.
``cone``               ambient vector ``y = t * u`` with ``u`` a base unit
                       vector and ``t >= 0`` the radial coordinate; the vertex
                       is ``y = 0``.  The base is a sphere or projective plane.
``cone_rp2``           vector in R^3 modulo sign (cone over the unit RP^2).
``cone_slice``         unit vector of the base; the metric is the cone metric
                       restricted to the slice ``base x {s}``.
``glued_planes``       sheet ``XY`` with ``(x, y)`` or sheet ``YZ`` with
                       ``(y, z)``, ``z >= 0``; seam points live on ``XY``.
``plane_ray``          sheet ``PLANE`` with ``(x, y)`` or ``RAY`` with ``(z,)``,
                       ``z >= 0``; the ray foot is the plane origin.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

UNIT_TOL = 1e-12

KINDS = (
    "euclidean",
    "sphere",
    "projective_plane",
    "cone",
    "cone_rp2",
    "cone_slice",
    "glued_planes",
    "plane_ray",
)


class SpaceError(ValueError):
    """Invalid space descriptor, chart or region."""


@dataclass(frozen=True)
class SpaceSpec:
    kind: str
    dim: Optional[int] = None
    rho: Optional[float] = None
    base: Optional["SpaceSpec"] = None
    s: Optional[float] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SpaceError(f"unknown space kind {self.kind!r}")
        if self.kind == "euclidean":
            if self.dim is None or self.dim < 1:
                raise SpaceError("euclidean space needs dim >= 1")
        if self.kind in ("sphere", "projective_plane"):
            if self.rho is None or not self.rho > 0:
                raise SpaceError(f"{self.kind} needs rho > 0")
        if self.kind in ("cone", "cone_slice"):
            if self.base is None or self.base.kind not in ("sphere", "projective_plane"):
                raise SpaceError(f"{self.kind} base must be a sphere or projective plane")
            if diameter(self.base) > math.pi * (1 + 1e-15):
                raise SpaceError("cone base must have diameter <= pi")
        if self.kind == "cone_slice" and (self.s is None or not self.s > 0):
            raise SpaceError("cone_slice needs s > 0")

    # --- descriptive helpers -------------------------------------------------

    @property
    def sheets(self) -> tuple[str, ...]:
        if self.kind == "glued_planes":
            return ("XY", "YZ")
        if self.kind == "plane_ray":
            return ("PLANE", "RAY")
        return ("",)

    def chart_size(self, sheet: str = "") -> int:
        """Number of stored coordinates on ``sheet``."""
        k = self.kind
        if k == "euclidean":
            return self.dim
        if k in ("glued_planes",):
            return 2
        if k == "plane_ray":
            return 2 if sheet == "PLANE" else 1
        return 3

    def natural_dim(self, sheet: str = "") -> int:
        """Topological dimension of the sheet (Hausdorff dimension of its measure)."""
        k = self.kind
        if k == "euclidean":
            return self.dim
        if k in ("sphere", "projective_plane", "cone_slice", "glued_planes"):
            return 2
        if k == "plane_ray":
            return 2 if sheet == "PLANE" else 1
        return 3

    @property
    def quotient(self) -> bool:
        """True when chart vectors ``v`` and ``-v`` name the same point."""
        if self.kind in ("projective_plane", "cone_rp2"):
            return True
        if self.kind in ("cone", "cone_slice"):
            return self.base.kind == "projective_plane"
        return False

    def to_dict(self) -> dict:
        d: dict = {"kind": self.kind}
        if self.dim is not None:
            d["dim"] = self.dim
        if self.rho is not None:
            d["rho"] = self.rho
        if self.base is not None:
            d["base"] = self.base.to_dict()
        if self.s is not None:
            d["s"] = self.s
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "SpaceSpec":
        extra = set(d) - {"kind", "dim", "rho", "base", "s"}
        if extra:
            raise SpaceError(f"unknown space fields: {sorted(extra)}")
        base = d.get("base")
        return cls(
            kind=d["kind"],
            dim=None if d.get("dim") is None else int(d["dim"]),
            rho=None if d.get("rho") is None else float(d["rho"]),
            base=None if base is None else cls.from_dict(base),
            s=None if d.get("s") is None else float(d["s"]),
        )


def euclidean(n: int) -> SpaceSpec:
    return SpaceSpec("euclidean", dim=n)


def round_sphere(rho: float = 1.0) -> SpaceSpec:
    return SpaceSpec("sphere", rho=float(rho))


def projective_plane(rho: float = 1.0) -> SpaceSpec:
    return SpaceSpec("projective_plane", rho=float(rho))


def cone(base: SpaceSpec) -> SpaceSpec:
    return SpaceSpec("cone", base=base)


def cone_rp2() -> SpaceSpec:
    return SpaceSpec("cone_rp2")


def cone_slice(base: SpaceSpec, s: float) -> SpaceSpec:
    return SpaceSpec("cone_slice", base=base, s=float(s))


def glued_planes() -> SpaceSpec:
    return SpaceSpec("glued_planes")


def plane_with_ray() -> SpaceSpec:
    return SpaceSpec("plane_ray")


def diameter(space: SpaceSpec) -> float:
    """Exact diameter; ``math.inf`` for unbounded spaces."""
    k = space.kind
    if k == "sphere":
        return math.pi * space.rho
    if k == "projective_plane":
        return math.pi * space.rho / 2
    if k == "cone_slice":
        return 2 * space.s * math.sin(min(diameter(space.base), math.pi) / 2)
    return math.inf


# --- points -------------------------------------------------------------------


@dataclass(frozen=True)
class Point:
    space: SpaceSpec
    coords: tuple
    sheet: str = ""

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.coords, dtype=float)

    def to_dict(self) -> dict:
        d = {"coords": list(self.coords)}
        if self.sheet:
            d["sheet"] = self.sheet
        return d

    @classmethod
    def from_dict(cls, space: SpaceSpec, d: dict) -> "Point":
        return point(space, d["coords"], d.get("sheet"))


def _sign_canonical(v: np.ndarray) -> np.ndarray:
    nz = np.flatnonzero(v)
    if nz.size and v[nz[0]] < 0:
        v = -v
    return v + 0.0  # drops negative zeros


def point(space: SpaceSpec, coords, sheet: Optional[str] = None) -> Point:
    """Validate and canonicalize a chart point."""
    sheets = space.sheets
    if sheet is None or sheet == "":
        sheet = sheets[0]
    if sheet not in sheets:
        raise SpaceError(f"sheet {sheet!r} not in {sheets}")
    v = np.asarray(coords, dtype=float).reshape(-1)
    if v.size != space.chart_size(sheet):
        raise SpaceError(f"expected {space.chart_size(sheet)} coordinates, got {v.size}")
    if not np.all(np.isfinite(v)):
        raise SpaceError("coordinates must be finite")
    k = space.kind
    if k in ("sphere", "projective_plane", "cone_slice"):
        if abs(np.linalg.norm(v) - 1.0) > UNIT_TOL:
            raise SpaceError("chart vector must have unit norm")
    if space.quotient:
        v = _sign_canonical(v)
    if k == "glued_planes" and sheet == "YZ":
        if v[1] < 0:
            raise SpaceError("YZ sheet requires z >= 0")
        if v[1] == 0.0:
            sheet, v = "XY", np.array([0.0, v[0]])
    if k == "plane_ray" and sheet == "RAY":
        if v[0] < 0:
            raise SpaceError("RAY sheet requires z >= 0")
        if v[0] == 0.0:
            sheet, v = "PLANE", np.zeros(2)
    return Point(space, tuple(float(c) for c in v + 0.0), sheet)


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    return v / np.linalg.norm(v)


def cone_point(space: SpaceSpec, base_vector, t: float) -> Point:
    """Point ``(u, t)`` of a cone chart from a base direction and radial coordinate."""
    if space.kind not in ("cone", "cone_rp2"):
        raise SpaceError("cone_point needs a cone space")
    if t < 0:
        raise SpaceError("radial coordinate must be >= 0")
    return point(space, t * unit(base_vector))


def vertex(space: SpaceSpec) -> Point:
    return point(space, np.zeros(3))


# --- vectorized kernels -----------------------------------------------------------


def norm(a: np.ndarray) -> np.ndarray:
    """Euclidean norm along the last axis (faster than ``np.linalg.norm`` on batches)."""
    return np.sqrt(np.einsum("...i,...i->...", a, a))


def _angle(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Angle between unit vectors along the last axis, accurate near 0 and pi."""
    c = norm(a - b)
    return 2.0 * np.arcsin(np.clip(c / 2.0, 0.0, 1.0))


def _base_dist(base: SpaceSpec, ua: np.ndarray, ub: np.ndarray) -> np.ndarray:
    ang = _angle(ua, ub)
    if base.kind == "projective_plane":
        ang = np.minimum(ang, math.pi - ang)
    return base.rho * ang


def _safe_unit(y: np.ndarray):
    t = norm(y)
    safe = np.where(t > 0, t, 1.0)
    return y / safe[..., None], t


def pair_distances(space: SpaceSpec, sa: str, A, sb: str, B) -> np.ndarray:
    """Elementwise intrinsic distance between chart arrays (last axis = coords)."""
    A = np.asarray(A, dtype=float)
    B = np.asarray(B, dtype=float)
    k = space.kind
    if k == "euclidean":
        return norm(A - B)
    if k in ("sphere", "projective_plane"):
        return _base_dist(space, A, B)
    if k == "cone":
        ua, t = _safe_unit(A)
        ub, s = _safe_unit(B)
        half = 0.5 * _base_dist(space.base, ua, ub)
        return np.sqrt((t - s) ** 2 + 4.0 * t * s * np.sin(half) ** 2)
    if k == "cone_rp2":
        return np.minimum(norm(A - B), norm(A + B))
    if k == "cone_slice":
        return 2.0 * space.s * np.sin(0.5 * _base_dist(space.base, A, B))
    if k == "glued_planes":
        if sa == sb:
            return norm(A - B)
        if sa == "YZ":
            A, B = B, A
        # A on XY (x, y), B on YZ (y', z): unfold across the seam
        return np.hypot(np.abs(A[..., 0]) + B[..., 1], A[..., 1] - B[..., 0])
    if k == "plane_ray":
        if sa == sb == "PLANE":
            return norm(A - B)
        if sa == sb == "RAY":
            return np.abs(A[..., 0] - B[..., 0])
        if sa == "RAY":
            A, B = B, A
        return norm(A) + B[..., 0]
    raise SpaceError(k)


def distance(space: SpaceSpec, a: Point, b: Point) -> float:
    if a.space != space or b.space != space:
        raise SpaceError("points belong to a different space")
    return float(pair_distances(space, a.sheet, a.array, b.sheet, b.array))


def distances_to(space: SpaceSpec, sheet: str, A, b: Point) -> np.ndarray:
    """Distances from each row of chart array ``A`` on ``sheet`` to point ``b``."""
    return pair_distances(space, sheet, A, b.sheet, b.array)


def ambient(space: SpaceSpec, sheet: str, A) -> list[np.ndarray]:
    """Embeddings of chart rows into R^m used for neighbour search.

    Quotient spaces return both representatives.  Combined with
    :func:`ambient_lipschitz`, ``d(x, y) < eps`` implies some pair of
    representatives is closer than ``eps * ambient_lipschitz`` in R^m.
    """
    A = np.asarray(A, dtype=float)
    k = space.kind
    if k == "sphere":
        out = space.rho * A
    elif k == "projective_plane":
        out = space.rho * A
    elif k == "cone_slice":
        out = space.s * A
    elif k == "glued_planes":
        z = np.zeros(A.shape[:-1])
        if sheet == "XY":
            out = np.stack([A[..., 0], A[..., 1], z], axis=-1)
        else:
            out = np.stack([z, A[..., 0], A[..., 1]], axis=-1)
    elif k == "plane_ray":
        z = np.zeros(A.shape[:-1])
        if sheet == "PLANE":
            out = np.stack([A[..., 0], A[..., 1], z], axis=-1)
        else:
            out = np.stack([z, z, A[..., 0]], axis=-1)
    else:
        out = A
    return [out, -out] if space.quotient else [out]


def ambient_lipschitz(space: SpaceSpec) -> float:
    # sin(rho x) >= rho sin(x) on [0, pi] bounds the chord/cone-metric ratio
    if space.kind == "cone":
        return 1.0 / space.base.rho
    if space.kind == "cone_slice":
        return 1.0 / space.base.rho
    return 1.0


def points_equal(a: Point, b: Point) -> bool:
    return a.space == b.space and a.sheet == b.sheet and a.coords == b.coords


# --- regions & sampling ---------------------------------------------------------------


@dataclass(frozen=True)
class Ball:
    center: Point
    radius: float


@dataclass(frozen=True)
class Box:
    """Axis-aligned box in chart coordinates of one sheet."""

    lo: tuple
    hi: tuple
    sheet: str = ""


Region = Union[Ball, Box, None]


def _uniform_units(rng: np.random.Generator, n: int) -> np.ndarray:
    g = rng.standard_normal((n, 3))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def ball_box(space: SpaceSpec, center: Point, radius: float) -> list[tuple[str, np.ndarray, np.ndarray]]:
    """Chart boxes per sheet that contain the closed ball ``B(center, radius)``."""
    k = space.kind
    c = center.array
    if k == "euclidean":
        return [("", c - radius, c + radius)]
    if k in ("sphere", "projective_plane", "cone_slice"):
        return [("", -np.ones(3), np.ones(3))]
    if k == "cone":
        R = np.linalg.norm(c) + radius
        return [("", -R * np.ones(3), R * np.ones(3))]
    if k == "cone_rp2":
        R = np.linalg.norm(c) + radius
        return [("", -R * np.ones(3), R * np.ones(3))]
    e = ambient(space, center.sheet, c)[0]
    if k == "glued_planes":
        return [
            ("XY", np.array([e[0] - radius, e[1] - radius]), np.array([e[0] + radius, e[1] + radius])),
            ("YZ", np.array([e[1] - radius, max(0.0, e[2] - radius)]), np.array([e[1] + radius, e[2] + radius])),
        ]
    if k == "plane_ray":
        return [
            ("PLANE", np.array([e[0] - radius, e[1] - radius]), np.array([e[0] + radius, e[1] + radius])),
            ("RAY", np.array([max(0.0, e[2] - radius)]), np.array([e[2] + radius])),
        ]
    raise SpaceError(k)


def _sample_box(space, sheet, lo, hi, rng, n) -> np.ndarray:
    X = rng.uniform(lo, hi, size=(n, len(lo)))
    if space.kind in ("sphere", "projective_plane", "cone_slice"):
        X = _uniform_units(rng, n)
    return X


def sample_points(space: SpaceSpec, region: Region, count: int, seed: int) -> list[Point]:
    """``count`` deterministic pseudo-random points of ``region``.

    Balls use rejection from the per-sheet chart boxes with sheets chosen in
    proportion to box area; ``None`` means the whole (compact) space.
    """
    rng = np.random.default_rng(seed)
    out: list[Point] = []
    if region is None:
        if not math.isfinite(diameter(space)):
            raise SpaceError("whole-space sampling needs a compact space")
        for v in _uniform_units(rng, count):
            out.append(point(space, v))
        return out
    if isinstance(region, Box):
        lo = np.asarray(region.lo, dtype=float)
        hi = np.asarray(region.hi, dtype=float)
        sheet = region.sheet or space.sheets[0]
        if space.kind == "glued_planes" and sheet == "YZ":
            lo = lo.copy()
            lo[1] = max(lo[1], 0.0)
        if space.kind == "plane_ray" and sheet == "RAY":
            lo = np.maximum(lo, 0.0)
        if lo.size != space.chart_size(sheet) or np.any(hi <= lo):
            raise SpaceError("empty box region")
        X = rng.uniform(lo, hi, size=(count, lo.size))
        if space.kind in ("sphere", "projective_plane", "cone_slice"):
            X /= np.linalg.norm(X, axis=1, keepdims=True)
        return [point(space, x, sheet) for x in X]
    if not region.radius > 0:
        raise SpaceError("empty ball region")
    boxes = ball_box(space, region.center, region.radius)
    # lower-dimensional sheets (the ray) carry no area and are not sampled
    top = max(space.natural_dim(s) for s, _, _ in boxes)
    vols = np.array([np.prod(hi - lo) if space.natural_dim(s) == top else 0.0 for s, lo, hi in boxes])
    weights = vols / vols.sum()
    tries = 0
    while len(out) < count:
        tries += 1
        if tries > 10_000:
            raise SpaceError("ball region appears empty")
        i = int(rng.choice(len(boxes), p=weights))
        sheet, lo, hi = boxes[i]
        x = _sample_box(space, sheet, lo, hi, rng, 1)[0]
        if space.kind == "glued_planes" and sheet == "YZ" and x[1] == 0.0:
            continue
        if distances_to(space, sheet, x, region.center) < region.radius:
            out.append(point(space, x, sheet))
            tries = 0
    return out


def sample_point(space: SpaceSpec, region: Region, seed: int, index: int = 0) -> Point:
    return sample_points(space, region, index + 1, seed)[index]
