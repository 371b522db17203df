"""Command-line interface: check, sweep, volume, bounds, examples, hmap."""
from __future__ import annotations

import argparse
import csv
import itertools
import json
import math
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import bounds as bnd
from . import examples as exm
from .checker import (
    FAILS,
    HOLDS,
    INCONCLUSIVE,
    HFunction,
    QueryError,
    TetraQuery,
    TetraReport,
    check_legacy,
    check_tetrahedral,
    evaluate_grid,
    search_apexes,
)
from .slicer import Tolerances
from .spaces import (
    Point,
    SpaceError,
    SpaceSpec,
    cone,
    cone_point,
    cone_rp2,
    cone_slice,
    euclidean,
    glued_planes,
    plane_with_ray,
    point,
    projective_plane,
    round_sphere,
)
from .volume import VolumeError, ball_volume, verify_volume_bound

EXIT = {HOLDS: 0, FAILS: 1, INCONCLUSIVE: 2}
EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: error: {message}\n")


# --- parsing helpers ---------------------------------------------------------------


def parse_space(name, rho: Optional[float] = None, base: str = "sphere", s: Optional[float] = None) -> SpaceSpec:
    if isinstance(name, dict):
        return SpaceSpec.from_dict(name)
    if name is None:
        raise UsageError("--space is required")
    if name.startswith("euclidean"):
        dim = name[len("euclidean"):] or "2"
        if not dim.isdigit():
            raise UsageError(f"bad euclidean dimension in {name!r}")
        return euclidean(int(dim))
    rho = 1.0 if rho is None else rho
    mk_base = {"sphere": round_sphere, "rp2": projective_plane}.get(base)
    if mk_base is None:
        raise UsageError("--base must be sphere or rp2")
    table = {
        "sphere": lambda: round_sphere(rho),
        "rp2": lambda: projective_plane(rho),
        "cone": lambda: cone(mk_base(rho)),
        "cone_rp2": cone_rp2,
        "cone_slice": lambda: cone_slice(mk_base(rho), 1.0 if s is None else s),
        "glued_planes": glued_planes,
        "plane_ray": plane_with_ray,
    }
    if name not in table:
        raise UsageError(f"unknown space {name!r}")
    return table[name]()


def parse_point(space: SpaceSpec, text) -> Point:
    """``"x,y[@SHEET]"`` or a JSON-style dict/list."""
    if isinstance(text, dict):
        return Point.from_dict(space, text)
    if isinstance(text, (list, tuple)):
        return point(space, text)
    coords, _, sheet = str(text).partition("@")
    try:
        vals = [float(v) for v in coords.split(",") if v.strip()]
    except ValueError as e:
        raise UsageError(f"bad point {text!r}") from e
    return point(space, vals, sheet or None)


def parse_range(text: str) -> list[float]:
    """``lo:hi:count`` (inclusive linspace) or a comma list."""
    if ":" in text:
        parts = text.split(":")
        if len(parts) != 3:
            raise UsageError(f"bad range {text!r}; use lo:hi:count")
        lo, hi, cnt = float(parts[0]), float(parts[1]), int(parts[2])
        if cnt < 1:
            return []
        return [float(v) for v in np.linspace(lo, hi, cnt)]
    return [float(v) for v in text.split(",") if v.strip()]


def default_apexes(space: SpaceSpec, p: Point, r: float, n: int) -> tuple:
    """Canonical apexes on ``S(p; r)`` for the catalog spaces."""
    k = space.kind
    c = p.array
    if k == "euclidean":
        if n - 1 > space.dim:
            raise UsageError("more apexes than dimensions")
        return tuple(point(space, c + r * np.eye(space.dim)[i]) for i in range(n - 1))
    if n != 2 and k not in ("cone", "cone_rp2"):
        raise UsageError(f"default apexes on {k} need n = 2; pass --apex")
    if k == "glued_planes":
        if p.sheet == "XY":
            return (point(space, (c[0] + math.copysign(r, c[0] if c[0] else 1.0), c[1])),)
        return (point(space, (c[0], c[1] + r), "YZ"),)
    if k == "plane_ray":
        if p.sheet == "RAY":
            if r <= c[0]:
                return (point(space, (c[0] + r,), "RAY"),)
            return (point(space, (r - c[0], 0.0)),)
        nrm = float(np.hypot(*c))
        u = c / nrm if nrm else np.array([1.0, 0.0])
        return (point(space, c + r * u),)
    if k in ("sphere", "projective_plane", "cone_slice"):
        base = space if k != "cone_slice" else space.base
        if k == "cone_slice":
            if r > 2 * space.s:
                raise UsageError("r exceeds the slice diameter")
            d = 2 * math.asin(r / (2 * space.s))
        else:
            d = r
        ang = d / base.rho
        w = np.cross(c, [1.0, 0, 0])
        if np.linalg.norm(w) < 1e-8:
            w = np.cross(c, [0, 1.0, 0])
        w /= np.linalg.norm(w)
        return (point(space, math.cos(ang) * c + math.sin(ang) * w),)
    if k in ("cone", "cone_rp2"):
        if np.any(c):
            raise UsageError("default cone apexes only at the vertex; pass --apex or --search")
        return tuple(cone_point(space, np.eye(3)[i], r) for i in range(n - 1))
    raise UsageError(f"no default apexes for {k}")


def _dump(doc) -> str:
    return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)


def _write_csv(rows: list[dict], fields: Sequence[str], out) -> None:
    w = csv.DictWriter(out, fieldnames=list(fields), lineterminator="\n")
    w.writeheader()
    for row in rows:
        w.writerow({k: (repr(v) if isinstance(v, float) else v) for k, v in row.items()})


# --- shared argument groups ---------------------------------------------------------


def _space_args(sp):
    sp.add_argument("--space", help="euclideanN, sphere, rp2, cone, cone_rp2, cone_slice, glued_planes, plane_ray")
    sp.add_argument("--rho", type=float, help="base radius for sphere, rp2, cone and cone_slice")
    sp.add_argument("--base", default="sphere", help="cone base: sphere or rp2")
    sp.add_argument("--s", type=float, help="slice height for cone_slice")
    sp.add_argument("--p", help="point as x,y[,z][@SHEET]")
    sp.add_argument("--r", type=float)


def _query_args(sp):
    _space_args(sp)
    sp.add_argument("--n", type=int, help="dimension (default: the space's natural dimension)")
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--legacy-beta", type=float, help="check the (C, beta) property instead")
    sp.add_argument("--C", type=float)
    sp.add_argument("--apex", action="append", help="apex point, repeat n-1 times")
    sp.add_argument("--search", action="store_true", help="search apexes instead of using defaults")
    sp.add_argument("--budget", type=int, default=500)
    sp.add_argument("--grid-m", type=int)


_GLOBALS = ("seed", "workers", "fmt")


def _global_args(sp, top: bool):
    # subcommands repeat the global flags so they may follow the command name;
    # SUPPRESS keeps an absent flag from clobbering the top-level value
    d = (lambda v: v) if top else (lambda v: argparse.SUPPRESS)
    sp.add_argument("--config", default=d(None), help="JSON file with option defaults")
    sp.add_argument("--seed", type=int, default=d(None), help="seed (fallback: TETRAPROP_SEED, then 0)")
    sp.add_argument("--workers", type=int, default=d(1))
    fmt = sp.add_mutually_exclusive_group()
    fmt.add_argument("--json", dest="fmt", action="store_const", const="json", default=d(None))
    fmt.add_argument("--text", dest="fmt", action="store_const", const="text", default=d(None))


def build_parser() -> _Parser:
    ap = _Parser(prog="tetraprop", description="Tetrahedral-property toolkit for catalog metric spaces.")
    _global_args(ap, top=True)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("check", help="certify or refute the property at one point")
    _query_args(sp)

    sp = sub.add_parser("sweep", help="grid of checks, CSV out")
    _query_args(sp)
    sp.add_argument("--grid", action="append", default=[],
                    help="NAME=lo:hi:count with NAME in r, alpha, beta, legacy_beta, rho, s, p0, p1, p2")

    sp = sub.add_parser("volume", help="ball volume and the volume bound")
    _space_args(sp)
    sp.add_argument("--r-grid", help="lo:hi:count sweep of r (CSV out)")
    sp.add_argument("--method", default="analytic", choices=["analytic", "monte_carlo"])
    sp.add_argument("--samples", type=int, default=100_000)
    sp.add_argument("--C", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)

    sp = sub.add_parser("bounds", help="packing count and diameter bound")
    sp.add_argument("--V0", type=float)
    sp.add_argument("--C", type=float)
    sp.add_argument("--alpha", type=float)
    sp.add_argument("--beta", type=float)
    sp.add_argument("--n", type=int)
    sp.add_argument("--eps", type=float)
    sp.add_argument("--r0", type=float)

    sp = sub.add_parser("examples", help="reproduce the catalog examples")
    sp.add_argument("--id", action="append", choices=list(exm.EXAMPLE_IDS))
    sp.add_argument("--out", help="directory for per-example JSON reports")

    sp = sub.add_parser("hmap", help="h on the t-grid as CSV")
    _query_args(sp)
    sp.add_argument("--m", type=int, default=17, help="points per t-axis")
    for sp in sub.choices.values():
        _global_args(sp, top=False)
    return ap


def _load_config(path: Optional[str]) -> dict:
    if not path:
        return {}
    try:
        with open(path, encoding="utf-8") as fh:
            cfg = json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise UsageError(f"cannot read config {path}: {e}") from e
    if not isinstance(cfg, dict):
        raise UsageError("config must be a JSON object")
    return {k.replace("-", "_"): v for k, v in cfg.items()}


def parse_args(argv: Sequence[str]) -> argparse.Namespace:
    ap = build_parser()
    pre = _Parser(add_help=False)
    pre.add_argument("--config")
    known, _ = pre.parse_known_args(argv)
    cfg = _load_config(known.config)
    if "format" in cfg:
        cfg["fmt"] = cfg.pop("format")
    if cfg:
        # config values become defaults; explicit flags still win
        ap.set_defaults(**{k: v for k, v in cfg.items() if k in _GLOBALS})
        local = {k: v for k, v in cfg.items() if k not in _GLOBALS}
        for action in ap._subparsers._group_actions:
            for sp in action.choices.values():
                sp.set_defaults(**local)
    args = ap.parse_args(argv)
    if args.command is None:
        ap.print_usage(sys.stderr)
        raise UsageError("a command is required")
    if args.seed is None:
        env = os.environ.get("TETRAPROP_SEED")
        try:
            args.seed = int(env) if env else 0
        except ValueError as e:
            raise UsageError("TETRAPROP_SEED must be an integer") from e
    args.fmt = args.fmt or "text"
    return args


# --- commands ------------------------------------------------------------------------


def _need(args, *names):
    missing = [f"--{n.replace('_', '-')}" for n in names if getattr(args, n, None) is None]
    if missing:
        raise UsageError(f"missing {', '.join(missing)}")


def _build_query(args, overrides: Optional[dict] = None) -> tuple[TetraQuery, Optional[float]]:
    o = overrides or {}
    space = parse_space(args.space, o.get("rho", args.rho), args.base, o.get("s", args.s))
    _need(args, "p")
    r = o.get("r", args.r)
    if r is None:
        raise UsageError("missing --r")
    p = parse_point(space, args.p)
    coords = list(p.coords)
    for i in range(len(coords)):
        if f"p{i}" in o:
            coords[i] = o[f"p{i}"]
    p = point(space, coords, p.sheet)
    n = args.n or max(space.natural_dim(s_) for s_ in space.sheets)
    legacy = o.get("legacy_beta", args.legacy_beta)
    if legacy is not None:
        alpha, beta = 0.5, 1.5  # replaced by the legacy interval
    else:
        alpha, beta = o.get("alpha", args.alpha), o.get("beta", args.beta)
        if alpha is None or beta is None:
            raise UsageError("need --alpha and --beta, or --legacy-beta")
    tol = Tolerances.for_radius(r, seed=args.seed)
    if args.grid_m:
        tol = replace(tol, grid_m=args.grid_m)
    apexes = None
    if args.apex:
        apexes = tuple(parse_point(space, a) for a in args.apex)
    elif not args.search:
        apexes = default_apexes(space, p, r, n)
    return TetraQuery(space, p, r, n, alpha, beta, C=args.C, apexes=apexes, tol=tol), legacy


def _run_query(args, q: TetraQuery, legacy: Optional[float], workers: int) -> TetraReport:
    if q.apexes is None:
        a, b = (1 - legacy, 1 + legacy) if legacy is not None else (q.alpha, q.beta)
        _, rep = search_apexes(q.space, q.p, q.r, q.n, a, b, budget=args.budget, seed=args.seed, C=q.C,
                               tol=q.tol)
        if legacy is not None:
            rep.notes.append(f"legacy beta = {legacy!r}")
        return rep
    if legacy is not None:
        return check_legacy(q, legacy, workers=workers)
    return check_tetrahedral(q, workers=workers)


def cmd_check(args, out) -> int:
    q, legacy = _build_query(args)
    rep = _run_query(args, q, legacy, args.workers)
    doc = {"space": q.space.to_dict(), "p": q.p.to_dict(), "report": rep.to_dict()}
    if args.fmt == "text":
        out.write(f"{rep.verdict} C_best={rep.C_best:.6g} t_witness={rep.t_witness}\n")
    out.write(_dump(doc) + "\n")
    return EXIT[rep.verdict]


_SWEEP_NAMES = ("r", "alpha", "beta", "legacy_beta", "rho", "s", "p0", "p1", "p2")


def _sweep_cell(job):
    args, cell = job
    try:
        q, legacy = _build_query(args, cell)
        rep = _run_query(args, q, legacy, 1)
        return {**cell, "C_best": rep.C_best, "verdict": rep.verdict}
    except (QueryError, SpaceError, UsageError) as e:
        return {**cell, "C_best": float("nan"), "verdict": f"INVALID: {e}"}


def cmd_sweep(args, out) -> int:
    axes = []
    for g in args.grid:
        name, _, rng = g.partition("=")
        if name not in _SWEEP_NAMES or not rng:
            raise UsageError(f"bad --grid {g!r}")
        axes.append((name, parse_range(rng)))
    if not axes or any(not vals for _, vals in axes):
        raise UsageError("empty sweep grid")
    names = [a for a, _ in axes]
    cells = [dict(zip(names, combo)) for combo in itertools.product(*(v for _, v in axes))]
    jobs = [(args, c) for c in cells]
    if args.workers > 1:
        with ProcessPoolExecutor(max_workers=args.workers) as ex:
            rows = list(ex.map(_sweep_cell, jobs))
    else:
        rows = [_sweep_cell(j) for j in jobs]
    _write_csv(rows, names + ["C_best", "verdict"], out)
    return 0


def cmd_volume(args, out) -> int:
    space = parse_space(args.space, args.rho, args.base, args.s)
    _need(args, "p")
    p = parse_point(space, args.p)
    bound_args = (args.C, args.alpha, args.beta)
    with_bound = all(v is not None for v in bound_args)
    if args.r_grid:
        rows = []
        for r in parse_range(args.r_grid):
            v, e = ball_volume(space, p, r, args.method, args.samples, None, args.workers)
            row = {"r": r, "volume": v, "stderr": e, "bound": "", "slack": ""}
            if with_bound:
                rep = verify_volume_bound(space, p, r, *bound_args, method=args.method,
                                          samples=args.samples, workers=args.workers)
                row.update(bound=rep.bound, slack=rep.slack)
            rows.append(row)
        _write_csv(rows, ["r", "volume", "stderr", "bound", "slack"], out)
        return 0
    _need(args, "r")
    if with_bound:
        rep = verify_volume_bound(space, p, args.r, *bound_args, method=args.method, samples=args.samples,
                                  workers=args.workers)
        doc = rep.to_dict()
        code = EXIT[rep.verdict]
    else:
        v, e = ball_volume(space, p, args.r, args.method, args.samples, None, args.workers)
        doc = {"r": args.r, "value": v, "stderr": e, "method": args.method}
        code = 0
    if args.fmt == "text":
        out.write(f"volume={doc['value']:.6g} stderr={doc['stderr']:.3g}\n")
    out.write(_dump(doc) + "\n")
    return code


def cmd_bounds(args, out) -> int:
    _need(args, "V0", "C", "alpha", "beta", "n")
    if args.eps is None and args.r0 is None:
        raise UsageError("need --eps and/or --r0")
    doc = bnd.bounds_report(args.V0, args.C, args.alpha, args.beta, args.n, args.eps, args.r0)
    if args.fmt == "text":
        if "packing_bound" in doc:
            out.write(f"packing_bound {doc['packing_bound']}\n")
        if "diameter_bound" in doc:
            out.write(f"diameter_bound {doc['diameter_bound']!r}\n")
        return 0
    out.write(_dump(doc) + "\n")
    return 0


def cmd_examples(args, out) -> int:
    ids = args.id or list(exm.EXAMPLE_IDS)
    reports = exm.run_all(args.seed, ids)
    if args.out:
        d = Path(args.out)
        d.mkdir(parents=True, exist_ok=True)
        for rep in reports:
            (d / f"{rep.example_id}.json").write_text(rep.to_json() + "\n", encoding="utf-8")
    if args.fmt == "json":
        out.write(exm.suite_json(reports) + "\n")
    else:
        out.write("\n".join(r.to_text() for r in reports) + "\n")
    return 0 if all(r.overall for r in reports) else 1


def cmd_hmap(args, out) -> int:
    q, legacy = _build_query(args)
    if legacy is not None:
        q = replace(q, alpha=1 - legacy, beta=1 + legacy)
    if q.apexes is None:
        raise UsageError("hmap needs --apex or default apexes")
    if args.m < 2:
        raise UsageError("--m must be at least 2")
    hf = HFunction(q.space, q.p, q.r, q.apexes, q.tolerances())
    axis = np.linspace(q.alpha * q.r, q.beta * q.r, args.m)
    cells = [tuple(float(v) for v in c) for c in itertools.product(axis, repeat=q.n - 1)]
    vals = evaluate_grid(hf, cells, args.workers)
    names = [f"t{i + 1}" for i in range(q.n - 1)]
    rows = [{**dict(zip(names, c)), "h": v} for c, v in zip(cells, vals)]
    _write_csv(rows, names + ["h"], out)
    return 0


COMMANDS = {
    "check": cmd_check,
    "sweep": cmd_sweep,
    "volume": cmd_volume,
    "bounds": cmd_bounds,
    "examples": cmd_examples,
    "hmap": cmd_hmap,
}


def main(argv: Optional[Sequence[str]] = None, out=None) -> int:
    out = out or sys.stdout
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = parse_args(argv)
        return COMMANDS[args.command](args, out)
    except SystemExit as e:  # argparse exits (help or usage error)
        return int(e.code or 0)
    except (UsageError, QueryError, SpaceError, VolumeError, bnd.BoundsError, ValueError) as e:
        sys.stderr.write(f"tetraprop: error: {e}\n")
        return EX_USAGE


if __name__ == "__main__":
    sys.exit(main())
