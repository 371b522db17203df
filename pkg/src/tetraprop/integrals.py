"""Tensor quadrature of the h-function: integral property and slice lower bound."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Callable, Optional, Sequence

import numpy as np

from .checker import FAILS, HFunction, QueryError, TetraQuery, TetraReport, evaluate_grid, validate
from .slicer import Tolerances
from .spaces import Point, SpaceSpec, distance


@dataclass(frozen=True)
class QuadratureSpec:
    m: int = 9
    rule: str = "midpoint"

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("quadrature needs m >= 2 nodes per axis")
        if self.rule not in ("midpoint", "trapezoid"):
            raise ValueError(f"unknown rule {self.rule!r}")


@dataclass
class IntegralResult:
    integral_value: float
    bound: float
    error_estimate: float
    satisfied: bool
    nodes: int
    notes: tuple = ()

    def to_dict(self) -> dict:
        return {
            "integral_value": self.integral_value,
            "bound": self.bound,
            "error_estimate": self.error_estimate,
            "satisfied": self.satisfied,
            "nodes": self.nodes,
            "notes": list(self.notes),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "IntegralResult":
        return cls(**{**d, "notes": tuple(d.get("notes", ()))})


def _nodes_weights(lo: float, hi: float, m: int, rule: str):
    w = hi - lo
    if rule == "midpoint":
        x = lo + (np.arange(m) + 0.5) * w / m
        return x, np.full(m, w / m)
    x = np.linspace(lo, hi, m)
    wt = np.full(m, w / (m - 1))
    wt[[0, -1]] *= 0.5
    return x, wt


def tensor_quadrature(f: Callable[[tuple], float], lows: Sequence[float], highs: Sequence[float],
                      m: int, rule: str = "midpoint", evaluate=None) -> float:
    """Tensor-product rule of ``f`` over the box ``prod [lows_i, highs_i]``."""
    axes = [_nodes_weights(lo, hi, m, rule) for lo, hi in zip(lows, highs)]
    cells = [tuple(float(ax[0][i]) for ax, i in zip(axes, idx))
             for idx in itertools.product(range(m), repeat=len(axes))]
    weights = [float(np.prod([ax[1][i] for ax, i in zip(axes, idx)]))
               for idx in itertools.product(range(m), repeat=len(axes))]
    vals = evaluate(cells) if evaluate is not None else [f(c) for c in cells]
    return float(np.dot(weights, vals))


def _quad_with_error(f, lows, highs, quad: QuadratureSpec, evaluate=None):
    """Coarse value and its Richardson error estimate against the ``2m - 1`` rule.

    Both rules are second order, so the coarse error is about
    ``|fine - coarse| / (1 - k)`` with ``k`` the squared spacing ratio.
    """
    m = quad.m
    coarse = tensor_quadrature(f, lows, highs, m, quad.rule, evaluate)
    fine = tensor_quadrature(f, lows, highs, 2 * m - 1, quad.rule, evaluate)
    k = (m / (2 * m - 1)) ** 2 if quad.rule == "midpoint" else 0.25
    return coarse, abs(fine - coarse) / (1 - k)


def integral_tetra(q: TetraQuery, quad: QuadratureSpec = QuadratureSpec(),
                   h_fn: Optional[Callable[[tuple], float]] = None, workers: int = 1,
                   slack: float = 1e-12, hf: Optional[HFunction] = None) -> IntegralResult:
    """Quadrature of h over ``[alpha r, beta r]^(n-1)`` against ``C (beta-alpha)^(n-1) r^n``.

    ``h_fn`` replaces the solver-backed h (used for synthetic integrands);
    ``hf`` reuses the memo of an earlier check on the same query.
    Satisfaction allows the quadrature error estimate (difference between the
    ``m`` and ``2m - 1`` node rules) plus a relative ``slack`` for rounding.
    """
    if q.C is None:
        raise QueryError("integral_tetra needs a target C")
    dims = q.n - 1
    if h_fn is None:
        validate(q)
        hf = hf or HFunction(q.space, q.p, q.r, q.apexes, q.tolerances())
        f = hf
        evaluate = lambda cells: evaluate_grid(hf, cells, workers)  # noqa: E731
    else:
        f, evaluate = h_fn, None
    lo, hi = q.alpha * q.r, q.beta * q.r
    value, err = _quad_with_error(f, [lo] * dims, [hi] * dims, quad, evaluate)
    bound = q.C * (q.beta - q.alpha) ** dims * q.r ** q.n
    return IntegralResult(
        integral_value=value,
        bound=bound,
        error_estimate=err,
        satisfied=value >= bound - err - slack * abs(bound),
        nodes=quad.m ** dims,
    )


def pointwise_implies_integral(q: TetraQuery, report: TetraReport,
                               quad: QuadratureSpec = QuadratureSpec(), workers: int = 1) -> bool:
    """Whether a pointwise certificate carries over to the integral bound.

    The report must come from ``check_tetrahedral`` on the same query and must
    not be a failure.
    """
    if report.verdict == FAILS:
        raise QueryError("pointwise certificate failed; nothing to carry over")
    if q.C is None:
        raise QueryError("need the certified constant C")
    return integral_tetra(q, quad, workers=workers).satisfied


def sliced_filling_lower_bound(space: SpaceSpec, p: Point, r: float, apexes: Sequence[Point],
                               quad: QuadratureSpec = QuadratureSpec(),
                               tol: Optional[Tolerances] = None, workers: int = 1) -> IntegralResult:
    """Quadrature of h over ``prod [max(s_i - r, 0), s_i + r]`` with ``s_i = d(p, q_i)``.

    The value bounds the mass of the ball ``B_r(p)`` from below (for almost
    every radius); the mass itself is not computed.
    """
    if not r > 0:
        raise QueryError("r must be positive")
    if tol is None:
        tol = Tolerances.for_radius(r)
    s = [distance(space, p, a) for a in apexes]
    lows = [max(si - r, 0.0) for si in s]
    highs = [si + r for si in s]
    hf = HFunction(space, p, r, apexes, tol)
    value, err = _quad_with_error(hf, lows, highs, quad, lambda cells: evaluate_grid(hf, cells, workers))
    notes = ("certified mass lower bound",
             "valid for almost every radius; an exceptional null set of radii is not detected")
    return IntegralResult(value, value, err, True, quad.m ** len(apexes), notes)
