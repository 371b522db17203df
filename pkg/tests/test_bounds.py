import math
from fractions import Fraction

import numpy as np
import pytest

from tetraprop.bounds import (
    DIAMETER_DERIVATION,
    BoundsError,
    bounds_report,
    diameter_bound,
    greedy_packing,
    packing_bound,
)
from tetraprop.spaces import Ball, Box, euclidean, point


def test_hand_computed_values():
    assert packing_bound(10, 1, 0.9, 1.1, 3, 1) == 250
    assert diameter_bound(10, 1, 0.9, 1.1, 3, 1) == 2001.0


def test_diameter_consistent_with_packing():
    # D0 = packing_bound(eps = r0/2) r0 + r0 whenever the quotient is an integer
    for V0, r0 in ((10, 1), (7, 0.5), (3, 2)):
        q = Fraction(V0) / (Fraction(1) * Fraction(1, 5) ** 2 * (Fraction(r0) / 2) ** 3)
        assert q.denominator == 1
        assert diameter_bound(V0, 1, 0.9, 1.1, 3, r0) == packing_bound(V0, 1, 0.9, 1.1, 3, r0 / 2) * r0 + r0


def test_scaling_and_monotonicity():
    assert packing_bound(10, 1, 0.9, 1.1, 3, 2) == math.floor(250 / 8)
    assert packing_bound(10, 2, 0.9, 1.1, 3, 1) == 125
    assert packing_bound(10, 1, 0.5, 1.5, 2, 1) == 10
    assert diameter_bound(10, 1, 0.9, 1.0, 3, 1) > diameter_bound(10, 1, 0.9, 1.1, 3, 1)


@pytest.mark.parametrize("args", [
    (0, 1, 0.9, 1.1, 3, 1), (10, 0, 0.9, 1.1, 3, 1), (10, 1, 1.1, 0.9, 3, 1),
    (10, 1, 0.9, 2.0, 3, 1), (10, 1, 0.9, 1.1, 0, 1), (10, 1, 0.9, 1.1, 2.5, 1), (10, 1, 0.9, 1.1, 3, 0),
])
def test_invalid_inputs(args):
    with pytest.raises(BoundsError):
        packing_bound(*args)
    with pytest.raises(BoundsError):
        diameter_bound(*args)


def test_greedy_is_deterministic_and_separated():
    E2 = euclidean(2)
    region = Box((0, 0), (1, 1))
    a = greedy_packing(E2, region, 0.1, candidate_count=500, seed=4)
    assert a == greedy_packing(E2, region, 0.1, candidate_count=500, seed=4)
    assert 1 < a <= math.floor((1 + 0.2) ** 2 / (math.pi * 0.01))
    assert greedy_packing(E2, region, 5.0, candidate_count=100, seed=0) == 1
    with pytest.raises(BoundsError):
        greedy_packing(E2, region, 0.0)


@pytest.mark.parametrize("seed", range(20))
def test_greedy_never_exceeds_packing_bound(seed):
    # Euclidean^3 balls: Vol(B_s) >= C (beta - alpha)^2 s^3 with C = 4 pi / 3 / 0.04 for alpha, beta = 0.9, 1.1;
    # the eps-balls of a greedy set lie in the eps-collar of the region
    rng = np.random.default_rng(seed)
    E3 = euclidean(3)
    R = float(rng.uniform(0.5, 2.0))
    eps = float(rng.uniform(0.1, 0.4))
    C = 4 * math.pi / 3 / 0.04
    V0 = 4 * math.pi / 3 * (R + eps) ** 3
    count = greedy_packing(E3, Ball(point(E3, rng.uniform(-1, 1, 3)), R), eps, candidate_count=1500, seed=seed)
    assert count <= packing_bound(V0, C, 0.9, 1.1, 3, eps)


def test_segment_contrapositive():
    # a segment of length D0 + r0 holds more disjoint r0/2-balls than the bound allows
    V0, C, a, b, n, r0 = 10, 1, 0.9, 1.1, 3, 1
    D0 = diameter_bound(V0, C, a, b, n, r0)
    marks = np.arange(0.0, D0 + r0 + 1e-9, r0)
    assert np.all(np.diff(marks) >= r0)
    assert len(marks) > packing_bound(V0, C, a, b, n, r0 / 2)


def test_report_fields():
    rep = bounds_report(10, 1, 0.9, 1.1, 3, eps=1, r0=1)
    assert rep["packing_bound"] == 250 and rep["diameter_bound"] == 2001.0
    assert rep["diameter_derivation"] == DIAMETER_DERIVATION
    assert "diameter_bound" not in bounds_report(10, 1, 0.9, 1.1, 3, eps=1)
