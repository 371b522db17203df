import math
from dataclasses import replace

import pytest
from scipy.integrate import quad

from tetraprop.checker import FAILS, QueryError, TetraQuery, TetraReport, check_tetrahedral
from tetraprop.integrals import (
    IntegralResult,
    QuadratureSpec,
    integral_tetra,
    pointwise_implies_integral,
    sliced_filling_lower_bound,
    tensor_quadrature,
)
from tetraprop.slicer import Tolerances
from tetraprop.spaces import cone, cone_point, euclidean, point, round_sphere, vertex

E2 = euclidean(2)
TRAP = QuadratureSpec(9, "trapezoid")


def planar_h(t):
    return 2 * math.sqrt(1 - (1 - t * t / 2) ** 2)


FAST = Tolerances.for_radius(1.0, samples=512)


def e2_query(alpha, beta, C):
    return TetraQuery(E2, point(E2, (0, 0)), 1.0, 2, alpha, beta, C=C, apexes=(point(E2, (1, 0)),), tol=FAST)


def test_constant_integrand_is_exact():
    q = TetraQuery(euclidean(3), point(euclidean(3), (0, 0, 0)), 2.0, 3, 0.5, 1.5, C=0.3)
    res = integral_tetra(q, QuadratureSpec(4), h_fn=lambda t: 0.7)
    assert res.integral_value == pytest.approx(0.7 * (2 * 1.0) ** 2)
    assert res.bound == pytest.approx(0.3 * 1.0 ** 2 * 2.0 ** 3)
    assert res.error_estimate == pytest.approx(0.0, abs=1e-12)
    assert res.satisfied and res.nodes == 16


def test_tensor_rules_integrate_linear_functions():
    f = lambda t: 1 + 2 * t[0] - t[1]  # noqa: E731
    for rule in ("midpoint", "trapezoid"):
        assert tensor_quadrature(f, [0, 1], [2, 3], 5, rule) == pytest.approx(4 * (1 + 2 - 2))


def test_planar_integral_matches_closed_form():
    want, _ = quad(planar_h, 0.9, 1.1)
    res = integral_tetra(e2_query(0.9, 1.1, 1.0))
    # Richardson estimates are asymptotic, not rigorous: allow a modest factor
    assert abs(res.integral_value - want) <= 1.5 * res.error_estimate
    assert abs(res.integral_value - want) >= 0.5 * res.error_estimate
    assert res.error_estimate < 1e-4
    assert want == pytest.approx(0.3457678030, abs=1e-9)


def test_pointwise_carries_to_integral():
    q = e2_query(0.9, 1.1, None)
    rep = check_tetrahedral(q)
    qc = replace(q, C=rep.C_best)
    assert pointwise_implies_integral(qc, rep)
    assert pointwise_implies_integral(replace(q, C=1.6), rep)


def test_failed_certificate_is_rejected():
    q = e2_query(0.9, 1.1, 1.7)
    rep = check_tetrahedral(q)
    assert rep.verdict == FAILS
    with pytest.raises(QueryError):
        pointwise_implies_integral(q, rep)
    fake = TetraReport(FAILS, 0.0, [], [], 0.0, 0.0, 1.0, 0.9, 1.1, 2)
    with pytest.raises(QueryError):
        pointwise_implies_integral(q, fake)


def test_integral_needs_target():
    with pytest.raises(QueryError):
        integral_tetra(e2_query(0.9, 1.1, None))


def test_refinement_is_stable():
    q = e2_query(0.6, 1.6, 1.0)
    coarse = integral_tetra(q, QuadratureSpec(9, "trapezoid"))
    fine = integral_tetra(q, QuadratureSpec(17, "trapezoid"))
    assert abs(fine.integral_value - coarse.integral_value) <= coarse.error_estimate + 1e-9


def test_sub_box_integrals_add_up():
    # the integrand is the same function, so integrals over adjacent intervals add
    whole = integral_tetra(e2_query(0.5, 1.5, 1.0), QuadratureSpec(17, "trapezoid")).integral_value
    left = integral_tetra(e2_query(0.5, 1.0, 1.0), QuadratureSpec(9, "trapezoid")).integral_value
    right = integral_tetra(e2_query(1.0, 1.5, 1.0), QuadratureSpec(9, "trapezoid")).integral_value
    assert left + right == pytest.approx(whole, abs=1e-3)
    assert left < whole and right < whole


def test_sliced_bound_on_flat_plane():
    p, a = point(E2, (0, 0)), point(E2, (1, 0))
    res = sliced_filling_lower_bound(E2, p, 1.0, [a], QuadratureSpec(17, "trapezoid"))
    want, _ = quad(planar_h, 0, 2)
    assert res.integral_value == pytest.approx(want, abs=0.05)
    assert res.integral_value <= math.pi
    assert any("almost every radius" in n for n in res.notes)


def test_sliced_bound_vanishes_at_narrow_cone_vertex():
    K = cone(round_sphere(0.2))
    res = sliced_filling_lower_bound(K, vertex(K), 1.0, [cone_point(K, (1, 0, 0), 1.0)], QuadratureSpec(5))
    assert res.integral_value <= 1e-9


def test_quadrature_spec_validation_and_round_trip():
    with pytest.raises(ValueError):
        QuadratureSpec(1)
    with pytest.raises(ValueError):
        QuadratureSpec(5, "simpson")
    r = IntegralResult(1.0, 0.5, 1e-4, True, 9, ("a",))
    assert IntegralResult.from_dict(r.to_dict()) == r
