import json
import math

import pytest

from tetraprop.examples import (
    EXAMPLE_IDS,
    PROBES,
    Claim,
    ExampleReport,
    cone_vertex_params,
    run_example,
    slice_constants,
    suite_json,
)


def half_angle_constants(r, s, C, b):
    # 1 - cos x = 2 sin^2(x/2), so every square root collapses to a sine ratio
    sr = math.sin(r / 2)
    C_r = math.sin(C * r / 2) / sr
    lo = 1 - math.sin((1 - b) * r / 2) / sr
    hi = math.sin((1 + b) * r / 2) / sr - 1
    return C_r, max(lo, hi), 2 * s * sr


@pytest.mark.parametrize("r,s,C,b", [(math.pi / 2, 1.0, 0.5, 0.5), (1.0, 2.0, 0.3, 0.2), (0.3, 0.5, 1.0, 0.9)])
def test_slice_constants_match_half_angle_form(r, s, C, b):
    assert slice_constants(r, s, C, b) == pytest.approx(half_angle_constants(r, s, C, b), abs=1e-12)


def test_slice_constants_reference_values():
    C_r, beta_r, rp = slice_constants(math.pi / 2, 1.0, 0.5, 0.5)
    assert C_r == pytest.approx(0.5412, abs=1e-4)
    assert beta_r == pytest.approx(0.4588, abs=1e-4)
    assert rp == pytest.approx(math.sqrt(2))
    assert slice_constants(0.7, 1.0, 1.0, 0.3)[0] == pytest.approx(1.0)


@pytest.mark.parametrize("args", [(2.0, 1, 0.5, 0.5), (1.0, 0, 0.5, 0.5), (1.0, 1, 0.5, 1.0), (1.0, 1, 0.0, 0.5)])
def test_slice_constants_domain(args):
    with pytest.raises(ValueError):
        slice_constants(*args)


def test_cone_vertex_window():
    a, b, ok = cone_vertex_params(1.0, math.pi / 2)
    assert a == pytest.approx(2 * math.sin(math.pi / 8))
    assert b == pytest.approx(2 * math.sin(3 * math.pi / 8))
    assert ok
    # a narrow base with apexes far apart leaves no window
    a, b, ok = cone_vertex_params(0.25, 0.9 * math.pi * 0.25)
    assert ok == (a < b)
    with pytest.raises(ValueError):
        cone_vertex_params(1.0, math.pi)


def test_claim_and_report_round_trip():
    c = Claim("x", 1.0, 1.05, 0.1, True)
    assert c.to_dict()["pass"] is True
    rep = ExampleReport("planes", [c, Claim("y", "HOLDS", "FAILS", None, False)], ["n"], {"r": 1.0}, seed=3)
    assert not rep.overall
    again = ExampleReport.from_dict(json.loads(rep.to_json()))
    assert again.to_json() == rep.to_json()
    assert "FAIL" in rep.to_text()


def test_plane_ray_example_passes_and_is_reproducible():
    a = run_example("plane_ray", seed=42)
    assert a.overall, a.to_text()
    assert a.probes == PROBES["plane_ray"]
    assert suite_json([a]) == suite_json([run_example("plane_ray", seed=42)])


def test_unknown_example():
    with pytest.raises(ValueError):
        run_example("torus")
    assert len(EXAMPLE_IDS) == 8 and set(EXAMPLE_IDS) == set(PROBES)
