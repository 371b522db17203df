import math

import pytest

from tetraprop.checker import FAILS, HOLDS, TetraReport
from tetraprop.spaces import (
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
    vertex,
)
from tetraprop.volume import (
    VolumeError,
    VolumeReport,
    analytic_volume,
    ball_volume,
    monte_carlo_volume,
    verify_volume_bound,
    volume_sweep,
)

E3 = euclidean(3)
CASES = [
    ("euclid2", euclidean(2), point(euclidean(2), (0.3, -1)), 0.8, math.pi * 0.64),
    ("euclid3", E3, point(E3, (0, 0, 0)), 1.0, 4 * math.pi / 3),
    ("sphere", round_sphere(1.0), point(round_sphere(1.0), (0, 0, 1)), 1.0, 2 * math.pi * (1 - math.cos(1.0))),
    ("sphere_whole", round_sphere(0.5), point(round_sphere(0.5), (1, 0, 0)), 2.0, math.pi),
    ("rp2", projective_plane(1.0), point(projective_plane(1.0), (0, 1, 0)), 1.2,
     2 * math.pi * (1 - math.cos(1.2))),
    ("cone_vertex", cone(round_sphere(0.5)), vertex(cone(round_sphere(0.5))), 1.0, math.pi / 3),
    ("cone_flat", cone(round_sphere(1.0)), cone_point(cone(round_sphere(1.0)), (1, 1, 0), 2.0), 0.7,
     4 * math.pi * 0.343 / 3),
    ("cone_rp2_vertex", cone_rp2(), vertex(cone_rp2()), 1.5, 2 * math.pi * 1.5 ** 3 / 3),
    ("slice", cone_slice(round_sphere(1.0), 1.0), point(cone_slice(round_sphere(1.0), 1.0), (0, 0, 1)), 1.0,
     2 * math.pi * (1 - math.cos(2 * math.asin(0.5)))),
    ("glued_far", glued_planes(), point(glued_planes(), (3.0, 0.0)), 1.0, math.pi),
    ("glued_seam", glued_planes(), point(glued_planes(), (0.0, 0.0)), 1.0, 1.5 * math.pi),
    ("plane_ray_far", plane_with_ray(), point(plane_with_ray(), (2.0, 0.0), "PLANE"), 1.0, math.pi),
]


@pytest.mark.parametrize("name,space,p,r,want", CASES, ids=[c[0] for c in CASES])
def test_analytic_matches_independent_formula(name, space, p, r, want):
    assert analytic_volume(space, p, r) == pytest.approx(want, rel=1e-12)


@pytest.mark.parametrize("name,space,p,r,want", CASES, ids=[c[0] for c in CASES])
def test_monte_carlo_agrees_within_three_sigma(name, space, p, r, want):
    v, se = monte_carlo_volume(space, p, r, samples=40_000, seed=11)
    assert abs(v - want) <= 3 * se + 1e-12


def test_glued_segment_oracle():
    # at distance d from the seam the ball adds the disk segment beyond the seam
    G = glued_planes()
    d, r = 0.4, 1.0
    seg = r * r * math.acos(d / r) - d * math.sqrt(r * r - d * d)
    assert analytic_volume(G, point(G, (d, 0.0)), r) == pytest.approx(math.pi + seg)
    assert analytic_volume(G, point(G, (0.5, d), "YZ"), r) == pytest.approx(math.pi + seg)


def test_monotone_and_scaling():
    p = point(E3, (0, 0, 0))
    vols = [analytic_volume(E3, p, r) for r in (0.5, 1.0, 1.5)]
    assert vols == sorted(vols)
    assert analytic_volume(E3, p, 2.0) == pytest.approx(8 * analytic_volume(E3, p, 1.0))
    G = glued_planes()
    a = monte_carlo_volume(G, point(G, (0.2, 0.0)), 0.5, samples=20_000, seed=1)[0]
    b = monte_carlo_volume(G, point(G, (0.2, 0.0)), 1.0, samples=20_000, seed=1)[0]
    assert a < b


def test_plane_ray_mismatch_is_reported():
    P = plane_with_ray()
    for p, r in ((point(P, (1.0,), "RAY"), 0.5), (point(P, (0.5, 0.0), "PLANE"), 1.0)):
        with pytest.raises(VolumeError):
            ball_volume(P, p, r)
        with pytest.raises(VolumeError):
            ball_volume(P, p, r, method="monte_carlo")


def test_monte_carlo_is_seeded_and_worker_independent():
    G = glued_planes()
    p = point(G, (0.1, 0.0))
    a = monte_carlo_volume(G, p, 1.0, samples=30_000)
    assert a == monte_carlo_volume(G, p, 1.0, samples=30_000)
    assert a == monte_carlo_volume(G, p, 1.0, samples=30_000, workers=2)
    assert a != monte_carlo_volume(G, p, 1.0, samples=30_000, seed=3)


def test_euclidean_bound_slack():
    rep = verify_volume_bound(E3, point(E3, (0, 0, 0)), 1.0, C=1.0, alpha=0.9, beta=1.1)
    assert rep.verdict == HOLDS
    assert rep.slack == pytest.approx((4 * math.pi / 3) / 0.04)
    assert VolumeReport.from_dict(rep.to_dict()) == rep


def test_bound_violation_is_flagged():
    rep = verify_volume_bound(euclidean(2), point(euclidean(2), (0, 0)), 1.0, C=100.0, alpha=0.1, beta=1.9)
    assert rep.verdict == FAILS and rep.notes


def test_failed_certificate_is_rejected():
    bad = TetraReport(FAILS, 0.0, [], [], 0.0, 0.0, 1.0, 0.9, 1.1, 3, C=1.0)
    with pytest.raises(VolumeError):
        verify_volume_bound(E3, point(E3, (0, 0, 0)), 1.0, 1.0, 0.9, 1.1, certificate=bad)


def test_sweep_rows():
    rows = volume_sweep(E3, point(E3, (0, 0, 0)), [0.5, 1.0], 1.0, 0.9, 1.1)
    assert [r["r"] for r in rows] == [0.5, 1.0]
    assert rows[0]["volume"] < rows[1]["volume"]


@pytest.mark.parametrize("bad", [
    lambda: ball_volume(E3, point(E3, (0, 0, 0)), 0.0),
    lambda: ball_volume(E3, point(E3, (0, 0, 0)), 1.0, method="quadrature"),
    lambda: analytic_volume(cone(round_sphere(0.5)), cone_point(cone(round_sphere(0.5)), (1, 0, 0), 1.0), 0.5),
    lambda: verify_volume_bound(E3, point(E3, (0, 0, 0)), 1.0, 1.0, 1.1, 0.9),
])
def test_invalid_requests(bad):
    with pytest.raises(VolumeError):
        bad()


def test_certificate_must_cover_request():
    good = TetraReport(HOLDS, 1.2, [0.9], [], 1.2, 1.2, 1.0, 0.9, 1.1, 3, C=0.5)
    p = point(E3, (0, 0, 0))
    # a HOLDS report certifies every C up to its C_best on its own interval
    assert verify_volume_bound(E3, p, 1.0, 1.0, 0.9, 1.1, certificate=good).verdict == HOLDS
    with pytest.raises(VolumeError):
        verify_volume_bound(E3, p, 1.0, 1.5, 0.9, 1.1, certificate=good)
    with pytest.raises(VolumeError):
        verify_volume_bound(E3, p, 1.0, 1.0, 0.8, 1.1, certificate=good)
