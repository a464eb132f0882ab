import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from revcurv.errors import ConfigError, DomainError, NonUniqueGeodesicError, PreconditionError
from revcurv.spherical_convexity import (
    HALF_PI,
    Cap,
    CapIntersection,
    RegionUnion,
    SphericalPolygon,
    WholeSphere,
    convexity_check,
    farthest_distance,
    fibonacci_spacing,
    format_verdict,
    geodesic_point,
    hemisphere,
    hemisphere_certificate,
    lattice_ladder,
    lemma_angle_bound,
    local_convexity_check,
    parse_region,
    random_convex_regions,
    sph_distance,
    spherical_point,
    triangle_angle_cosine,
    witness_holds,
)

NORTH = np.array([0.0, 0.0, 1.0])
EAST = np.array([1.0, 0.0, 0.0])


def test_distance_basics():
    assert sph_distance(NORTH, EAST) == pytest.approx(HALF_PI)
    assert sph_distance(NORTH, -NORTH) == pytest.approx(math.pi)
    assert sph_distance(NORTH, NORTH * (1 + 1e-16)) == 0.0
    assert np.allclose(sph_distance(np.stack([NORTH, EAST]), NORTH), [0.0, HALF_PI])


def test_geodesic_point():
    mid = geodesic_point(NORTH, EAST, 0.5)
    assert np.allclose(mid, spherical_point(1.0, 0.0, 1.0))
    assert np.allclose(geodesic_point(NORTH, EAST, 0.0), NORTH)
    with pytest.raises(NonUniqueGeodesicError):
        geodesic_point(NORTH, -NORTH, 0.5)
    family = geodesic_point(NORTH, -NORTH, 0.5, family=True, directions=16)
    assert family.shape == (16, 3)
    assert np.allclose(family @ NORTH, 0.0, atol=1e-15)
    with pytest.raises(DomainError):
        geodesic_point(2 * NORTH, EAST, 0.5)


@pytest.mark.parametrize("radius", [0.3, 0.6, 1.0, 1.4])
def test_farthest_distance_from_cap(radius):
    R = farthest_distance(Cap(NORTH, radius)).R
    assert abs(R - (math.pi - radius)) <= 2 * fibonacci_spacing(2000)


def test_farthest_distance_from_hemisphere_and_sphere():
    assert farthest_distance(hemisphere(NORTH)).R == pytest.approx(HALF_PI, abs=1e-6)
    assert farthest_distance(WholeSphere()).R == 0.0


def test_lattice_ladder():
    assert lattice_ladder(2000) == [125, 250, 500, 1000, 2000]
    assert lattice_ladder(1999)[-1] == 1000
    assert lattice_ladder(125) == [125]
    with pytest.raises(PreconditionError):
        lattice_ladder(100)


def test_farthest_distance_never_decreases_with_resolution():
    region = RegionUnion((Cap(NORTH, 0.8), Cap(EAST, 0.5), Cap(-EAST, 0.4)))
    found = [farthest_distance(region, n).R for n in (125, 300, 700, 1000, 1800, 2000)]
    assert found == sorted(found)
    assert found[0] > 0.0


def test_cap_intersection_distance_matches_sampled_boundary():
    region = CapIntersection((Cap(NORTH, 1.0), Cap(EAST, 1.2)))
    assert region.vertices().shape == (2, 3)
    points = np.random.default_rng(3).normal(size=(200, 3))
    points /= np.linalg.norm(points, axis=1, keepdims=True)
    exact = region.distance(points)
    sampled = super(CapIntersection, region).distance(points)
    assert np.all(exact <= sampled + 1e-12)
    assert np.max(sampled - exact) < 0.01


def test_closed_hemisphere_is_w_but_not_s_convex():
    region = hemisphere(NORTH)
    weak = convexity_check(region, "w")
    strong = convexity_check(region, "s")
    assert weak.passed and weak.witness is None
    assert not strong.passed
    assert strong.witness is not None and strong.witness.direction is not None
    assert witness_holds(region, strong.witness)
    assert "verdict=fail" in format_verdict(strong)


def test_small_cap_is_s_convex():
    verdict = convexity_check(Cap(EAST, 0.8), "s", rng=np.random.default_rng(1))
    assert verdict.passed
    assert verdict.samples_used >= verdict.pair_samples


def test_union_of_disjoint_caps_is_not_convex():
    region = RegionUnion((Cap(NORTH, 0.5), Cap(EAST, 0.5)))
    verdict = convexity_check(region, "w", rng=np.random.default_rng(2))
    assert not verdict.passed
    assert witness_holds(region, verdict.witness)
    assert verdict.witness.excess > 1e-9


def test_local_convexity():
    assert local_convexity_check(Cap(NORTH, 1.0)).passed
    assert local_convexity_check(Cap(NORTH, 1.0)).mode == "l"


def test_convexity_check_arguments():
    with pytest.raises(DomainError):
        convexity_check(Cap(NORTH, 0.5), "x")


def test_polygon():
    square = SphericalPolygon.from_vertices([[1, 0, 1], [0, 1, 1], [-1, 0, 1], [0, -1, 1]])
    assert square.contains(NORTH[None, :])[0]
    assert not square.contains(-NORTH[None, :])[0]
    assert farthest_distance(square).R > HALF_PI
    assert convexity_check(square, "s").passed
    with pytest.raises(DomainError):
        SphericalPolygon.from_vertices([[1, 0, 0], [0, 1, 0]])


def test_lunes_have_farthest_distance_half_pi():
    lune = CapIntersection((hemisphere(NORTH), hemisphere(EAST)))
    assert farthest_distance(lune).R == pytest.approx(HALF_PI, abs=1e-6)


@settings(max_examples=50, deadline=None)
@given(st.floats(min_value=0.05, max_value=1.5), st.floats(min_value=0.01, max_value=0.99))
def test_angle_formula_matches_triangle(R, fraction):
    eps = fraction * min(HALF_PI - R, 2 * R)
    assert lemma_angle_bound(R, eps) == pytest.approx(triangle_angle_cosine(R, eps), abs=1e-8)


def test_angle_formula_domain():
    with pytest.raises(DomainError):
        lemma_angle_bound(HALF_PI, 0.1)
    with pytest.raises(DomainError):
        lemma_angle_bound(1.0, 0.6)


@pytest.mark.parametrize("seed", [0, 1])
def test_random_w_convex_regions_reach_half_pi(seed):
    for region in random_convex_regions(np.random.default_rng(seed), 4, "w"):
        assert farthest_distance(region).R >= HALF_PI - 1e-6


@pytest.mark.parametrize("seed", [0, 1])
def test_random_s_convex_regions_exceed_half_pi(seed):
    for region in random_convex_regions(np.random.default_rng(seed), 4, "s"):
        assert farthest_distance(region).R > HALF_PI


def test_random_regions_kind():
    with pytest.raises(DomainError):
        random_convex_regions(np.random.default_rng(0), 1, "q")


def test_hemisphere_certificates():
    small = hemisphere_certificate(Cap(EAST, 0.7))
    assert small is not None and small.open
    assert small.min_distance >= HALF_PI
    closed = hemisphere_certificate(hemisphere(NORTH))
    assert closed is not None and not closed.open
    assert hemisphere_certificate(Cap(NORTH, 2.0)) is None


def test_parse_region():
    cap = parse_region("cap:0,0,2,0.5")
    assert isinstance(cap, Cap)
    assert np.allclose(cap.center, NORTH)
    assert parse_region("open:cap:1,0,0,0.5").open
    assert isinstance(parse_region("inter:cap:0,0,1,1;cap:1,0,0,1"), CapIntersection)
    assert isinstance(parse_region("poly:1,0,1;0,1,1;-1,0,1"), SphericalPolygon)
    assert isinstance(parse_region("union:cap:0,0,1,0.2|cap:1,0,0,0.2"), RegionUnion)
    assert isinstance(parse_region("sphere"), WholeSphere)
    assert parse_region(cap.spec()).radius == 0.5


@pytest.mark.parametrize("text", ["cap:0,0,1", "cap:0,0,0,1", "cap:a,b,c,d", "blob:1", "inter:sphere", "cap:0,0,1,4"])
def test_parse_region_errors(text):
    with pytest.raises(ConfigError):
        parse_region(text)
