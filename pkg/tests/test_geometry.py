import gc
import math
import weakref

import numpy as np
import pytest
from hypothesis import assume, given, strategies as st

from biharm import DomainError, InterfaceError, NotSupportedError
from biharm import PreconditionError
from biharm.enums import Location, Pole, SampleScheme
from biharm.geometry import Ball, ConvexPolytope, Polygon2D, place_pole
from biharm.geometry import convexity_pairs, convexity_support
from biharm.geometry import domain_from_description, simplex_measure
from biharm.geometry import surface_nodes


coords = st.floats(-2.0, 2.0, allow_nan=False)


def test_ball_location():
    b = Ball([0.0, 0.0], 1.0)
    assert b.location([0.2, 0.3]) is Location.INTERIOR
    assert b.location([1.0, 0.0]) is Location.BOUNDARY
    assert b.location([0.0, -1.0 - 1e-14]) is Location.BOUNDARY
    assert b.location([1.1, 0.0]) is Location.EXTERIOR
    assert b.contains([0.6, 0.8])
    assert b.contains(np.array([[0.0, 0.0], [2.0, 0.0]])).tolist() == [
        True,
        False,
    ]


@given(coords, coords)
def test_ball_distance(x, y):
    b = Ball([0.5, -0.5], 1.5)
    d = b.distance([x, y])
    assert d == pytest.approx(1.5 - math.hypot(x - 0.5, y + 0.5), abs=1e-12)


@given(coords, coords, coords)
def test_cube_contains(x, y, z):
    assume(all(abs(t) > 1e-9 and abs(t - 1) > 1e-9 for t in (x, y, z)))
    c = ConvexPolytope.cube(3)
    inside = all(0 <= t <= 1 for t in (x, y, z))
    assert c.contains([x, y, z]) == inside


@pytest.mark.parametrize(
    "args, exc",
    [
        (([0.0, 0.0], 0.0), DomainError),
        (([0.0], 1.0), DomainError),
        (([0.0] * 9, 1.0), DomainError),
    ],
)
def test_ball_bad(args, exc):
    with pytest.raises(exc):
        Ball(*args)


def test_bad_point():
    b = Ball([0.0, 0.0, 0.0], 1.0)
    with pytest.raises(DomainError):
        b.distance([0.0, 0.0])
    with pytest.raises(DomainError):
        b.distance([0.0, np.nan, 0.0])


@pytest.mark.parametrize(
    "normals, offsets",
    [
        ([[1.0, 0.0], [0.0, 1.0]], [1.0, 1.0]),
        ([[1.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [0, -1, 1, 1]),
        ([[2.0, 0.0], [-1.0, 0.0], [0.0, 1.0], [0.0, -1.0]], [1, 1, 1, 1]),
        ([[1.0, 0.0]], [1.0, 2.0]),
    ],
)
def test_polytope_bad(normals, offsets):
    with pytest.raises(DomainError):
        ConvexPolytope(normals, offsets)


def test_from_inequalities():
    p = ConvexPolytope.from_inequalities(
        [[2.0, 0.0], [-1.0, 0.0], [0.0, 3.0], [0.0, -1.0]], [2, 0, 3, 0]
    )
    assert np.allclose(p.bounding_box[0], [0, 0])
    assert np.allclose(p.bounding_box[1], [1, 1])
    with pytest.raises(DomainError):
        ConvexPolytope.from_inequalities([[0.0, 0.0]], [1.0])


@pytest.mark.parametrize(
    "poly, volume, area, nverts",
    [
        (ConvexPolytope.cube(2), 1.0, 4.0, 4),
        (ConvexPolytope.cube(3, -1.0, 1.0), 8.0, 24.0, 8),
        (ConvexPolytope.simplex(2), 0.5, 2 + math.sqrt(2), 3),
        (ConvexPolytope.simplex(3), 1 / 6, 1.5 + math.sqrt(3) / 2, 4),
        (ConvexPolytope.cube(4), 1.0, 8.0, 16),
    ],
)
def test_polytope_measures(poly, volume, area, nverts):
    assert poly.volume == pytest.approx(volume)
    assert poly.area == pytest.approx(area)
    assert len(poly.vertices) == nverts
    assert len(poly.facets) == len(poly.offsets)


def test_vertices_facets_cached():
    c = ConvexPolytope.cube(3)
    assert c.vertices is c.vertices
    assert c.facets is c.facets

    # the cache doesn't outlive the polytope
    ref = weakref.ref(c)
    del c
    gc.collect()
    assert ref() is None


def test_chebyshev():
    c = ConvexPolytope.cube(3, 0.0, 2.0)
    assert np.allclose(c.chebyshev_center, [1, 1, 1])
    assert c.chebyshev_radius == pytest.approx(1.0)
    assert c.diameter == pytest.approx(2 * math.sqrt(3))


def test_active_facets():
    c = ConvexPolytope.cube(3)
    assert c.active_facets([0.5, 0.5, 0.5]) == []
    assert c.active_facets([1.0, 0.5, 0.5]) == [0]
    assert sorted(c.active_facets([0.0, 0.0, 0.0])) == [3, 4, 5]


def test_cone_simplices():
    c = ConvexPolytope.cube(3)
    cones = c.cone_simplices([0.0, 0.0, 0.0])
    assert sum(simplex_measure(s[1:] - s[0]) for s in cones) == (
        pytest.approx(1.0)
    )
    # the facets through the apex are skipped
    assert all(np.allclose(s[0], 0) for s in cones)
    with pytest.raises(DomainError):
        c.cone_simplices([2.0, 0.0, 0.0])


def test_simplex_measure():
    assert simplex_measure(np.zeros((0, 3))) == 1.0
    assert simplex_measure(np.array([[3.0, 4.0]])) == pytest.approx(5.0)
    edges = np.array([[1.0, 0.0, 0.0], [0.0, 1.0, 0.0]])
    assert simplex_measure(edges) == pytest.approx(0.5)


def test_polygon():
    sq = Polygon2D.square()
    assert sq.area == pytest.approx(1.0)
    assert sq.convex
    assert sq.distance([0.5, 0.5]) == pytest.approx(0.5)
    assert sq.distance([1.5, 0.5]) == pytest.approx(-0.5)

    ell = Polygon2D.l_shape()
    assert ell.area == pytest.approx(3.0)
    assert not ell.convex
    assert ell.reentrant_corners() == [3]
    assert ell.vertices[3].tolist() == [1.0, 1.0]
    assert ell.location([1.5, 1.5]) is Location.EXTERIOR
    assert ell.location([1.5, 1.0]) is Location.BOUNDARY
    assert ell.diameter == pytest.approx(2 * math.sqrt(2))


def test_polygon_clockwise():
    p = Polygon2D([[0, 0], [0, 1], [1, 1], [1, 0]])
    assert p.area == pytest.approx(1.0)
    assert np.allclose(p.edge_normal(0), [1, 0])


@pytest.mark.parametrize(
    "verts",
    [
        [[0, 0], [1, 1], [1, 0], [0, 1]],
        [[0, 0], [1, 0]],
        [[0, 0], [1, 0], [np.inf, 1]],
    ],
)
def test_polygon_bad(verts):
    with pytest.raises(DomainError):
        Polygon2D(verts)


def test_boundary_patches():
    ell = Polygon2D.l_shape()
    patches = ell.boundary_patches(80)
    assert sum(p.weight for p in patches) == pytest.approx(8.0)
    for p in patches:
        assert ell.location(p.point) is Location.BOUNDARY
        assert np.linalg.norm(p.normal) == pytest.approx(1.0)
        # the normal points outward
        assert not ell.contains(p.point + 1e-6 * p.normal)


@pytest.mark.parametrize(
    "domain, area",
    [
        (Ball([0.0, 0.0, 0.0], 1.0), 4 * math.pi),
        (Ball([1.0, 0.0], 2.0), 4 * math.pi),
        (ConvexPolytope.cube(3), 6.0),
        (ConvexPolytope.simplex(2), 2 + math.sqrt(2)),
    ],
)
def test_surface_nodes_area(domain, area):
    nodes = surface_nodes(domain, 2000)
    assert nodes.weights.sum() == pytest.approx(area, rel=1e-10)
    assert np.allclose(domain.distance(nodes.points), 0, atol=1e-12)
    assert np.allclose(np.linalg.norm(nodes.normals, axis=1), 1.0)


def test_surface_nodes_qmc():
    b = Ball([0.0, 0.0, 0.0, 0.0], 1.0)
    nodes = surface_nodes(b, 1000, SampleScheme.LOW_DISCREPANCY, seed=3)
    assert nodes.weights.sum() == pytest.approx(2 * math.pi ** 2)
    # antithetic pairs
    m = len(nodes.points) // 2
    assert np.allclose(nodes.points[:m], -nodes.points[m:])

    cube = ConvexPolytope.cube(3)
    nodes = surface_nodes(cube, 4000, SampleScheme.LOW_DISCREPANCY)
    assert nodes.weights.sum() == pytest.approx(6.0, rel=0.05)


def test_surface_nodes_polygon():
    with pytest.raises(NotSupportedError):
        surface_nodes(Polygon2D.square(), 100)


def test_convexity_support():
    sq = Polygon2D.square()
    patches = sq.boundary_patches(40)
    assert convexity_support(sq, [0.0, 0.0], patches) >= -1e-12

    ell = Polygon2D.l_shape()
    patches = ell.boundary_patches(80)
    assert convexity_support(ell, [2.0, 0.5], patches) < -0.5

    with pytest.raises(PreconditionError):
        convexity_support(sq, [0.5, 0.5], patches)
    with pytest.raises(InterfaceError):
        convexity_support(sq, [0.0, 0.0], [])


def test_convexity_support_ball():
    b = Ball([0.0, 0.0, 0.0], 1.0)
    patches = surface_nodes(b, 500).patches()
    assert convexity_support(b, [0.0, 0.0, 1.0], patches) >= -1e-12


def test_convexity_pairs():
    sq = Polygon2D.square()
    assert convexity_pairs(sq.boundary_patches(40)) >= -1e-12
    ell = Polygon2D.l_shape()
    patches = ell.boundary_patches(80)
    full = convexity_pairs(patches)
    assert full < -0.5
    sampled = convexity_pairs(patches, max_pairs=100, seed=1)
    assert sampled >= full - 1e-12
    with pytest.raises(InterfaceError):
        convexity_pairs(patches[:1])


@pytest.mark.parametrize(
    "desc",
    [
        {"type": "ball"},
        {"type": "polytope", "halfspaces": 3},
        {"type": "polygon2d"},
        {"type": "torus"},
    ],
)
def test_description_bad(desc):
    with pytest.raises(InterfaceError):
        domain_from_description(desc)


def test_description():
    desc = {"type": "ball", "center": [0, 0], "radius": 2}
    d = domain_from_description(desc)
    assert isinstance(d, Ball)
    assert d.radius == 2.0


@pytest.mark.parametrize(
    "domain, pole, loc",
    [
        (Ball([0.0, 0.0], 1.0), Pole.BOUNDARY_SPHERE_POINT, Location.BOUNDARY),
        (Ball([0.0, 0.0], 1.0), Pole.EXTERIOR, Location.EXTERIOR),
        (ConvexPolytope.cube(3), Pole.BOUNDARY_VERTEX, Location.BOUNDARY),
        (
            ConvexPolytope.simplex(4),
            Pole.BOUNDARY_FACET_CENTER,
            Location.BOUNDARY,
        ),
        (ConvexPolytope.cube(3), Pole.EXTERIOR, Location.EXTERIOR),
    ],
)
def test_place_pole(domain, pole, loc):
    y = place_pole(domain, pole)
    assert domain.location(y) is loc


def test_place_pole_vertex():
    y = place_pole(ConvexPolytope.cube(3), Pole.BOUNDARY_VERTEX)
    assert np.allclose(y, 0.0)
    with pytest.raises(InterfaceError):
        place_pole(Ball([0.0, 0.0], 1.0), Pole.BOUNDARY_VERTEX)
    with pytest.raises(InterfaceError):
        place_pole(Polygon2D.square(), Pole.EXTERIOR)
