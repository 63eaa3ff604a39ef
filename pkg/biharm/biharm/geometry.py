"""
Domains: balls, convex polytopes and 2D polygons.

Domains are immutable after construction and can be shared by concurrent
quadrature workers.
"""

# Copyright (C) 2020 The biharm Team

import math
import logging
from typing import Any, Dict, List, NamedTuple, Optional, Sequence, Tuple
from typing import Union

import numpy as np
from scipy import linalg, optimize, spatial

from . import errors as e
from . import rules
from .enums import Location, Pole, SampleScheme
from .proto import Array

logger = logging.getLogger(__name__)

# relative to the domain diameter
BOUNDARY_RTOL = 1e-12
NORMAL_TOL = 1e-12

PointLike = Union[Array, Sequence[float]]


class BoundaryPatch(NamedTuple):
    """A point of the boundary with its outward normal and surface weight."""

    point: Array
    normal: Array
    weight: float


class Domain:
    """
    Base class for the bounded domains.
    """

    dim: int

    def __init__(self, rtol: float = BOUNDARY_RTOL):
        self.rtol = rtol

    @property
    def diameter(self) -> float:
        raise NotImplementedError

    @property
    def boundary_tol(self) -> float:
        return self.rtol * max(self.diameter, 1.0)

    @property
    def convex(self) -> bool:
        return True

    def describe(self) -> Dict[str, Any]:
        raise NotImplementedError

    def distance(self, x: PointLike) -> Array:
        """
        Signed distance to the boundary: positive inside, negative outside.

        For polytopes the value outside is a lower bound of the actual
        distance, but it always has the right sign.
        """
        raise NotImplementedError

    def contains(self, x: PointLike) -> Any:
        """
        Return True if *x* is in the closed domain.

        *x* can be a point or an array of points; boundary points within the
        tolerance are contained.
        """
        rv = self.distance(x) >= -self.boundary_tol
        return bool(rv) if np.ndim(rv) == 0 else rv

    def location(self, x: PointLike) -> Location:
        d = float(self.distance(x))
        if d > self.boundary_tol:
            return Location.INTERIOR
        elif d >= -self.boundary_tol:
            return Location.BOUNDARY
        else:
            return Location.EXTERIOR

    def _points(self, x: PointLike) -> Tuple[Array, bool]:
        arr = np.asarray(x, dtype=float)
        single = arr.ndim == 1
        arr = np.atleast_2d(arr)
        if arr.shape[1] != self.dim:
            raise e.DomainError(
                f"point of dimension {arr.shape[1]} in a {self.dim}D domain",
                info={"quantity": "dimension", "value": arr.shape[1]},
            )
        if not np.isfinite(arr).all():
            raise e.DomainError("non-finite point coordinates")
        return arr, single


class Ball(Domain):
    def __init__(
        self,
        center: PointLike,
        radius: float,
        rtol: float = BOUNDARY_RTOL,
    ):
        super().__init__(rtol)
        self.center = np.array(center, dtype=float)
        self.center.setflags(write=False)
        self.radius = float(radius)
        self.dim = len(self.center)
        if not self.radius > 0:
            raise e.DomainError(f"the ball radius must be positive: {radius}")
        _check_dim(self.dim)

    def __repr__(self) -> str:
        return (
            f"Ball(center={self.center.tolist()}, radius={self.radius:g})"
        )

    @property
    def diameter(self) -> float:
        return 2.0 * self.radius

    @property
    def volume(self) -> float:
        return rules.ball_volume(self.dim, self.radius)

    @property
    def area(self) -> float:
        return rules.sphere_area(self.dim, self.radius)

    def describe(self) -> Dict[str, Any]:
        return {
            "type": "ball",
            "center": self.center.tolist(),
            "radius": self.radius,
        }

    def distance(self, x: PointLike) -> Any:
        pts, single = self._points(x)
        d = self.radius - np.linalg.norm(pts - self.center, axis=1)
        return d[0] if single else d

    def outward_normal(self, x: PointLike) -> Array:
        pts, single = self._points(x)
        z = pts - self.center
        n = z / np.linalg.norm(z, axis=1)[:, None]
        return n[0] if single else n

    def project(self, x: PointLike) -> Array:
        """Return the point of the sphere closest to *x*."""
        pts, single = self._points(x)
        rv = self.center + self.radius * self.outward_normal(pts)
        return rv[0] if single else rv


class Facet(NamedTuple):
    index: int
    normal: Array
    offset: float
    vertices: Array  # (k, n)

    @property
    def centroid(self) -> Array:
        return self.vertices.mean(axis=0)  # type: ignore


class ConvexPolytope(Domain):
    """
    A bounded convex polytope ``{x : <a_i, x> <= b_i}`` with unit normals.

    Vertices and facets are derived lazily by half-space intersection.
    """

    def __init__(
        self,
        normals: Union[Array, Sequence[Sequence[float]]],
        offsets: Union[Array, Sequence[float]],
        rtol: float = BOUNDARY_RTOL,
    ):
        super().__init__(rtol)
        self.normals = np.array(normals, dtype=float)
        self.offsets = np.array(offsets, dtype=float)
        self.normals.setflags(write=False)
        self.offsets.setflags(write=False)

        if self.normals.ndim != 2 or self.offsets.shape != (
            self.normals.shape[0],
        ):
            raise e.DomainError("half-spaces normals and offsets mismatch")
        self.dim = self.normals.shape[1]
        _check_dim(self.dim)

        norms = np.linalg.norm(self.normals, axis=1)
        bad = np.abs(norms - 1.0) > NORMAL_TOL
        if bad.any():
            raise e.DomainError(
                "half-space normals must have unit length",
                info={"quantity": "normal length", "value": norms[bad][0]},
            )

        # verify non-empty and bounded on construction
        self._cheby: Tuple[Array, float] = self._chebyshev_ball()
        self._bbox: Tuple[Array, Array] = self._bounding_box()
        self._vertices: Optional[Array] = None
        self._facets: Optional[List[Facet]] = None

    @classmethod
    def from_inequalities(
        cls,
        a: Union[Array, Sequence[Sequence[float]]],
        b: Union[Array, Sequence[float]],
    ) -> "ConvexPolytope":
        """Build a polytope from ``A x <= b``, normalizing the rows."""
        a = np.asarray(a, dtype=float)
        b = np.asarray(b, dtype=float)
        norms = np.linalg.norm(a, axis=1)
        if not norms.all():
            raise e.DomainError("null half-space normal")
        return cls(a / norms[:, None], b / norms)

    @classmethod
    def cube(
        cls, dim: int, lo: float = 0.0, hi: float = 1.0
    ) -> "ConvexPolytope":
        eye = np.eye(dim)
        return cls(
            np.concatenate([eye, -eye]),
            np.concatenate([np.full(dim, hi), np.full(dim, -lo)]),
        )

    @classmethod
    def simplex(cls, dim: int, size: float = 1.0) -> "ConvexPolytope":
        """The simplex ``x_i >= 0, sum(x) <= size``."""
        return cls(
            np.concatenate([-np.eye(dim), np.full((1, dim), dim ** -0.5)]),
            np.concatenate([np.zeros(dim), [size * dim ** -0.5]]),
        )

    def __repr__(self) -> str:
        return f"ConvexPolytope(dim={self.dim}, facets={len(self.offsets)})"

    @property
    def halfspaces(self) -> List[Tuple[Array, float]]:
        return [(a, float(b)) for a, b in zip(self.normals, self.offsets)]

    @property
    def chebyshev_center(self) -> Array:
        return self._cheby[0]

    @property
    def chebyshev_radius(self) -> float:
        return self._cheby[1]

    @property
    def bounding_box(self) -> Tuple[Array, Array]:
        return self._bbox

    @property
    def diameter(self) -> float:
        lo, hi = self._bbox
        return float(np.linalg.norm(hi - lo))

    def describe(self) -> Dict[str, Any]:
        return {
            "type": "polytope",
            "halfspaces": [
                {"a": a.tolist(), "b": b} for a, b in self.halfspaces
            ],
        }

    def distance(self, x: PointLike) -> Any:
        pts, single = self._points(x)
        d = np.min(self.offsets - pts @ self.normals.T, axis=1)
        return d[0] if single else d

    def active_facets(self, x: PointLike) -> List[int]:
        """Return the indices of the facets containing the point *x*."""
        pts, single = self._points(x)
        res = np.abs(self.offsets - pts[0] @ self.normals.T)
        return [int(i) for i in np.nonzero(res <= self.boundary_tol)[0]]

    def _chebyshev_ball(self) -> Tuple[Array, float]:
        # maximize r s.t. <a_i, x> + r <= b_i
        n = self.dim
        c = np.zeros(n + 1)
        c[-1] = -1.0
        a_ub = np.hstack([self.normals, np.ones((len(self.offsets), 1))])
        bounds = [(None, None)] * n + [(0, None)]
        res = optimize.linprog(
            c, A_ub=a_ub, b_ub=self.offsets, bounds=bounds, method="highs"
        )
        if res.status == 3:
            # unbounded radius means unbounded polytope
            raise e.DomainError("the polytope is unbounded")
        if res.status != 0:
            raise e.DomainError(f"chebyshev ball not found: {res.message}")
        xc, r = res.x[:n], float(res.x[n])
        if r <= 0:
            raise e.DomainError(
                "the polytope has an empty interior",
                info={"quantity": "chebyshev radius", "value": r},
            )
        return xc, r

    def _bounding_box(self) -> Tuple[Array, Array]:
        n = self.dim
        lo = np.empty(n)
        hi = np.empty(n)
        for i in range(n):
            for sign, out in ((1.0, lo), (-1.0, hi)):
                c = np.zeros(n)
                c[i] = sign
                res = optimize.linprog(
                    c,
                    A_ub=self.normals,
                    b_ub=self.offsets,
                    bounds=[(None, None)] * n,
                    method="highs",
                )
                if res.status != 0:
                    raise e.DomainError(
                        "the polytope is unbounded",
                        info={"quantity": "bounding box axis", "value": i},
                    )
                out[i] = res.x[i]
        return lo, hi

    @property
    def vertices(self) -> Array:
        if self._vertices is None:
            self._vertices = _find_vertices(self)
        return self._vertices

    @property
    def facets(self) -> List[Facet]:
        if self._facets is None:
            self._facets = _find_facets(self)
        return self._facets

    def facet_boundary(self, facet: Facet) -> List[Array]:
        """
        Triangulate the relative boundary of a facet.

        Return a list of (n-1, n) arrays, the vertices of (n-2)-simplices
        covering the facet boundary.
        """
        verts = facet.vertices
        n = self.dim
        basis = linalg.null_space(facet.normal[None, :])
        proj = (verts - facet.centroid) @ basis
        if n == 2:
            lo, hi = np.argmin(proj[:, 0]), np.argmax(proj[:, 0])
            return [verts[[lo]], verts[[hi]]]

        hull = spatial.ConvexHull(proj)
        return [verts[s] for s in hull.simplices]

    def facet_simplices(self, facet: Facet) -> List[Array]:
        """
        Triangulate a facet as a cone from its centroid.

        Return a list of (n, n) arrays, the vertices of (n-1)-simplices.
        """
        c = facet.centroid
        return [np.vstack([c, b]) for b in self.facet_boundary(facet)]

    def cone_simplices(self, apex: PointLike) -> List[Array]:
        """
        Decompose the polytope in simplices sharing the vertex *apex*.

        *apex* must be in the closed polytope. Return a list of (n+1, n)
        arrays with the apex first; degenerate cones on the facets
        containing the apex are skipped.
        """
        apex = np.asarray(apex, dtype=float)
        if not self.contains(apex):
            raise e.DomainError("the cone apex must be in the polytope")
        rv = []
        for f in self.facets:
            height = f.offset - f.normal @ apex
            if height <= self.boundary_tol:
                continue
            for s in self.facet_simplices(f):
                rv.append(np.vstack([apex, s]))
        return rv

    @property
    def volume(self) -> float:
        return sum(
            simplex_measure(s[1:] - s[0]) for s in self.cone_simplices(
                self.chebyshev_center
            )
        )

    @property
    def area(self) -> float:
        return sum(
            simplex_measure(s[1:] - s[0])
            for f in self.facets
            for s in self.facet_simplices(f)
        )


def _find_vertices(poly: ConvexPolytope) -> Array:
    hs = np.hstack([poly.normals, -poly.offsets[:, None]])
    hsi = spatial.HalfspaceIntersection(hs, poly.chebyshev_center)
    pts = hsi.intersections
    scale = max(poly.diameter, 1.0)
    keys = np.round(pts / scale, 9)
    _, idx = np.unique(keys, axis=0, return_index=True)
    rv = pts[np.sort(idx)]
    rv.setflags(write=False)
    return rv


def _find_facets(poly: ConvexPolytope) -> List[Facet]:
    verts = poly.vertices
    tol = 1e-9 * max(poly.diameter, 1.0)
    rv = []
    for i, (a, b) in enumerate(poly.halfspaces):
        on = np.abs(verts @ a - b) <= tol
        fv = verts[on]
        if len(fv) < poly.dim:
            continue
        rank = np.linalg.matrix_rank(fv[1:] - fv[0], tol=tol)
        if rank < poly.dim - 1:
            logger.debug("half-space %s touches the polytope in a face", i)
            continue
        rv.append(Facet(i, a, b, fv))
    return rv


def simplex_measure(edges: Array) -> float:
    """
    Measure of the simplex spanned by the rows of *edges* (k, n).
    """
    k = edges.shape[0]
    if k == 0:
        return 1.0
    gram = edges @ edges.T
    det = max(float(np.linalg.det(gram)), 0.0)
    return float(np.sqrt(det)) / float(math.factorial(k))


class Polygon2D(Domain):
    """
    A simple polygon, possibly non-convex.

    Vertices are stored counterclockwise. No surface quadrature is exposed:
    the polygon is used by the grid solver and by the convexity probe.
    """

    dim = 2

    def __init__(
        self,
        vertices: Union[Array, Sequence[Sequence[float]]],
        rtol: float = BOUNDARY_RTOL,
    ):
        super().__init__(rtol)
        v = np.array(vertices, dtype=float)
        if v.ndim != 2 or v.shape[1] != 2 or len(v) < 3:
            raise e.DomainError("a polygon needs at least 3 2D vertices")
        if not np.isfinite(v).all():
            raise e.DomainError("non-finite polygon vertices")
        if _signed_area(v) < 0:
            v = v[::-1].copy()
        v.setflags(write=False)
        self.vertices = v
        self._check_simple()

    @classmethod
    def square(cls, lo: float = 0.0, hi: float = 1.0) -> "Polygon2D":
        return cls([[lo, lo], [hi, lo], [hi, hi], [lo, hi]])

    @classmethod
    def l_shape(cls) -> "Polygon2D":
        """The L-shape with the reentrant corner in (1, 1)."""
        return cls([[0, 0], [2, 0], [2, 1], [1, 1], [1, 2], [0, 2]])

    def __repr__(self) -> str:
        return f"Polygon2D({self.vertices.tolist()})"

    @property
    def area(self) -> float:
        return _signed_area(self.vertices)

    @property
    def diameter(self) -> float:
        d = self.vertices[:, None, :] - self.vertices[None, :, :]
        return float(np.sqrt((d ** 2).sum(axis=2)).max())

    @property
    def bounding_box(self) -> Tuple[Array, Array]:
        return self.vertices.min(axis=0), self.vertices.max(axis=0)

    @property
    def edges(self) -> List[Tuple[Array, Array]]:
        v = self.vertices
        return [(v[i], v[(i + 1) % len(v)]) for i in range(len(v))]

    def edge_normal(self, i: int) -> Array:
        p, q = self.edges[i]
        t = q - p
        return np.array([t[1], -t[0]]) / np.linalg.norm(t)

    @property
    def convex(self) -> bool:
        return not self.reentrant_corners()

    def reentrant_corners(self) -> List[int]:
        """Return the indices of the vertices with an interior angle > pi."""
        v = self.vertices
        k = len(v)
        rv = []
        for i in range(k):
            a = v[i] - v[i - 1]
            b = v[(i + 1) % k] - v[i]
            if a[0] * b[1] - a[1] * b[0] < 0:
                rv.append(i)
        return rv

    def describe(self) -> Dict[str, Any]:
        return {"type": "polygon2d", "vertices": self.vertices.tolist()}

    def distance(self, x: PointLike) -> Any:
        pts, single = self._points(x)
        dist = np.full(len(pts), np.inf)
        for p, q in self.edges:
            dist = np.minimum(dist, _segment_distance(pts, p, q))
        inside = self._even_odd(pts)
        d = np.where(inside, dist, -dist)
        return d[0] if single else d

    def _even_odd(self, pts: Array) -> Array:
        inside = np.zeros(len(pts), dtype=bool)
        x, y = pts[:, 0], pts[:, 1]
        for p, q in self.edges:
            crosses = (p[1] > y) != (q[1] > y)
            with np.errstate(divide="ignore", invalid="ignore"):
                xc = p[0] + (y - p[1]) * (q[0] - p[0]) / (q[1] - p[1])
            inside ^= crosses & (x < xc)
        return inside

    def _check_simple(self) -> None:
        edges = self.edges
        k = len(edges)
        for i in range(k):
            for j in range(i + 1, k):
                if j == i + 1 or (i == 0 and j == k - 1):
                    continue
                if _segments_intersect(*edges[i], *edges[j]):
                    raise e.DomainError(
                        f"the polygon is self-intersecting"
                        f" (edges {i} and {j})"
                    )

    def boundary_patches(self, count: int) -> List[BoundaryPatch]:
        """
        Sample the polygon edges with about *count* midpoint patches.
        """
        lengths = np.array(
            [np.linalg.norm(q - p) for p, q in self.edges], dtype=float
        )
        total = lengths.sum()
        rv = []
        for i, (p, q) in enumerate(self.edges):
            m = max(1, int(round(count * lengths[i] / total)))
            t = (np.arange(m) + 0.5) / m
            normal = self.edge_normal(i)
            for ti in t:
                rv.append(
                    BoundaryPatch(p + ti * (q - p), normal, lengths[i] / m)
                )
        return rv


def _signed_area(v: Array) -> float:
    x, y = v[:, 0], v[:, 1]
    return 0.5 * float(np.dot(x, np.roll(y, -1)) - np.dot(np.roll(x, -1), y))


def _segment_distance(pts: Array, p: Array, q: Array) -> Array:
    d = q - p
    t = np.clip(((pts - p) @ d) / (d @ d), 0.0, 1.0)
    proj = p + t[:, None] * d
    return np.linalg.norm(pts - proj, axis=1)


def _segments_intersect(p1: Array, p2: Array, q1: Array, q2: Array) -> bool:
    def orient(a: Array, b: Array, c: Array) -> float:
        return float(
            (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
        )

    def on_segment(a: Array, b: Array, c: Array) -> bool:
        return bool(
            min(a[0], b[0]) <= c[0] <= max(a[0], b[0])
            and min(a[1], b[1]) <= c[1] <= max(a[1], b[1])
        )

    d1 = orient(q1, q2, p1)
    d2 = orient(q1, q2, p2)
    d3 = orient(p1, p2, q1)
    d4 = orient(p1, p2, q2)
    if ((d1 > 0 and d2 < 0) or (d1 < 0 and d2 > 0)) and (
        (d3 > 0 and d4 < 0) or (d3 < 0 and d4 > 0)
    ):
        return True
    if d1 == 0 and on_segment(q1, q2, p1):
        return True
    if d2 == 0 and on_segment(q1, q2, p2):
        return True
    if d3 == 0 and on_segment(p1, p2, q1):
        return True
    if d4 == 0 and on_segment(p1, p2, q2):
        return True
    return False


def _check_dim(dim: int) -> None:
    if not 2 <= dim <= 8:
        raise e.DomainError(
            f"dimension {dim} not supported: it must be in 2..8",
            info={"quantity": "dimension", "value": dim, "bound": 8},
        )


# Boundary sampling


class SurfaceNodes(NamedTuple):
    """Arrays of boundary points, outward normals and surface weights."""

    points: Array
    normals: Array
    weights: Array

    def patches(self) -> List[BoundaryPatch]:
        return [
            BoundaryPatch(p, n, float(w))
            for p, n, w in zip(self.points, self.normals, self.weights)
        ]


def surface_sample(
    domain: Domain,
    budget: int,
    scheme: SampleScheme = SampleScheme.GRID,
    seed: int = 0,
) -> List[BoundaryPatch]:
    """
    Sample the boundary with about *budget* weighted patches.

    The weights sum to the boundary area up to the rule error.
    """
    return surface_nodes(domain, budget, scheme, seed).patches()


def surface_nodes(
    domain: Domain,
    budget: int,
    scheme: SampleScheme = SampleScheme.GRID,
    seed: int = 0,
) -> SurfaceNodes:
    if isinstance(domain, Ball):
        return _sphere_nodes(domain, budget, scheme, seed)
    elif isinstance(domain, ConvexPolytope):
        return _polytope_nodes(domain, budget, scheme, seed)
    else:
        raise e.NotSupportedError(
            f"no surface sampling available for {type(domain).__name__}:"
            f" use Polygon2D.boundary_patches() for the convexity probe"
        )


def _sphere_nodes(
    ball: Ball, budget: int, scheme: SampleScheme, seed: int
) -> SurfaceNodes:
    n = ball.dim
    if scheme is SampleScheme.GRID:
        order = 1
        while rules.sphere_count(n, order + 1) <= budget:
            order += 1
        rule = rules.sphere_rule(n, order)
    else:
        rule = rules.sphere_qmc(n, max(1, budget // 2), seed)

    pts = ball.center + ball.radius * rule.points
    w = rule.weights * ball.radius ** (n - 1)
    return SurfaceNodes(pts, rule.points.copy(), w)


def _polytope_nodes(
    poly: ConvexPolytope, budget: int, scheme: SampleScheme, seed: int
) -> SurfaceNodes:
    n = poly.dim
    k = n - 1
    simplices = [
        (f.normal, s) for f in poly.facets for s in poly.facet_simplices(f)
    ]
    per = max(1, budget // len(simplices))
    pts, nrm, wts = [], [], []
    for i, (normal, s) in enumerate(simplices):
        if scheme is SampleScheme.GRID:
            order = max(1, int(per ** (1.0 / k)))
            rule = rules.simplex_rule(k, order)
        else:
            rule = rules.simplex_qmc(k, per, seed + i)
        edges = s[1:] - s[0]
        scale = simplex_measure(edges) * float(math.factorial(k))
        pts.append(s[0] + rule.points @ edges)
        nrm.append(np.broadcast_to(normal, (len(rule), n)))
        wts.append(rule.weights * scale)

    return SurfaceNodes(
        np.concatenate(pts), np.concatenate(nrm), np.concatenate(wts)
    )


# Convexity probes


def convexity_support(
    domain: Domain, y: PointLike, patches: Sequence[BoundaryPatch]
) -> float:
    """
    Return the minimum over *patches* of ``<x - y, N(x)>``.

    The value is nonnegative (up to rounding) when the domain is convex.
    """
    y = np.asarray(y, dtype=float)
    if domain.location(y) is not Location.BOUNDARY:
        raise e.PreconditionError(
            "the support point must lie on the boundary",
            info={"quantity": "distance", "value": float(domain.distance(y))},
        )
    if not patches:
        raise e.InterfaceError("no boundary patch given")
    pts = np.array([p.point for p in patches])
    nrm = np.array([p.normal for p in patches])
    return float(np.min(np.einsum("mi,mi->m", pts - y, nrm)))


def convexity_pairs(
    patches: Sequence[BoundaryPatch],
    max_pairs: int = 10 ** 6,
    seed: int = 0,
) -> float:
    """
    Return the minimum of ``<P - Q, N(P)>`` over pairs of boundary patches.

    All the pairs are enumerated if they are no more than *max_pairs*,
    otherwise *max_pairs* random pairs are drawn.
    """
    pts = np.array([p.point for p in patches])
    nrm = np.array([p.normal for p in patches])
    m = len(pts)
    if m < 2:
        raise e.InterfaceError("at least two boundary patches are needed")

    if m * m <= max_pairs:
        # <P, N(P)> - <Q, N(P)>
        own = np.einsum("mi,mi->m", pts, nrm)
        cross = nrm @ pts.T
        return float(np.min(own[:, None] - cross))

    rng = np.random.default_rng(seed)
    i = rng.integers(0, m, max_pairs)
    j = rng.integers(0, m, max_pairs)
    return float(np.min(np.einsum("mi,mi->m", pts[i] - pts[j], nrm[i])))


def domain_from_description(desc: Dict[str, Any]) -> Domain:
    """Build a domain from its JSON description."""
    kind = desc.get("type")
    try:
        if kind == "ball":
            return Ball(desc["center"], desc["radius"])
        elif kind == "polytope":
            hs = desc["halfspaces"]
            return ConvexPolytope([h["a"] for h in hs], [h["b"] for h in hs])
        elif kind == "polygon2d":
            return Polygon2D(desc["vertices"])
    except (KeyError, TypeError) as ex:
        raise e.InterfaceError(f"bad {kind} description: {ex}")

    raise e.InterfaceError(f"unknown domain type: {kind!r}")


def place_pole(domain: Domain, pole: Pole) -> Array:
    """
    Return a point of the given kind for the domain.

    Boundary points are a vertex, the centroid of the first facet or the
    point of the sphere on the first axis; the exterior point is at half a
    diameter from the domain.
    """
    if isinstance(domain, Ball):
        c, R = domain.center, domain.radius
        axis = np.eye(domain.dim)[0]
        if pole is Pole.BOUNDARY_SPHERE_POINT:
            return c + R * axis
        elif pole is Pole.EXTERIOR:
            return c + 2.0 * R * axis

    elif isinstance(domain, ConvexPolytope):
        if pole is Pole.BOUNDARY_VERTEX:
            lo = domain.bounding_box[0]
            verts = domain.vertices
            return verts[np.argmin(np.linalg.norm(verts - lo, axis=1))].copy()
        elif pole is Pole.BOUNDARY_FACET_CENTER:
            return domain.facets[0].centroid
        elif pole is Pole.EXTERIOR:
            lo, hi = domain.bounding_box
            return hi + 0.5 * (hi - lo)

    raise e.InterfaceError(
        f"pole {pole.value!r} not available for {type(domain).__name__}"
    )
