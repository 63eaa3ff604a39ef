"""
Finite differences solver for the biharmonic equation with clamped data.

The domain is a polygon whose vertices lie on the grid lines. The unknowns
are the values at the interior nodes; the values on the boundary nodes are
prescribed, and the gradient prescribed on the boundary is enforced by
ghost nodes outside the domain::

    u(ghost) = u(inner) + 2 h <grad u(middle), d>

where *middle* is the boundary node between the inner node and the ghost
and *d* is the unit vector from the inner node to the ghost.
"""

# Copyright (C) 2020 The biharm Team

import logging
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple
from typing import Union

import numpy as np
from scipy import ndimage, sparse
from scipy.sparse import linalg as splinalg

from . import errors as e
from .enums import SolveMethod
from .geometry import Polygon2D
from .jets import PolyField
from .poly import MultiPoly
from .proto import Array

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-10
DIRECT_MAX_NODES = 512 * 512

# kinds of grid nodes
EXTERIOR = 0
BOUNDARY = 1
INTERIOR = 2

# the 13 points stencil of h**4 times the bilaplacian
STENCIL: List[Tuple[int, int, float]] = [(0, 0, 20.0)]
STENCIL += [(di, dj, -8.0) for di, dj in ((1, 0), (-1, 0), (0, 1), (0, -1))]
STENCIL += [(di, dj, 2.0) for di in (1, -1) for dj in (1, -1)]
STENCIL += [(di, dj, 1.0) for di, dj in ((2, 0), (-2, 0), (0, 2), (0, -2))]


class Grid:
    """
    A uniform grid covering a polygon, with the nodes classified.

    Arrays are indexed ``[j, i]``, the node ``(x0 + i h, y0 + j h)``. The
    grid extends two cells beyond the polygon bounding box, to host the
    ghost nodes.
    """

    def __init__(self, polygon: Polygon2D, h: float):
        if h <= 0:
            raise e.ResolutionError(f"bad grid spacing: {h}")
        self.polygon = polygon
        self.h = float(h)

        lo, hi = polygon.bounding_box
        steps = (polygon.vertices - lo) / h
        if np.max(np.abs(steps - np.round(steps))) > 1e-9:
            raise e.ResolutionError(
                f"the polygon vertices are not on the grid of step {h:g}",
                info={"quantity": "h", "value": h},
            )

        self.origin = lo - 2 * h
        nx, ny = np.round((hi - lo) / h).astype(int) + 5
        self.shape = (int(ny), int(nx))
        xs = self.origin[0] + h * np.arange(nx)
        ys = self.origin[1] + h * np.arange(ny)
        self.x, self.y = np.meshgrid(xs, ys)

        dist = polygon.distance(self.points.reshape(-1, 2)).reshape(self.shape)
        kinds = np.full(self.shape, EXTERIOR, dtype=np.int8)
        on = np.abs(dist) <= 1e-9 * h
        kinds[on] = BOUNDARY
        kinds[(dist > 0) & ~on] = INTERIOR
        self.kinds = kinds

        labels, count = ndimage.label(self.interior)
        if count != 1:
            raise e.DomainError(
                f"the grid interior has {count} connected components",
                info={"quantity": "components", "value": count, "bound": 1},
            )
        logger.debug(
            "grid h=%g: %s interior nodes, %s boundary nodes",
            h,
            int(self.interior.sum()),
            int(self.boundary.sum()),
        )

    def __repr__(self) -> str:
        return (
            f"<Grid h={self.h:g} shape={self.shape}"
            f" interior={int(self.interior.sum())}>"
        )

    @property
    def points(self) -> Array:
        """The nodes coordinates, shape (ny, nx, 2)."""
        return np.stack([self.x, self.y], axis=-1)

    @property
    def interior(self) -> Array:
        return self.kinds == INTERIOR  # type: ignore

    @property
    def boundary(self) -> Array:
        return self.kinds == BOUNDARY  # type: ignore

    @property
    def closed(self) -> Array:
        return self.kinds != EXTERIOR  # type: ignore

    def locate(self, point: Sequence[float]) -> Tuple[int, int]:
        """Return the index ``(j, i)`` of the node nearest to *point*."""
        ij = np.round((np.asarray(point) - self.origin) / self.h).astype(int)
        return int(ij[1]), int(ij[0])


class BoundaryData(NamedTuple):
    """Values and gradients prescribed on the boundary nodes."""

    value: Array  # (ny, nx)
    grad: Array  # (ny, nx, 2)


PointsFunction = Callable[[Array], Tuple[Array, Array]]


def clamped_data(grid: Grid) -> BoundaryData:
    """Return zero value and gradient on the whole boundary."""
    return BoundaryData(np.zeros(grid.shape), np.zeros(grid.shape + (2,)))


def function_data(grid: Grid, func: PointsFunction) -> BoundaryData:
    """
    Return the data given by *func* on the boundary nodes.

    *func* receives an (m, 2) array of points and returns the values (m,)
    and the gradients (m, 2).
    """
    rv = clamped_data(grid)
    mask = grid.boundary
    vals, grads = func(grid.points[mask])
    rv.value[mask] = vals
    rv.grad[mask] = grads
    return rv


def analytic_data(
    grid: Grid, field: Union[MultiPoly, PolyField]
) -> BoundaryData:
    """Return the value and the gradient of a polynomial field."""
    if isinstance(field, MultiPoly):
        field = PolyField(field)

    def func(x: Array) -> Tuple[Array, Array]:
        jet = field.jet(x)
        return jet.value, jet.grad

    return function_data(grid, func)


def local_clamping(
    grid: Grid,
    data: BoundaryData,
    corners: Sequence[Sequence[float]],
    radius: float,
) -> BoundaryData:
    """
    Return *data* set to zero on the boundary near the given points.

    The boundary nodes closer than *radius* to any of *corners* get zero
    value and gradient.
    """
    value = data.value.copy()
    grad = data.grad.copy()
    pts = grid.points
    for c in corners:
        near = np.linalg.norm(pts - np.asarray(c), axis=-1) < radius
        near &= grid.boundary
        value[near] = 0.0
        grad[near] = 0.0
    return BoundaryData(value, grad)


def random_cubic(seed: int, scale: float = 1.0) -> MultiPoly:
    """Return a cubic in 2 variables with random normal coefficients."""
    rng = np.random.default_rng(seed)
    terms = {
        (i, j): scale * rng.standard_normal()
        for i in range(4)
        for j in range(4 - i)
    }
    return MultiPoly(2, terms)


class System(NamedTuple):
    matrix: sparse.csr_matrix
    rhs: Array
    index: Array  # (ny, nx), unknown number or -1
    grid: Grid
    data: BoundaryData


def assemble(
    grid: Grid,
    data: BoundaryData,
    source: Optional[Callable[[Array], Array]] = None,
) -> System:
    """
    Assemble the linear system of the discrete clamped problem.

    The matrix is symmetric positive definite; *source* is the right side
    of the bilaplacian equation, zero by default.
    """
    h = grid.h
    inv = 1.0 / h ** 4
    kinds = grid.kinds
    jj, ii = np.nonzero(grid.interior)
    size = len(jj)
    index = np.full(grid.shape, -1, dtype=np.int64)
    index[jj, ii] = np.arange(size)

    rhs = np.zeros(size)
    if source is not None:
        rhs += source(grid.points[jj, ii])

    rows: List[Array] = []
    cols: List[Array] = []
    vals: List[Array] = []
    own = np.arange(size)
    for di, dj, c in STENCIL:
        nj, ni = jj + dj, ii + di
        kind = kinds[nj, ni]

        sel = kind == INTERIOR
        rows.append(own[sel])
        cols.append(index[nj[sel], ni[sel]])
        vals.append(np.full(sel.sum(), c * inv))

        sel = kind == BOUNDARY
        rhs[sel] -= c * inv * data.value[nj[sel], ni[sel]]

        sel = kind == EXTERIOR
        if not sel.any():
            continue
        if abs(di) + abs(dj) != 2 or di * dj != 0:
            p = grid.points[jj[sel][0], ii[sel][0]]
            raise e.ResolutionError(
                f"the node {p.tolist()} has an exterior neighbour at"
                f" ({di}, {dj}): the grid is too coarse",
                info={"quantity": "h", "value": h},
            )
        mj, mi = jj[sel] + dj // 2, ii[sel] + di // 2
        if (kinds[mj, mi] != BOUNDARY).any():
            raise e.ResolutionError(
                "a ghost node is not across a boundary node:"
                " the grid is too coarse",
                info={"quantity": "h", "value": h},
            )
        d = np.array([di, dj], dtype=float) / 2.0
        gd = data.grad[mj, mi] @ d
        # u(ghost) = u(inner) + 2 h <grad u(middle), d>
        rows.append(own[sel])
        cols.append(own[sel])
        vals.append(np.full(sel.sum(), c * inv))
        rhs[sel] -= c * inv * 2.0 * h * gd

    matrix = sparse.coo_matrix(
        (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
        shape=(size, size),
    ).tocsr()
    return System(matrix, rhs, index, grid, data)


def stencil_apply(values: Array, h: float) -> Array:
    """
    Apply the 13 points bilaplacian to a nodal array.

    The result is NaN where any node of the stencil is missing or NaN.
    """
    ny, nx = values.shape
    rv = np.full(values.shape, np.nan)
    acc = np.zeros((ny - 4, nx - 4))
    for di, dj, c in STENCIL:
        acc = acc + c * values[2 + dj : ny - 2 + dj, 2 + di : nx - 2 + di]
    rv[2:-2, 2:-2] = acc / h ** 4
    return rv


class CGResult(NamedTuple):
    x: Array
    iterations: int
    converged: bool
    residuals: List[float]
    energies: List[float]


def conjugate_gradient(
    matrix: sparse.spmatrix,
    rhs: Array,
    tol: float = DEFAULT_TOL,
    maxiter: Optional[int] = None,
) -> CGResult:
    """
    Solve a symmetric positive definite system by Jacobi preconditioned CG.

    Record the relative residual and the energy ``x A x / 2 - b x`` at every
    iteration. The energy must decrease: `InternalError` is raised if it
    doesn't, which means that the matrix is not positive definite.
    """
    size = len(rhs)
    maxiter = maxiter or 10 * size
    x = np.zeros(size)
    bnorm = float(np.linalg.norm(rhs))
    if bnorm == 0.0:
        return CGResult(x, 0, True, [0.0], [0.0])

    minv = 1.0 / matrix.diagonal()
    r = rhs.copy()
    z = minv * r
    p = z.copy()
    rz = float(r @ z)
    residuals = [1.0]
    energies = [0.0]

    converged = False
    k = 0
    for k in range(1, maxiter + 1):
        ap = matrix @ p
        pap = float(p @ ap)
        if pap <= 0.0:
            raise e.InternalError(
                "the system matrix is not positive definite",
                info={"quantity": "pAp", "value": pap},
            )
        a = rz / pap
        x += a * p
        r -= a * ap

        residuals.append(float(np.linalg.norm(r)) / bnorm)
        # with A x = b - r
        energies.append(-0.5 * float(x @ (rhs + r)))
        if energies[-1] > energies[-2] + 1e-12 * abs(energies[-2]):
            raise e.InternalError(
                f"the CG energy increased at iteration {k}",
                info={
                    "quantity": "energy",
                    "value": energies[-1],
                    "bound": energies[-2],
                },
            )

        if residuals[-1] <= tol:
            converged = True
            break

        z = minv * r
        rz_new = float(r @ z)
        p = z + (rz_new / rz) * p
        rz = rz_new

    if not converged:
        logger.warning(
            "CG not converged after %s iterations: residual %.3g",
            k,
            residuals[-1],
        )
    return CGResult(x, k, converged, residuals, energies)


class SolveResult(NamedTuple):
    """
    The solution on the grid nodes (NaN outside the closed domain).
    """

    values: Array
    grid: Grid
    residual: float
    iterations: int
    converged: bool
    method: SolveMethod
    residuals: List[float]


def solve(
    system: System,
    tol: float = DEFAULT_TOL,
    method: SolveMethod = SolveMethod.CG,
    maxiter: Optional[int] = None,
) -> SolveResult:
    grid = system.grid
    size = len(system.rhs)
    if method is SolveMethod.DIRECT:
        if size > DIRECT_MAX_NODES:
            raise e.ResolutionError(
                f"too many unknowns for the direct solver: {size}",
                info={
                    "quantity": "unknowns",
                    "value": size,
                    "bound": DIRECT_MAX_NODES,
                },
            )
        lu = splinalg.splu(system.matrix.tocsc())
        x = lu.solve(system.rhs)
        iterations = 1
        converged = True
        residuals: List[float] = []
    else:
        cg = conjugate_gradient(system.matrix, system.rhs, tol, maxiter)
        x = cg.x
        iterations = cg.iterations
        converged = cg.converged
        residuals = cg.residuals

    bnorm = float(np.linalg.norm(system.rhs))
    res = float(np.linalg.norm(system.rhs - system.matrix @ x))
    residual = res / bnorm if bnorm else res

    values = np.full(grid.shape, np.nan)
    values[grid.boundary] = system.data.value[grid.boundary]
    values[grid.interior] = x[system.index[grid.interior]]
    logger.info(
        "solved %s unknowns with %s: %s iterations, residual %.3g",
        size,
        method.value,
        iterations,
        residual,
    )
    return SolveResult(
        values, grid, residual, iterations, converged, method, residuals
    )


def solve_grid(
    grid: Grid,
    data: BoundaryData,
    source: Optional[Callable[[Array], Array]] = None,
    tol: float = DEFAULT_TOL,
    method: SolveMethod = SolveMethod.CG,
) -> SolveResult:
    return solve(assemble(grid, data, source), tol, method)


def l2_error(result: SolveResult, exact: Union[MultiPoly, PolyField]) -> float:
    """Return the discrete L2 norm of the error on the interior nodes."""
    if isinstance(exact, MultiPoly):
        exact = PolyField(exact)
    grid = result.grid
    mask = grid.interior
    diff = result.values[mask] - exact.jet(grid.points[mask]).value
    return float(np.sqrt(grid.h ** 2 * np.sum(diff ** 2)))


def nodal_hessian(result: SolveResult) -> Array:
    """
    Return the Hessian at the interior nodes by central differences.

    The result has shape (ny, nx, 2, 2) and is NaN outside the interior.
    """
    v = result.values
    h = result.grid.h
    rv = np.full(v.shape + (2, 2), np.nan)
    c = v[1:-1, 1:-1]
    vxx = (v[1:-1, 2:] - 2 * c + v[1:-1, :-2]) / h ** 2
    vyy = (v[2:, 1:-1] - 2 * c + v[:-2, 1:-1]) / h ** 2
    vxy = (v[2:, 2:] - v[2:, :-2] - v[:-2, 2:] + v[:-2, :-2]) / (4 * h * h)
    rv[1:-1, 1:-1, 0, 0] = vxx
    rv[1:-1, 1:-1, 1, 1] = vyy
    rv[1:-1, 1:-1, 0, 1] = vxy
    rv[1:-1, 1:-1, 1, 0] = vxy
    rv[~result.grid.interior] = np.nan
    return rv


def cell_gradients(result: SolveResult) -> Tuple[Array, Array]:
    """
    Return the cell centres and the bilinear gradient at the centres.

    Only the cells with four nodes in the closed domain and the centre
    inside the polygon are returned: centres (k, 2), gradients (k, 2).
    """
    v = result.values
    grid = result.grid
    h = grid.h
    v00, v10 = v[:-1, :-1], v[:-1, 1:]
    v01, v11 = v[1:, :-1], v[1:, 1:]
    gx = ((v10 - v00) + (v11 - v01)) / (2 * h)
    gy = ((v01 - v00) + (v11 - v10)) / (2 * h)
    centres = grid.points[:-1, :-1] + h / 2
    ok = np.isfinite(gx) & np.isfinite(gy)
    inside = grid.polygon.distance(centres[ok]) > 0
    sel = np.zeros_like(ok)
    sel[ok] = inside
    return centres[sel], np.stack([gx[sel], gy[sel]], axis=1)


# Exact local solutions


class Fixture(NamedTuple):
    """A biharmonic polynomial in the upper half plane."""

    name: str
    poly: MultiPoly
    clamped: bool


def _fixture(name: str, terms: dict) -> Fixture:
    p = MultiPoly(2, terms)
    if not p.bilaplacian().is_zero():
        raise e.InternalError(f"the fixture {name} is not biharmonic")
    # v = dv/dy = 0 on y = 0 iff every monomial has y**2 as a factor
    clamped = all(exps[1] >= 2 for exps, _ in p.terms())
    return Fixture(name, p, clamped)


def half_plane_fixtures() -> List[Fixture]:
    """
    Return the biharmonic polynomials used as exact local solutions.

    Only the fixtures with *clamped* true have zero value and normal
    derivative on ``y = 0``; the others are used as manufactured solutions.
    """
    return [
        _fixture("y^2", {(0, 2): 1.0}),
        _fixture("xy^2", {(1, 2): 1.0}),
        _fixture("x^2y", {(2, 1): 1.0}),
        _fixture("x^3+xy^2", {(3, 0): 1.0, (1, 2): 1.0}),
    ]


def clamped_fixtures() -> List[Fixture]:
    return [f for f in half_plane_fixtures() if f.clamped]
