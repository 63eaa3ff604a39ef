"""
Local energy decay and Caccioppoli scaling of biharmonic fields.

A field is either analytic (a polynomial or any `JetField` in 2D), in
which case ``T(Q, r)`` is the sector of the disk of centre *Q* between the
angles *sector*, or a `SolveResult`, in which case ``T(Q, r)`` is the part
of the disk inside the grid polygon.
"""

# Copyright (C) 2020 The biharm Team

import math
import logging
from typing import Callable, List, NamedTuple, Optional, Sequence, Tuple
from typing import Union

import numpy as np
from scipy import stats

from . import errors as e
from . import rules
from .enums import SolveMethod
from .geometry import Polygon2D
from .jets import PolyField
from .poly import MultiPoly
from .proto import Array, JetField
from .solver import DEFAULT_TOL, Grid, SolveResult, analytic_data
from .solver import cell_gradients, local_clamping, nodal_hessian
from .solver import random_cubic, solve_grid

logger = logging.getLogger(__name__)

Field = Union[JetField, MultiPoly, SolveResult]
Sector = Tuple[float, float]

# a function of the points (m, 2) and of their distances from the centre
Density = Callable[[Array, Array], Array]

# the upper half plane seen from a point of the x axis
HALF_PLANE: Sector = (0.0, math.pi)

# smallest radius, in grid steps, at which a grid energy is measured
MIN_CELLS = 4

MONOTONE_RTOL = 1e-12

DEFAULT_ORDER = 16


class DecayFit(NamedTuple):
    """
    The energies on dyadic disks and the fitted decay exponent.

    *window* are the indices of the radii used in the fit.
    """

    q: List[float]
    radii: List[float]
    energies: List[float]
    exponent: float
    stderr: float
    window: List[int]

    def log_table(self) -> List[Tuple[float, float]]:
        """Return the pairs ``(log r, log E)`` of the positive energies."""
        return [
            (math.log(r), math.log(en))
            for r, en in zip(self.radii, self.energies)
            if en > 0
        ]


def dyadic_radii(radius: float, count: int) -> List[float]:
    """Return the radii ``radius * 2**-j`` for j in ``0 .. count - 1``."""
    if radius <= 0 or count < 1:
        raise e.InterfaceError(
            f"bad dyadic radii: radius {radius:g}, count {count}"
        )
    return [radius * 2.0 ** -j for j in range(count)]


def local_energy(
    v: Field,
    q: Sequence[float],
    radii: Sequence[float],
    sector: Sector = HALF_PLANE,
    order: int = DEFAULT_ORDER,
) -> List[float]:
    """
    Return ``int_T(q, r) |grad v|^2`` for every radius in *radii*.

    The radii must be decreasing; the energies are checked to be
    non-increasing.
    """
    radii = list(radii)
    if any(b >= a for a, b in zip(radii, radii[1:])):
        raise e.InterfaceError("the radii must be strictly decreasing")

    if isinstance(v, SolveResult):
        centres, grads = cell_gradients(v)
        _check_resolved(v.grid, radii[-1])
        dist = np.linalg.norm(centres - np.asarray(q, dtype=float), axis=1)
        dens = np.einsum("ij,ij->i", grads, grads) * v.grid.h ** 2
        rv = [math.fsum(dens[dist < r]) for r in radii]
    else:
        field = _as_field(v)

        def density(x: Array, rho: Array) -> Array:
            g = field.jet(x).grad
            return np.einsum("ij,ij->i", g, g)

        rv = [_polar(density, q, 0.0, r, sector, order) for r in radii]

    _check_monotone(rv)
    return rv


def fit_exponent(
    q: Sequence[float],
    radii: Sequence[float],
    energies: Sequence[float],
    window: Optional[Sequence[int]] = None,
) -> DecayFit:
    """
    Fit ``E = C r**lambda`` by least squares on the logarithms.

    The default window drops the largest and the smallest radius.
    """
    count = len(radii)
    if count < 4:
        raise e.InterfaceError(
            f"at least 4 radii are needed to fit an exponent, got {count}"
        )
    if window is None:
        window = range(1, count - 1)
    window = list(window)

    r = np.array([radii[i] for i in window])
    en = np.array([energies[i] for i in window])
    if (en <= 0).any():
        raise e.PreconditionError(
            "non-positive energy in the fit window",
            info={"quantity": "energy", "value": float(en.min()), "bound": 0},
        )

    fit = stats.linregress(np.log(r), np.log(en))
    stderr = float(fit.stderr) if np.isfinite(fit.stderr) else 0.0
    logger.debug(
        "decay at %s: exponent %.4f +- %.2g", list(q), fit.slope, stderr
    )
    return DecayFit(
        q=[float(c) for c in q],
        radii=[float(x) for x in radii],
        energies=[float(x) for x in energies],
        exponent=float(fit.slope),
        stderr=stderr,
        window=window,
    )


def decay_fit(
    v: Field,
    q: Sequence[float],
    radius: float,
    count: int = 5,
    window: Optional[Sequence[int]] = None,
    sector: Sector = HALF_PLANE,
) -> DecayFit:
    """Measure the energies on dyadic disks around *q* and fit them."""
    radii = dyadic_radii(radius, count)
    energies = local_energy(v, q, radii, sector)
    return fit_exponent(q, radii, energies, window)


def caccioppoli_check(
    v: Field,
    q: Sequence[float],
    r: float,
    sector: Sector = HALF_PLANE,
    order: int = DEFAULT_ORDER,
) -> float:
    """
    Return the ratio of the two sides of the Caccioppoli inequality::

        (r**-2 int_T(r) |Dv|^2 + int_T(r) |D2v|^2)
            / (r**-4 int_T(2r) - T(r) v^2)
    """
    if r <= 0:
        raise e.InterfaceError(f"bad radius: {r:g}")

    if isinstance(v, SolveResult):
        grad2, hess2, val2 = _grid_caccioppoli(v, q, r)
    else:
        field = _as_field(v)

        def grad_density(x: Array, rho: Array) -> Array:
            g = field.jet(x).grad
            return np.einsum("ij,ij->i", g, g)

        def hess_density(x: Array, rho: Array) -> Array:
            hs = field.jet(x).hess
            return np.einsum("ijk,ijk->i", hs, hs)

        def value_density(x: Array, rho: Array) -> Array:
            return field.jet(x).value ** 2  # type: ignore

        grad2 = _polar(grad_density, q, 0.0, r, sector, order)
        hess2 = _polar(hess_density, q, 0.0, r, sector, order)
        val2 = _polar(value_density, q, r, 2 * r, sector, order)

    den = val2 / r ** 4
    if den <= 0.0:
        raise e.PreconditionError(
            "the field vanishes on the annulus",
            info={"quantity": "denominator", "value": den, "bound": 0},
        )
    return (grad2 / r ** 2 + hess2) / den


def weighted_caccioppoli(
    v: Union[JetField, MultiPoly],
    q: Sequence[float],
    r: float,
    alpha: float,
    sector: Sector = HALF_PLANE,
    order: int = DEFAULT_ORDER,
) -> float:
    """
    Return the ratio of the weighted Caccioppoli sides::

        int_T(r) (|Dv|^2 rho**(-a-2) + |D2v|^2 rho**-a)
            / int_T(2r) v^2 rho**(-a-4)

    with ``rho = |x - q|``, for ``0 <= alpha < 2``.
    """
    if not 0 <= alpha < 2:
        raise e.PreconditionError(
            f"the weighted check needs 0 <= alpha < 2, got {alpha:g}",
            info={"quantity": "alpha", "value": alpha, "bound": 2},
        )
    if r <= 0:
        raise e.InterfaceError(f"bad radius: {r:g}")
    field = _as_field(v)

    def num(x: Array, rho: Array) -> Array:
        jet = field.jet(x)
        g2 = np.einsum("ij,ij->i", jet.grad, jet.grad)
        h2 = np.einsum("ijk,ijk->i", jet.hess, jet.hess)
        return g2 / rho ** 2 + h2  # type: ignore

    def den(x: Array, rho: Array) -> Array:
        return field.jet(x).value ** 2 / rho ** 4  # type: ignore

    top = _polar(num, q, 0.0, r, sector, order, alpha)
    bottom = _polar(den, q, 0.0, 2 * r, sector, order, alpha)
    if bottom <= 0.0:
        raise e.PreconditionError(
            "the field vanishes near the point",
            info={"quantity": "denominator", "value": bottom, "bound": 0},
        )
    return top / bottom


# Corner experiment on the L-shape


class CornerExperiment(NamedTuple):
    seed: int
    h: float
    reentrant: DecayFit
    convex: List[DecayFit]
    ordered: bool


REENTRANT_CORNER = (1.0, 1.0)
CONVEX_CORNERS = ((2.0, 0.0),)


def corner_experiment(
    seed: int,
    h: float = 1.0 / 128,
    radius: float = 0.5,
    count: int = 5,
    method: SolveMethod = SolveMethod.CG,
    tol: float = DEFAULT_TOL,
    convex_corners: Sequence[Sequence[float]] = CONVEX_CORNERS,
) -> CornerExperiment:
    """
    Compare the energy decay at the reentrant and at convex corners.

    The L-shape is solved with the data of a random cubic, set to zero
    within *radius* of the corners studied.
    """
    polygon = Polygon2D.l_shape()
    grid = Grid(polygon, h)
    corners = [REENTRANT_CORNER] + [tuple(c) for c in convex_corners]
    data = analytic_data(grid, random_cubic(seed))
    data = local_clamping(grid, data, corners, radius)
    result = solve_grid(grid, data, tol=tol, method=method)

    reentrant = decay_fit(result, REENTRANT_CORNER, radius, count)
    convex = [decay_fit(result, c, radius, count) for c in convex_corners]
    ordered = all(reentrant.exponent < f.exponent for f in convex)
    logger.info(
        "corner experiment seed %s: reentrant %.3f, convex %s",
        seed,
        reentrant.exponent,
        ", ".join(f"{f.exponent:.3f}" for f in convex),
    )
    return CornerExperiment(seed, h, reentrant, convex, ordered)


# Internals


def _as_field(v: Union[JetField, MultiPoly]) -> JetField:
    if isinstance(v, MultiPoly):
        v = PolyField(v)
    if v.dim != 2:
        raise e.DomainError(
            f"the decay measures are in 2D, got a field in {v.dim}D",
            info={"quantity": "dimension", "value": v.dim, "bound": 2},
        )
    return v


def _polar(
    density: Density,
    q: Sequence[float],
    r0: float,
    r1: float,
    sector: Sector,
    order: int,
    alpha: float = 0.0,
) -> float:
    """
    Integrate ``density * rho**-alpha`` on the sector between *r0* and *r1*.

    With ``r0 = 0`` the radial rule is Gauss-Jacobi for ``rho**(1-alpha)``,
    otherwise Gauss-Legendre.
    """
    th0, th1 = sector
    ang = rules.gauss_jacobi(order)
    theta = th0 + (th1 - th0) * ang.points
    wt = (th1 - th0) * ang.weights

    if r0 == 0.0:
        rad = rules.gauss_jacobi(order, 0.0, 1.0 - alpha)
        rho = r1 * rad.points
        wr = r1 ** (2.0 - alpha) * rad.weights
    else:
        rad = rules.gauss_jacobi(order)
        rho = r0 + (r1 - r0) * rad.points
        wr = (r1 - r0) * rad.weights * rho ** (1.0 - alpha)

    rr, tt = np.meshgrid(rho, theta, indexing="ij")
    ww = np.outer(wr, wt)
    pts = np.asarray(q, dtype=float) + np.stack(
        [rr * np.cos(tt), rr * np.sin(tt)], axis=-1
    ).reshape(-1, 2)
    vals = density(pts, rr.ravel())
    return math.fsum((ww.ravel() * vals).tolist())


def _grid_caccioppoli(
    v: SolveResult, q: Sequence[float], r: float
) -> Tuple[float, float, float]:
    grid = v.grid
    _check_resolved(grid, r)
    h2 = grid.h ** 2
    qa = np.asarray(q, dtype=float)

    centres, grads = cell_gradients(v)
    dist = np.linalg.norm(centres - qa, axis=1)
    grad2 = math.fsum((np.einsum("ij,ij->i", grads, grads) * h2)[dist < r])

    pts = grid.points
    dist = np.linalg.norm(pts - qa, axis=-1)
    hess = nodal_hessian(v)
    sel = grid.interior & (dist < r)
    hess2 = math.fsum((np.einsum("ijk,ijk->i", hess[sel], hess[sel]) * h2))

    sel = grid.closed & (dist >= r) & (dist < 2 * r)
    val2 = math.fsum((v.values[sel] ** 2 * h2).tolist())
    return grad2, hess2, val2


def _check_resolved(grid: Grid, r: float) -> None:
    if r < MIN_CELLS * grid.h:
        raise e.ResolutionError(
            f"radius {r:g} under-resolved by the grid step {grid.h:g}",
            info={"quantity": "radius", "value": r, "bound": 4 * grid.h},
        )


def _check_monotone(energies: Sequence[float]) -> None:
    for j, (a, b) in enumerate(zip(energies, energies[1:])):
        if b > a + MONOTONE_RTOL * abs(a):
            raise e.InternalError(
                f"the energy increased between radii {j} and {j + 1}",
                info={"quantity": "energy", "value": b, "bound": a},
            )
