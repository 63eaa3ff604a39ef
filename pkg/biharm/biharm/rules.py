"""
Reference quadrature rules.

The rules in this module live on reference sets: the unit interval, the
standard simplex and the unit sphere. Mapping them to actual domains is the
job of `biharm.quadrature` and `biharm.geometry`.
"""

# Copyright (C) 2020 The biharm Team

import math
import logging
from functools import lru_cache
from typing import NamedTuple

import numpy as np
from scipy import special, stats

from . import errors as e
from .proto import Array

logger = logging.getLogger(__name__)


class Rule(NamedTuple):
    """Nodes and weights of a reference rule."""

    points: Array
    weights: Array

    def __len__(self) -> int:
        return len(self.weights)


@lru_cache(maxsize=256)
def gauss_jacobi(order: int, a: float = 0.0, b: float = 0.0) -> Rule:
    """
    Gauss rule on [0, 1] for the weight ``(1 - t)**a * t**b``.

    The rule is exact for polynomials of degree ``2 * order - 1``.
    """
    if order < 1:
        raise e.InterfaceError(f"bad rule order: {order}")
    if a <= -1 or b <= -1:
        raise e.DivergenceError(
            f"the weight (1 - t)**{a:g} * t**{b:g} is not integrable",
            info={"quantity": "jacobi exponent", "value": min(a, b)},
        )
    if a == 0 and b == 0:
        x, w = special.roots_legendre(order)
    else:
        x, w = special.roots_jacobi(order, a, b)

    t = (x + 1.0) / 2.0
    w = w / 2.0 ** (a + b + 1.0)
    t.setflags(write=False)
    w.setflags(write=False)
    return Rule(t, w)


@lru_cache(maxsize=64)
def simplex_rule(dim: int, order: int) -> Rule:
    """
    Collapsed Gauss-Jacobi rule on the simplex ``x >= 0, sum(x) <= 1``.

    The weights are positive and sum to ``1 / dim!``.
    """
    if dim == 0:
        return Rule(np.zeros((1, 0)), np.ones(1))

    factors = [
        gauss_jacobi(order, float(dim - 1 - i), 0.0) for i in range(dim)
    ]
    grids = np.meshgrid(*(f.points for f in factors), indexing="ij")
    xi = np.stack([g.ravel() for g in grids], axis=1)
    wgrids = np.meshgrid(*(f.weights for f in factors), indexing="ij")
    w = np.prod(np.stack([g.ravel() for g in wgrids], axis=1), axis=1)

    return Rule(_collapse(xi), w)


def simplex_count(dim: int, order: int) -> int:
    return order ** dim


def simplex_qmc(dim: int, size: int, seed: int) -> Rule:
    """
    Randomized low-discrepancy rule on the standard simplex.

    The unit cube points are mapped by the collapsed coordinates, whose
    jacobian is folded in the weights.
    """
    if dim == 0:
        return Rule(np.zeros((1, 0)), np.ones(1))
    xi = _sobol(dim, size, seed)
    jac = np.ones(len(xi))
    for i in range(dim):
        jac *= (1.0 - xi[:, i]) ** (dim - 1 - i)
    return Rule(_collapse(xi), jac / len(xi))


def _collapse(xi: Array) -> Array:
    # lambda_i = xi_i * prod_{j < i} (1 - xi_j)
    dim = xi.shape[1]
    lam = np.empty_like(xi)
    rest = np.ones(len(xi))
    for i in range(dim):
        lam[:, i] = xi[:, i] * rest
        rest = rest * (1.0 - xi[:, i])
    return lam


def sphere_area(dim: int, radius: float = 1.0) -> float:
    """Area of the sphere of *radius* in R^dim."""
    return 2.0 * math.pi ** (dim / 2) / math.gamma(dim / 2) * radius ** (
        dim - 1
    )


def ball_volume(dim: int, radius: float = 1.0) -> float:
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1) * radius ** dim


@lru_cache(maxsize=64)
def sphere_rule(dim: int, order: int) -> Rule:
    """
    Tensor rule on the unit sphere of R^dim.

    Built recursively: Gauss-Gegenbauer in the first coordinate, the rule of
    the lower dimensional sphere for the others, trapezoid on the circle.
    The rule is antipodally symmetric, so odd polynomials integrate to 0.
    """
    if dim < 1:
        raise e.InterfaceError(f"bad sphere dimension: {dim}")
    if dim == 1:
        return Rule(np.array([[1.0], [-1.0]]), np.ones(2))
    if dim == 2:
        m = 2 * order
        theta = 2.0 * np.pi * (np.arange(m) + 0.5) / m
        pts = np.stack([np.cos(theta), np.sin(theta)], axis=1)
        return Rule(pts, np.full(m, 2.0 * np.pi / m))

    c = (dim - 3) / 2.0
    t, wt = special.roots_jacobi(order, c, c)
    sub = sphere_rule(dim - 1, order)
    s = np.sqrt(1.0 - t ** 2)
    pts = np.concatenate(
        [
            np.repeat(t, len(sub))[:, None],
            (s[:, None, None] * sub.points[None, :, :]).reshape(
                -1, dim - 1
            ),
        ],
        axis=1,
    )
    w = (wt[:, None] * sub.weights[None, :]).ravel()
    return Rule(pts, w)


def sphere_count(dim: int, order: int) -> int:
    if dim == 1:
        return 2
    return 2 * order ** (dim - 1)


def sphere_qmc(dim: int, size: int, seed: int) -> Rule:
    """
    Antithetic randomized low-discrepancy rule on the unit sphere of R^dim.

    *size* scrambled Sobol points are mapped to the sphere through the
    gaussian inverse cdf; each point is paired to its antipode.
    """
    if dim == 1:
        return sphere_rule(1, 1)
    u = _sobol(dim, size, seed)
    g = stats.norm.ppf(u)
    norms = np.sqrt(np.einsum("mi,mi->m", g, g))
    pts = g / norms[:, None]
    pts = np.concatenate([pts, -pts])
    w = np.full(len(pts), sphere_area(dim) / len(pts))
    return Rule(pts, w)


def _sobol(dim: int, size: int, seed: int) -> Array:
    m = max(1, int(math.ceil(math.log2(max(size, 2)))))
    sampler = stats.qmc.Sobol(d=dim, scramble=True, seed=seed)
    u = sampler.random_base2(m)
    eps = np.finfo(float).eps
    return np.clip(u, eps, 1.0 - eps)
