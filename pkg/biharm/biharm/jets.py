"""
Jets of exact fields and of the singular weight.

A jet collects, at a set of points, a field value with all the derivatives
the weighted identities need: gradient, Hessian, laplacian, gradient of the
laplacian, bilaplacian, and on request the full third derivatives tensor.
"""

# Copyright (C) 2020 The biharm Team

import logging
from itertools import combinations_with_replacement
from typing import Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from . import errors as e
from .poly import MultiPoly, monomials
from .proto import Array, JetField

logger = logging.getLogger(__name__)

FIELD_DEGREE_CAP = 24


class Jet(NamedTuple):
    """The derivatives of a scalar field at *m* points in dimension *n*."""

    value: Array  # (m,)
    grad: Array  # (m, n)
    hess: Array  # (m, n, n)
    lap: Array  # (m,)
    grad_lap: Array  # (m, n)
    bilap: Array  # (m,)
    third: Optional[Array] = None  # (m, n, n, n)

    def scaled(self, c: float) -> "Jet":
        return Jet(
            *(None if a is None else c * a for a in self)  # type: ignore
        )


class PolyField:
    """
    A field given by a `MultiPoly`.

    The derivative polynomials are computed once and evaluated together on
    a shared monomial basis.
    """

    def __init__(self, poly: MultiPoly):
        self.poly = poly
        self._basis: Dict[bool, Tuple[Array, Array]] = {}

    @property
    def dim(self) -> int:
        return self.poly.dim

    @property
    def degree(self) -> int:
        return self.poly.degree

    def __repr__(self) -> str:
        return f"<PolyField {self.poly}>"

    def jet(self, x: Array, third: bool = False) -> Jet:
        x = np.atleast_2d(np.asarray(x, dtype=float))
        n = self.dim
        if x.shape[1] != n:
            raise e.DomainError(
                f"points of dimension {x.shape[1]} for a field in {n}D"
            )
        exps, coefs = self._get_basis(third)
        vals = monomials(x, exps) @ coefs
        m = x.shape[0]

        # columns: value, grad (n), hess (n*n), lap, grad_lap (n), bilap
        i = 0
        value = vals[:, i]
        i += 1
        grad = vals[:, i : i + n]
        i += n
        hess = vals[:, i : i + n * n].reshape(m, n, n)
        i += n * n
        lap = vals[:, i]
        i += 1
        grad_lap = vals[:, i : i + n]
        i += n
        bilap = vals[:, i]
        i += 1
        t3 = None
        if third:
            t3 = vals[:, i : i + n ** 3].reshape(m, n, n, n)

        return Jet(value, grad, hess, lap, grad_lap, bilap, t3)

    def _get_basis(self, third: bool) -> Tuple[Array, Array]:
        if third not in self._basis:
            self._basis[third] = _stack_polys(self._derivatives(third))
        return self._basis[third]

    def _derivatives(self, third: bool) -> List[MultiPoly]:
        p = self.poly
        n = self.dim
        grad = p.gradient()
        hess: List[List[Optional[MultiPoly]]] = [[None] * n for i in range(n)]
        for i in range(n):
            for j in range(i, n):
                hess[i][j] = hess[j][i] = grad[i].deriv(j)

        lap = p.laplacian()
        rv = [p]
        rv.extend(grad)
        rv.extend(h for row in hess for h in row)  # type: ignore
        rv.append(lap)
        rv.extend(lap.gradient())
        rv.append(lap.laplacian())

        if third:
            t3: Dict[Tuple[int, ...], MultiPoly] = {}
            for idx in combinations_with_replacement(range(n), 3):
                i, j, k = idx
                t3[idx] = hess[i][j].deriv(k)  # type: ignore
            for i in range(n):
                for j in range(n):
                    for k in range(n):
                        rv.append(t3[tuple(sorted((i, j, k)))])

        return rv


class ProductField:
    """
    The product of a constant and some factor fields.

    Jets are combined exactly with the Leibniz rule, so the product is never
    expanded and its degree can exceed the polynomial degree cap.
    """

    def __init__(
        self,
        factors: Sequence[JetField],
        coef: float = 1.0,
        cap: int = FIELD_DEGREE_CAP,
    ):
        if not factors:
            raise e.InterfaceError("at least a factor is needed")
        dims = {f.dim for f in factors}
        if len(dims) != 1:
            raise e.DomainError(f"factors of different dimensions: {dims}")

        self.factors = list(factors)
        self.coef = float(coef)
        deg = self.degree
        if deg > cap:
            raise e.DegreeError(
                f"field degree {deg} exceeds the cap {cap}",
                info={"quantity": "degree", "value": deg, "bound": cap},
            )

    @property
    def dim(self) -> int:
        return self.factors[0].dim

    @property
    def degree(self) -> int:
        return sum(f.degree for f in self.factors)

    def __repr__(self) -> str:
        fs = " * ".join(repr(f) for f in self.factors)
        return f"<ProductField {self.coef:g} * {fs}>"

    def scaled(self, c: float) -> "ProductField":
        return ProductField(self.factors, self.coef * c)

    def jet(self, x: Array, third: bool = False) -> Jet:
        return self.combine([f.jet(x, third) for f in self.factors])

    def combine(self, jets: Sequence[Jet]) -> Jet:
        """Return the jet of the product given the jets of the factors."""
        rv = jets[0]
        for j in jets[1:]:
            rv = leibniz(rv, j)
        if self.coef != 1.0:
            rv = rv.scaled(self.coef)
        return rv


def shared_jets(
    fields: Sequence[JetField], x: Array, third: bool = False
) -> List[Jet]:
    """
    Evaluate the jets of several fields on the same points.

    A factor shared by more `ProductField` objects is evaluated once.
    """
    x = np.atleast_2d(np.asarray(x, dtype=float))
    memo: Dict[int, Jet] = {}

    def get(f: JetField) -> Jet:
        key = id(f)
        if key not in memo:
            if isinstance(f, ProductField):
                memo[key] = f.combine([get(g) for g in f.factors])
            else:
                memo[key] = f.jet(x, third)
        return memo[key]

    return [get(f) for f in fields]


def leibniz(a: Jet, b: Jet) -> Jet:
    """Return the jet of the product of two fields given their jets."""
    va = a.value[:, None]
    vb = b.value[:, None]
    ga, gb = a.grad, b.grad

    value = a.value * b.value
    grad = a.grad * vb + va * b.grad
    gg = ga[:, :, None] * gb[:, None, :]
    hess = (
        a.hess * vb[:, :, None]
        + gg
        + gg.transpose(0, 2, 1)
        + va[:, :, None] * b.hess
    )
    dot_g = np.einsum("mi,mi->m", ga, gb)
    lap = a.lap * b.value + 2.0 * dot_g + a.value * b.lap
    grad_lap = (
        a.grad_lap * vb
        + a.lap[:, None] * gb
        + 2.0 * np.einsum("mij,mj->mi", a.hess, gb)
        + 2.0 * np.einsum("mij,mj->mi", b.hess, ga)
        + ga * b.lap[:, None]
        + va * b.grad_lap
    )
    bilap = (
        a.bilap * b.value
        + 4.0 * np.einsum("mi,mi->m", a.grad_lap, gb)
        + 2.0 * a.lap * b.lap
        + 4.0 * np.einsum("mij,mij->m", a.hess, b.hess)
        + 4.0 * np.einsum("mi,mi->m", ga, b.grad_lap)
        + a.value * b.bilap
    )

    third = None
    if a.third is not None and b.third is not None:
        hg = np.einsum("mij,mk->mijk", a.hess, gb)
        gh = np.einsum("mi,mjk->mijk", ga, b.hess)
        third = (
            a.third * vb[:, :, None, None]
            + hg
            + hg.transpose(0, 1, 3, 2)
            + hg.transpose(0, 3, 2, 1)
            + gh
            + gh.transpose(0, 2, 1, 3)
            + gh.transpose(0, 3, 2, 1)
            + va[:, :, None, None] * b.third
        )

    return Jet(value, grad, hess, lap, grad_lap, bilap, third)


def _stack_polys(polys: Sequence[MultiPoly]) -> Tuple[Array, Array]:
    """
    Return a shared basis of exponents and the coefficients matrix.
    """
    index: Dict[Tuple[int, ...], int] = {}
    for p in polys:
        for exps, coef in p.terms():
            index.setdefault(exps, len(index))

    dim = polys[0].dim
    exps = np.array(list(index), dtype=int).reshape(-1, dim)
    if not len(exps):
        exps = np.zeros((1, dim), dtype=int)
    coefs = np.zeros((len(exps), len(polys)))
    for j, p in enumerate(polys):
        for k, coef in p.terms():
            coefs[index[k], j] = coef

    return exps, coefs


# Clamped test fields


def clamped_ball(
    center: Sequence[float], radius: float, p: Optional[MultiPoly] = None
) -> ProductField:
    """
    Return the field ``(R**2 - |x - c|**2)**2 * p(x)``.

    The field and its gradient vanish on the sphere.
    """
    defect = MultiPoly.sphere_defect(center, radius)
    p = p if p is not None else MultiPoly.constant(len(center))
    return ProductField([PolyField(defect ** 2), PolyField(p)])


def clamped_polytope(
    halfspaces: Sequence[Tuple[Sequence[float], float]],
    p: Optional[MultiPoly] = None,
) -> ProductField:
    """
    Return the field ``prod_i (b_i - <a_i, x>)**2 * p(x)``.

    The field and its gradient vanish on every facet.
    """
    factors: List[JetField] = [
        PolyField(MultiPoly.affine(a, b) ** 2) for a, b in halfspaces
    ]
    dim = factors[0].dim
    factors.append(PolyField(p if p is not None else MultiPoly.constant(dim)))
    return ProductField(factors)


def vanishing_ball(
    center: Sequence[float], radius: float, p: Optional[MultiPoly] = None
) -> ProductField:
    """
    Return the field ``(R**2 - |x - c|**2) * p(x)``, vanishing on the sphere.

    Its gradient doesn't vanish on the boundary.
    """
    defect = MultiPoly.sphere_defect(center, radius)
    p = p if p is not None else MultiPoly.constant(len(center))
    return ProductField([PolyField(defect), PolyField(p)])


def vanishing_polytope(
    halfspaces: Sequence[Tuple[Sequence[float], float]],
    p: Optional[MultiPoly] = None,
) -> ProductField:
    factors: List[JetField] = [
        PolyField(MultiPoly.affine(a, b)) for a, b in halfspaces
    ]
    dim = factors[0].dim
    factors.append(PolyField(p if p is not None else MultiPoly.constant(dim)))
    return ProductField(factors)


# The singular weight


class WeightValues(NamedTuple):
    """
    Values of the weight ``rho**-alpha`` and of its derivatives.

    All the derivatives are multiplied by ``rho**shift``; *rho* and *omega*
    are not.
    """

    rho: Array  # (m,)
    omega: Array  # (m, n) unit vector (x - y) / rho
    value: Array  # (m,)
    grad: Array  # (m, n)
    hess: Array  # (m, n, n)
    lap: Array  # (m,)
    bilap: Array  # (m,)


class WeightJet:
    """
    The weight ``rho**-alpha``, ``rho = |x - y|``, and its closed form jets.
    """

    def __init__(self, y: Sequence[float], alpha: float):
        self.y = np.asarray(y, dtype=float)
        self.alpha = float(alpha)

    @property
    def dim(self) -> int:
        return len(self.y)

    def __repr__(self) -> str:
        return f"<WeightJet y={self.y.tolist()} alpha={self.alpha:g}>"

    def polar(self, x: Array) -> Tuple[Array, Array]:
        """Return *rho* and the direction *omega* of the points *x*."""
        z = np.atleast_2d(x) - self.y
        rho = np.sqrt(np.einsum("mi,mi->m", z, z))
        if not rho.all():
            raise e.DomainError("the weight is not defined at its pole")
        return rho, z / rho[:, None]

    def at(self, x: Array, shift: float = 0.0) -> WeightValues:
        a = self.alpha
        n = self.dim
        rho, omega = self.polar(x)

        w = rho ** (shift - a)
        w2 = rho ** (shift - a - 2)
        w4 = rho ** (shift - a - 4)
        grad = (-a * rho ** (shift - a - 1))[:, None] * omega
        oo = omega[:, :, None] * omega[:, None, :]
        hess = (a * w2)[:, None, None] * (
            (a + 2) * oo - np.eye(n)[None, :, :]
        )
        lap = -a * (n - 2 - a) * w2
        bilap = a * (a + 2) * (n - 2 - a) * (n - 4 - a) * w4

        return WeightValues(rho, omega, w, grad, hess, lap, bilap)

    def moment_hess(self, x: Array, shift: float = 0.0) -> Array:
        """
        Return the Hessians of ``z_k * rho**-alpha``, ``z = x - y``.

        The result has shape (m, n, n, n), indexed by (point, k, i, j).
        """
        a = self.alpha
        n = self.dim
        rho, omega = self.polar(x)
        z = omega * rho[:, None]
        eye = np.eye(n)

        w2 = rho ** (shift - a - 2)
        w4 = rho ** (shift - a - 4)
        lin = (
            np.einsum("ki,mj->mkij", eye, z)
            + np.einsum("kj,mi->mkij", eye, z)
            + np.einsum("ij,mk->mkij", eye, z)
        )
        cub = np.einsum("mk,mi,mj->mkij", z, z, z)
        return (
            -a * w2[:, None, None, None] * lin
            + a * (a + 2) * w4[:, None, None, None] * cub
        )


def weight_jet(
    y: Sequence[float], alpha: float, x: Sequence[float]
) -> WeightValues:
    """Evaluate the weight jet at a single point."""
    return WeightJet(y, alpha).at(np.asarray(x, dtype=float)[None, :])
