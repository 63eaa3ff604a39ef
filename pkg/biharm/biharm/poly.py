"""
Sparse multivariate polynomials with exact differentiation.
"""

# Copyright (C) 2020 The biharm Team

from functools import lru_cache
from typing import Dict, Iterator, Mapping, Optional, Sequence
from typing import Tuple, Union

import numpy as np

from . import errors as e
from .proto import Array

DEGREE_CAP = 12

Exps = Tuple[int, ...]
Number = Union[int, float]


class MultiPoly:
    """
    A polynomial in *dim* variables, stored as a map exponents -> coefficient.

    The object is immutable: every operation returns a new polynomial. Zero
    coefficients are never stored, and the total degree cannot exceed
    `DEGREE_CAP`.

    E.g. ``x0**2 * x1 + 3`` in 2D is stored as ``{(2, 1): 1.0, (0, 0): 3.0}``
    """

    __slots__ = ("dim", "_terms", "_arrays", "__weakref__")

    def __init__(
        self,
        dim: int,
        terms: Optional[Mapping[Exps, Number]] = None,
        cap: int = DEGREE_CAP,
    ):
        if dim < 1:
            raise e.DomainError(f"bad polynomial dimension: {dim}")
        self.dim = dim
        self._terms: Dict[Exps, float] = {}
        self._arrays: Optional[Tuple[Array, Array]] = None

        for exps, coef in (terms or {}).items():
            exps = tuple(int(i) for i in exps)
            if len(exps) != dim:
                raise e.DomainError(
                    f"exponents {exps} don't match the dimension {dim}"
                )
            if any(i < 0 for i in exps):
                raise e.DomainError(f"negative exponents: {exps}")
            coef = float(coef)
            if coef:
                self._terms[exps] = self._terms.get(exps, 0.0) + coef

        self._terms = {k: v for k, v in self._terms.items() if v}

        if self.degree > cap:
            raise e.DegreeError(
                f"polynomial degree {self.degree} exceeds the cap {cap}",
                info={
                    "quantity": "degree",
                    "value": self.degree,
                    "bound": cap,
                },
            )

    @classmethod
    def constant(cls, dim: int, value: Number = 1.0) -> "MultiPoly":
        return cls(dim, {(0,) * dim: value})

    @classmethod
    def variable(cls, dim: int, i: int) -> "MultiPoly":
        """Return the polynomial ``x_i``."""
        if not 0 <= i < dim:
            raise e.DomainError(f"no variable {i} in dimension {dim}")
        return cls(dim, {_unit(dim, i): 1.0})

    @classmethod
    def monomial(cls, exps: Sequence[int], coef: Number = 1.0) -> "MultiPoly":
        return cls(len(exps), {tuple(exps): coef})

    @classmethod
    def affine(cls, a: Sequence[float], b: float) -> "MultiPoly":
        """Return the polynomial ``b - <a, x>``."""
        dim = len(a)
        terms: Dict[Exps, Number] = {(0,) * dim: b}
        for i, ai in enumerate(a):
            terms[_unit(dim, i)] = -ai
        return cls(dim, terms)

    @classmethod
    def sphere_defect(
        cls, center: Sequence[float], radius: float
    ) -> "MultiPoly":
        """Return the polynomial ``R**2 - |x - c|**2``."""
        dim = len(center)
        c = [float(ci) for ci in center]
        terms: Dict[Exps, Number] = {
            (0,) * dim: radius ** 2 - sum(ci * ci for ci in c)
        }
        for i, ci in enumerate(c):
            terms[_unit(dim, i, 2)] = -1.0
            terms[_unit(dim, i)] = 2.0 * ci
        return cls(dim, terms)

    @property
    def degree(self) -> int:
        return max((sum(k) for k in self._terms), default=0)

    def is_zero(self) -> bool:
        return not self._terms

    def terms(self) -> Iterator[Tuple[Exps, float]]:
        """Iterate on the (exponents, coefficient) pairs in sorted order."""
        return iter(sorted(self._terms.items()))

    def coef(self, exps: Sequence[int]) -> float:
        return self._terms.get(tuple(exps), 0.0)

    def __len__(self) -> int:
        return len(self._terms)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, float)):
            other = MultiPoly.constant(self.dim, other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.dim == other.dim and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.dim, frozenset(self._terms.items())))

    def __repr__(self) -> str:
        return f"MultiPoly({self.dim}, {dict(self.terms())!r})"

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for exps, coef in sorted(self._terms.items(), reverse=True):
            mono = "*".join(
                f"x{i}" if p == 1 else f"x{i}**{p}"
                for i, p in enumerate(exps)
                if p
            )
            if not mono:
                parts.append(f"{coef:g}")
            elif coef == 1:
                parts.append(mono)
            else:
                parts.append(f"{coef:g}*{mono}")
        return " + ".join(parts)

    # Arithmetic

    def __add__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        other = self._coerce(other)
        terms = dict(self._terms)
        for k, v in other._terms.items():
            terms[k] = terms.get(k, 0.0) + v
        return MultiPoly(self.dim, terms)

    __radd__ = __add__

    def __neg__(self) -> "MultiPoly":
        return MultiPoly(self.dim, {k: -v for k, v in self._terms.items()})

    def __sub__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        return self + (-self._coerce(other))

    def __rsub__(self, other: Number) -> "MultiPoly":
        return self._coerce(other) - self

    def __mul__(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        if isinstance(other, (int, float)):
            return MultiPoly(
                self.dim, {k: v * other for k, v in self._terms.items()}
            )

        other = self._coerce(other)
        if self.degree + other.degree > DEGREE_CAP:
            raise e.DegreeError(
                f"product degree {self.degree + other.degree}"
                f" exceeds the cap {DEGREE_CAP}",
                info={
                    "quantity": "degree",
                    "value": self.degree + other.degree,
                    "bound": DEGREE_CAP,
                },
            )

        terms: Dict[Exps, float] = {}
        for k1, v1 in self._terms.items():
            for k2, v2 in other._terms.items():
                k = tuple(i + j for i, j in zip(k1, k2))
                terms[k] = terms.get(k, 0.0) + v1 * v2
        return MultiPoly(self.dim, terms)

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "MultiPoly":
        if n < 0:
            raise ValueError("negative powers are not supported")
        rv = MultiPoly.constant(self.dim)
        for i in range(n):
            rv = rv * self
        return rv

    def _coerce(self, other: Union["MultiPoly", Number]) -> "MultiPoly":
        if isinstance(other, (int, float)):
            return MultiPoly.constant(self.dim, other)
        if not isinstance(other, MultiPoly):
            raise TypeError(f"can't operate with {type(other).__name__}")
        if other.dim != self.dim:
            raise e.DomainError(
                f"dimension mismatch: {self.dim} and {other.dim}"
            )
        return other

    # Calculus

    def deriv(self, i: int) -> "MultiPoly":
        """Return the partial derivative with respect to ``x_i``."""
        if not 0 <= i < self.dim:
            raise e.DomainError(f"no variable {i} in dimension {self.dim}")
        terms: Dict[Exps, float] = {}
        for k, v in self._terms.items():
            if k[i]:
                dk = k[:i] + (k[i] - 1,) + k[i + 1 :]
                terms[dk] = v * k[i]
        return MultiPoly(self.dim, terms)

    def gradient(self) -> Tuple["MultiPoly", ...]:
        return tuple(self.deriv(i) for i in range(self.dim))

    def laplacian(self) -> "MultiPoly":
        rv = MultiPoly(self.dim)
        for i in range(self.dim):
            rv = rv + self.deriv(i).deriv(i)
        return rv

    def bilaplacian(self) -> "MultiPoly":
        return self.laplacian().laplacian()

    # Evaluation

    def __call__(self, x: Union[Array, Sequence[float]]) -> Array:
        return self.evaluate(x)

    def evaluate(self, x: Union[Array, Sequence[float]]) -> Array:
        """
        Evaluate the polynomial on points of shape ``(dim,)`` or ``(m, dim)``.
        """
        x = np.asarray(x, dtype=float)
        single = x.ndim == 1
        if single:
            x = x[None, :]
        if x.shape[-1] != self.dim:
            raise e.DomainError(
                f"points of dimension {x.shape[-1]}"
                f" for a polynomial in {self.dim} variables"
            )

        exps, coefs = self._as_arrays()
        if not len(coefs):
            rv = np.zeros(x.shape[0])
        else:
            rv = monomials(x, exps) @ coefs

        return rv[0] if single else rv

    def _as_arrays(self) -> Tuple[Array, Array]:
        if self._arrays is None:
            items = sorted(self._terms.items())
            exps = np.array(
                [k for k, v in items], dtype=int
            ).reshape(-1, self.dim)
            coefs = np.array([v for k, v in items], dtype=float)
            self._arrays = (exps, coefs)
        return self._arrays


def monomials(x: Array, exps: Array) -> Array:
    """
    Return the values of the monomials *exps* (k, dim) at *x* (m, dim).
    """
    m, dim = x.shape
    maxp = int(exps.max()) if exps.size else 0
    powers = x[:, :, None] ** np.arange(maxp + 1)
    rv = np.ones((m, exps.shape[0]))
    for j in range(dim):
        col = exps[:, j]
        if col.any():
            rv *= powers[:, j, col]
    return rv


@lru_cache()
def _unit(dim: int, i: int, power: int = 1) -> Exps:
    rv = [0] * dim
    rv[i] = power
    return tuple(rv)
