"""
Verification campaigns: matrices of identity evaluations.
"""

# Copyright (C) 2020 The biharm Team

import json
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence
from typing import Tuple

import numpy as np

from . import adapt
from . import errors as e
from .config import SampleBudget
from .constants import ALPHA_MIN_DIM, alpha_n
from .enums import IdentityId, Pole
from .geometry import Ball, ConvexPolytope, Domain, place_pole
from .identities import IdentityReport, evaluate
from .jets import PolyField, ProductField, clamped_ball, clamped_polytope
from .poly import MultiPoly
from .registry import registry

logger = logging.getLogger(__name__)

DEFAULT_DIMS = (2, 3, 4, 6, 8)
DEFAULT_DOMAINS = ("ball", "cube", "simplex")

# the identities checked by a default campaign
DEFAULT_IDENTITIES = (
    IdentityId.I2_13,
    IdentityId.I2_19,
    IdentityId.I3_3,
    IdentityId.I3_18,
    IdentityId.I3_22,
)


def make_domain(kind: str, dim: int) -> Domain:
    """
    Return the unit ball, the unit cube or the unit simplex.

    *kind* may also be the JSON description of a domain of dimension *dim*.
    """
    if kind.lstrip().startswith("{"):
        try:
            domain = adapt.load(json.loads(kind))
        except json.JSONDecodeError as ex:
            raise e.InterfaceError(f"bad domain json: {ex}")
        if domain.dim != dim:
            raise e.DomainError(
                f"the domain is {domain.dim}D, requested {dim}D",
                info={"quantity": "dimension", "value": domain.dim},
            )
        return domain  # type: ignore
    elif kind == "ball":
        return Ball(np.zeros(dim), 1.0)
    elif kind == "cube":
        return ConvexPolytope.cube(dim)
    elif kind == "simplex":
        return ConvexPolytope.simplex(dim)
    else:
        raise e.InterfaceError(f"unknown domain kind: {kind!r}")


def clamped_field(
    domain: Domain, p: Optional[MultiPoly] = None
) -> ProductField:
    """
    Return a clamped field on *domain*, times *p*.

    By default *p* is ``1 + x0 / 2``, so that the field has no symmetry
    around the poles.
    """
    if p is None:
        a = np.zeros(domain.dim)
        a[0] = -0.5
        p = MultiPoly.affine(a, 1.0)
    if isinstance(domain, Ball):
        return clamped_ball(domain.center, domain.radius, p)
    elif isinstance(domain, ConvexPolytope):
        return clamped_polytope(domain.halfspaces, p)
    else:
        raise e.NotSupportedError(
            f"no clamped field available for {type(domain).__name__}"
        )


def clamped_fields(
    domain: Domain, polys: Sequence[MultiPoly]
) -> List[ProductField]:
    """
    Return the clamped fields on *domain* times each of *polys*.

    The fields share the clamping factor, which `shared_jets()` evaluates
    once for all of them.
    """
    base = clamped_field(domain, MultiPoly.constant(domain.dim))
    return [ProductField([base, PolyField(p)]) for p in polys]


def convexity_alphas(n: int) -> List[float]:
    """Return the exponents ``0, 1, n - 2`` admissible at a boundary pole."""
    return [a for a in dict.fromkeys([0.0, 1.0, n - 2.0]) if 0 <= a < n]


def default_alphas(n: int) -> List[float]:
    """Return ``0, 1, n - 4, n - 2`` and ``alpha_n`` if defined."""
    cands: List[float] = [0.0, 1.0, n - 4.0, n - 2.0]
    if n >= ALPHA_MIN_DIM:
        cands.append(alpha_n(n))
    return [a for a in dict.fromkeys(cands) if a >= 0]


def boundary_pole(kind: str) -> Pole:
    if kind == "ball":
        return Pole.BOUNDARY_SPHERE_POINT
    return Pole.BOUNDARY_VERTEX


class Case(NamedTuple):
    identity: IdentityId
    kind: str
    n: int
    alpha: float
    pole: Pole


class CaseResult(NamedTuple):
    """
    The outcome of a case: a report, or the reason why there is none.

    *skipped* is set for the infeasible cases, *error* for the cases which
    failed with a computation error.
    """

    case: Case
    report: Optional[IdentityReport] = None
    skipped: Optional[str] = None
    error: Optional[str] = None

    @property
    def passed(self) -> bool:
        if self.skipped is not None:
            return True
        return self.report is not None and self.report.passed


class Campaign(NamedTuple):
    results: List[CaseResult]

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def counts(self) -> Dict[str, int]:
        rv = {"passed": 0, "failed": 0, "skipped": 0, "errors": 0}
        for r in self.results:
            if r.skipped is not None:
                rv["skipped"] += 1
            elif r.error is not None:
                rv["errors"] += 1
            elif r.passed:
                rv["passed"] += 1
            else:
                rv["failed"] += 1
        return rv


def plan(
    identities: Iterable[IdentityId] = DEFAULT_IDENTITIES,
    dims: Iterable[int] = DEFAULT_DIMS,
    kinds: Iterable[str] = DEFAULT_DOMAINS,
    alphas: Optional[Sequence[float]] = None,
    poles: Optional[Sequence[str]] = None,
) -> List[Case]:
    """
    Return the cases of a campaign, in the order they will be reported.

    *poles* are "exterior" or "boundary" or any `Pole` value; if *alphas*
    is not specified `default_alphas()` are used for each dimension.
    """
    poles = list(poles or ["exterior", "boundary"])
    identities = list(identities)
    kinds = list(kinds)
    rv = []
    for n in dims:
        for kind in kinds:
            for alpha in alphas if alphas is not None else default_alphas(n):
                for pname in poles:
                    pole = (
                        boundary_pole(kind)
                        if pname == "boundary"
                        else Pole(pname)
                    )
                    for id in identities:
                        rv.append(Case(id, kind, n, float(alpha), pole))
    return rv


def infeasible(case: Case) -> Optional[str]:
    """Return the reason why *case* can't be run, None if it can."""
    if case.pole.on_boundary and case.alpha >= case.n:
        return f"alpha = {case.alpha:g} >= n = {case.n} for a boundary pole"
    try:
        domain = make_domain(case.kind, case.n)
        clamped_field(domain)
        place_pole(domain, case.pole)
    except (e.DegreeError, e.DomainError, e.InterfaceError) as ex:
        return str(ex)
    return None


def run_case(case: Case, budget: SampleBudget) -> CaseResult:
    reason = infeasible(case)
    if reason is not None:
        logger.warning("skipping %s: %s", _label(case), reason)
        return CaseResult(case, skipped=reason)

    domain = make_domain(case.kind, case.n)
    u = clamped_field(domain)
    y = place_pole(domain, case.pole)
    try:
        report = evaluate(case.identity, domain, u, y, case.alpha, budget)
    except e.ComputationError as ex:
        logger.warning("%s failed: %s", _label(case), ex)
        return CaseResult(case, error=f"{type(ex).__name__}: {ex}")
    return CaseResult(case, report=report)


def run_campaign(
    cases: Sequence[Case],
    budget: Optional[SampleBudget] = None,
    workers: int = 1,
) -> Campaign:
    """
    Run the cases, in parallel if *workers* > 1.

    The results are in the order of *cases* whatever the completion order.
    """
    budget = budget or SampleBudget()
    logger.info("running %s cases with %s workers", len(cases), workers)
    if workers <= 1:
        results = [run_case(c, budget) for c in cases]
    else:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(lambda c: run_case(c, budget), cases))
    campaign = Campaign(results)
    logger.info("campaign done: %s", campaign.counts())
    return campaign


def _label(case: Case) -> str:
    info = registry[case.identity]
    return (
        f"{info.name} {case.kind} n={case.n} alpha={case.alpha:g}"
        f" pole={case.pole.value}"
    )


def random_poly(dim: int, degree: int, seed: int) -> MultiPoly:
    """
    Return ``1 + q(x)`` with q of the given degree and small random
    coefficients, so that the clamped fields built on it don't vanish.
    """
    rng = np.random.default_rng(seed)
    terms = {(0,) * dim: 1.0}
    for exps in _exponents(dim, degree):
        if any(exps):
            terms[exps] = 0.5 * rng.standard_normal() / len(exps)
    return MultiPoly(dim, terms)


def _exponents(dim: int, degree: int) -> List[Tuple[int, ...]]:
    if dim == 0:
        return [()]
    return [
        (i,) + rest
        for i in range(degree + 1)
        for rest in _exponents(dim - 1, degree - i)
    ]
