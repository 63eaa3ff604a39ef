"""
Evaluation of the weighted identities term by term.

Every identity is a table of terms: an integrand, the side of the identity
it belongs to and a coefficient depending on the dimension and on the
weight exponent. The integrals are computed with the rules of
`biharm.quadrature`, all the terms of a side on the same nodes.
"""

# Copyright (C) 2020 The biharm Team

import math
import logging
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence
from typing import Tuple, Union

import numpy as np

from . import errors as e
from . import rules
from .config import SampleBudget
from .constants import alpha_n, quad_form
from .enums import IdentityId, Location
from .geometry import Ball, ConvexPolytope, Domain, surface_nodes
from .jets import Jet, WeightJet, WeightValues, shared_jets
from .proto import Array, JetField
from .quadrature import Nodes, surface_family, volume_family
from .registry import registry

logger = logging.getLogger(__name__)

# names of the integrals, as they appear in the reports
LAP_FORM = "ΔuΔ(uρ^-α)"
HESS_FORM = "∇²u:∇²(uρ^-α)"
LAP2 = "|Δu|²ρ^-α"
GRAD2 = "|∇u|²ρ^-α-2"
RADIAL2 = "|∂u/∂ρ|²ρ^-α-2"
VALUE2 = "|u|²ρ^-α-4"
HESS2 = "|∇²u|²ρ^-α"
RADIAL_HESS2 = "|∂ρ∇u|²ρ^-α"
LAP_RADIAL = "Δu∂u/∂ρρ^-α-1"
BILAP_RADIAL = "Δ²u∂u/∂ρρ^1-α"
SURFACE = "surface"
RADIAL_GRADIENT = "radial-gradient"
RADIAL_VALUE = "radial-value"
RADIAL_HARDY = "radial-hardy"
RADIAL2_FLAT = "|∂u/∂ρ|²ρ^2-α"
VALUE2_FLAT = "|u|²ρ^-α"

# relative size of the boundary values accepted by the clamping check
CLAMP_RTOL = 1e-9


class Frame:
    """
    A field and the weight ``rho**-alpha`` evaluated on a chunk of nodes.

    All the values carrying a power of rho are multiplied by
    ``rho**beta``, *beta* being the power folded in the rule weights.
    """

    def __init__(
        self,
        jet: Jet,
        weight: WeightJet,
        nodes: Nodes,
        w: Optional[WeightValues] = None,
    ):
        self.n = weight.dim
        self.alpha = weight.alpha
        self.beta = nodes.beta
        self.points = nodes.points
        self.normals = nodes.normals
        self.rho, self.omega = weight.polar(nodes.points)

        self.u = jet.value
        self.grad = jet.grad
        self.hess = jet.hess
        self.lap = jet.lap
        self.bilap = jet.bilap
        self.ur = np.einsum("mi,mi->m", jet.grad, self.omega)
        self.hom = np.einsum("mij,mj->mi", jet.hess, self.omega)

        self._weight = weight
        self._w = w

    def rpow(self, p: float) -> Array:
        """Return ``rho**-p`` times the folded power."""
        return self.rho ** (self.beta - p)

    @property
    def w(self) -> WeightValues:
        if self._w is None:
            self._w = self._weight.at(self.points, self.beta)
        return self._w


def _sq(v: Array) -> Array:
    return np.einsum("mi,mi->m", v, v)


def _lap_form(f: Frame) -> Array:
    w = f.w
    luw = (
        f.lap * w.value
        + 2.0 * np.einsum("mi,mi->m", f.grad, w.grad)
        + f.u * w.lap
    )
    return f.lap * luw


def _hess_form(f: Frame) -> Array:
    w = f.w
    gw = f.grad[:, :, None] * w.grad[:, None, :]
    huw = (
        f.hess * w.value[:, None, None]
        + gw
        + gw.transpose(0, 2, 1)
        + f.u[:, None, None] * w.hess
    )
    return np.einsum("mij,mij->m", f.hess, huw)


def _radial_gradient(f: Frame) -> Array:
    a = (f.n - f.alpha - 2.0) / 2.0
    v = f.rho[:, None] * f.hom + a * f.grad
    return _sq(v) * f.rpow(f.alpha + 2)


def _radial_value(f: Frame) -> Array:
    b = (f.n - f.alpha - 4.0) / 2.0
    return (f.rho * f.ur + b * f.u) ** 2 * f.rpow(f.alpha + 4)


def _radial_hardy(f: Frame) -> Array:
    c = (f.n - f.alpha) / 2.0
    return (f.rho * f.ur + c * f.u) ** 2 * f.rpow(f.alpha)


def _surface(f: Frame) -> Array:
    if f.normals is None:
        raise e.InternalError("surface term without normals")
    on = np.einsum("mi,mi->m", f.omega, f.normals)
    h2 = np.einsum("mij,mij->m", f.hess, f.hess)
    return h2 * on * f.rpow(f.alpha - 1)


INTEGRANDS: Dict[str, Callable[[Frame], Array]] = {
    LAP_FORM: _lap_form,
    HESS_FORM: _hess_form,
    LAP2: lambda f: f.lap ** 2 * f.rpow(f.alpha),
    GRAD2: lambda f: _sq(f.grad) * f.rpow(f.alpha + 2),
    RADIAL2: lambda f: f.ur ** 2 * f.rpow(f.alpha + 2),
    VALUE2: lambda f: f.u ** 2 * f.rpow(f.alpha + 4),
    HESS2: lambda f: np.einsum("mij,mij->m", f.hess, f.hess)
    * f.rpow(f.alpha),
    RADIAL_HESS2: lambda f: _sq(f.hom) * f.rpow(f.alpha),
    LAP_RADIAL: lambda f: f.lap * f.ur * f.rpow(f.alpha + 1),
    BILAP_RADIAL: lambda f: f.bilap * f.ur * f.rpow(f.alpha - 1),
    SURFACE: _surface,
    RADIAL_GRADIENT: _radial_gradient,
    RADIAL_VALUE: _radial_value,
    RADIAL_HARDY: _radial_hardy,
    RADIAL2_FLAT: lambda f: f.ur ** 2 * f.rpow(f.alpha - 2),
    VALUE2_FLAT: lambda f: f.u ** 2 * f.rpow(f.alpha),
}

SURFACE_TERMS = {SURFACE}


class Term(NamedTuple):
    name: str
    lhs: bool
    coef: Callable[[int, float], float]


def _one(n: int, a: float) -> float:
    return 1.0


TERMS: Dict[IdentityId, List[Term]] = {
    IdentityId.I2_13: [
        Term(LAP_FORM, True, _one),
        Term(LAP2, False, _one),
        Term(GRAD2, False, lambda n, a: 2 * a),
        Term(RADIAL2, False, lambda n, a: -2 * a * (a + 2)),
        Term(
            VALUE2,
            False,
            lambda n, a: 0.5 * a * (a + 2) * (n - 2 - a) * (n - 4 - a),
        ),
    ],
    IdentityId.I2_19: [
        Term(LAP_RADIAL, True, _one),
        Term(GRAD2, False, lambda n, a: 0.5 * (n - 4 - a)),
        Term(RADIAL2, False, lambda n, a: a + 2),
    ],
    IdentityId.I3_3: [
        Term(HESS_FORM, True, _one),
        Term(HESS2, False, _one),
        Term(GRAD2, False, lambda n, a: a * (n - a - 1)),
        Term(RADIAL2, False, lambda n, a: -a * (a + 2)),
        Term(
            VALUE2,
            False,
            lambda n, a: 0.5 * a * (a + 2) * (n - a - 2) * (n - a - 4),
        ),
    ],
    IdentityId.I3_8: [
        Term(BILAP_RADIAL, True, _one),
        Term(SURFACE, False, lambda n, a: -0.5),
        Term(HESS2, False, lambda n, a: 0.5 * (a + 4 - n)),
        Term(RADIAL_HESS2, False, lambda n, a: -2 * a),
        Term(GRAD2, False, lambda n, a: 0.5 * a * (n - a)),
        Term(RADIAL2, False, lambda n, a: -0.5 * a * (a + 2) * (n - a)),
    ],
    IdentityId.I3_18: [
        Term(RADIAL_HARDY, True, _one),
        Term(RADIAL2_FLAT, False, _one),
        Term(VALUE2_FLAT, False, lambda n, a: -0.25 * (n - a) ** 2),
    ],
    IdentityId.I3_1: [
        Term(LAP_FORM, True, lambda n, a: a + 4 - n),
        Term(BILAP_RADIAL, True, lambda n, a: -2.0),
        Term(SURFACE, False, _one),
        Term(RADIAL_GRADIENT, False, lambda n, a: 4 * a),
        Term(
            RADIAL_VALUE, False, lambda n, a: 2 * a * (a + 2) * (n - a - 2)
        ),
    ],
    IdentityId.I3_22: [
        Term(LAP_FORM, True, _one),
        Term(HESS_FORM, False, _one),
    ],
}

# The convexity identity with the composite radial terms expanded
EXPANDED_3_1: List[Term] = TERMS[IdentityId.I3_1][:3] + [
    Term(RADIAL_HESS2, False, lambda n, a: 4 * a),
    Term(GRAD2, False, lambda n, a: -a * (n - a - 2) ** 2),
    Term(RADIAL2, False, lambda n, a: 2 * a * (a + 2) * (n - a - 2)),
    Term(
        VALUE2,
        False,
        lambda n, a: -0.5 * a * (a + 2) * (n - a - 2) * (n - a - 4) ** 2,
    ),
]


class IdentityReport(NamedTuple):
    identity: IdentityId
    variant: str
    n: int
    alpha: float
    domain: Dict[str, object]
    y: List[float]
    pole: str
    terms: Dict[str, float]
    errors: Dict[str, float]
    coefficients: Dict[str, float]
    lhs: float
    rhs: float
    abs_residual: float
    rel_residual: float
    scale: float
    quad_error: float
    tol: float
    passed: bool
    nodes: int


class Integrals(NamedTuple):
    values: Dict[str, float]
    errors: Dict[str, float]
    nodes: int


def evaluate(
    id: Union[IdentityId, str, int],
    domain: Domain,
    u: JetField,
    y: Sequence[float],
    alpha: float,
    budget: Optional[SampleBudget] = None,
    workers: int = 1,
    check: bool = True,
) -> IdentityReport:
    """
    Evaluate both sides of an identity and return the report.

    The report is returned whether the identity is verified or not. Raise
    `PreconditionError` if the field is not clamped on the boundary (unless
    *check* is false) or if the pole is not admissible.
    """
    info = registry[id]
    return _evaluate(
        info.id,
        TERMS[info.id],
        "direct",
        domain,
        u,
        y,
        alpha,
        budget or SampleBudget(),
        workers,
        info.clamped if check else None,
    )


def evaluate_expanded_3_1(
    domain: Domain,
    u: JetField,
    y: Sequence[float],
    alpha: float,
    budget: Optional[SampleBudget] = None,
    workers: int = 1,
    check: bool = True,
) -> IdentityReport:
    """
    Evaluate the convexity identity with the radial terms expanded.

    The right side is assembled from the Hessian, the radial derivative
    and the Hardy type identities: it must agree with the direct
    evaluation.
    """
    return _evaluate(
        IdentityId.I3_1,
        EXPANDED_3_1,
        "expanded",
        domain,
        u,
        y,
        alpha,
        budget or SampleBudget(),
        workers,
        True if check else None,
    )


def consistency_3_22(
    domain: Domain,
    u: JetField,
    y: Sequence[float],
    alpha: float,
    budget: Optional[SampleBudget] = None,
    workers: int = 1,
) -> IdentityReport:
    """
    Compare the laplacian and the Hessian forms of the weighted product.

    The two forms are equal for clamped fields; the residual is in the
    report.
    """
    return evaluate(IdentityId.I3_22, domain, u, y, alpha, budget, workers)


def _evaluate(
    id: IdentityId,
    terms: List[Term],
    variant: str,
    domain: Domain,
    u: JetField,
    y: Sequence[float],
    alpha: float,
    budget: SampleBudget,
    workers: int,
    clamped: Optional[bool],
) -> IdentityReport:
    y, loc = check_pole(domain, u, y, alpha)
    if clamped is not None:
        check_clamped(domain, u, clamped)

    n = domain.dim
    names = list(dict.fromkeys(t.name for t in terms))
    ints = integrate_terms(domain, u, y, alpha, names, budget, workers)

    lhs_parts = []
    rhs_parts = []
    scale_parts = []
    err_parts = []
    for t in terms:
        c = float(t.coef(n, alpha))
        part = c * ints.values[t.name]
        (lhs_parts if t.lhs else rhs_parts).append(part)
        scale_parts.append(abs(part))
        err_parts.append(abs(c) * ints.errors[t.name])

    return _report(
        id,
        variant,
        domain,
        y,
        loc,
        alpha,
        ints,
        {t.name: float(t.coef(n, alpha)) for t in terms},
        lhs_parts,
        rhs_parts,
        scale_parts,
        err_parts,
        budget.tol,
    )


def _report(
    id: IdentityId,
    variant: str,
    domain: Domain,
    y: Array,
    loc: Location,
    alpha: float,
    ints: Integrals,
    coefs: Dict[str, float],
    lhs_parts: List[float],
    rhs_parts: List[float],
    scale_parts: List[float],
    err_parts: List[float],
    tol: float,
) -> IdentityReport:
    lhs = math.fsum(lhs_parts)
    rhs = math.fsum(rhs_parts)
    scale = math.fsum(scale_parts)
    quad_error = math.fsum(err_parts)
    res = abs(lhs - rhs)
    rel = res / max(scale, np.finfo(float).tiny)
    passed = res <= max(tol * scale, 3.0 * quad_error)
    logger.info(
        "%s %s n=%s alpha=%g: lhs=%.12g rhs=%.12g rel=%.3g %s",
        id.name,
        variant,
        domain.dim,
        alpha,
        lhs,
        rhs,
        rel,
        "pass" if passed else "FAIL",
    )
    return IdentityReport(
        identity=id,
        variant=variant,
        n=domain.dim,
        alpha=float(alpha),
        domain=domain.describe(),
        y=[float(c) for c in y],
        pole=loc.name.lower(),
        terms=dict(ints.values),
        errors=dict(ints.errors),
        coefficients=coefs,
        lhs=lhs,
        rhs=rhs,
        abs_residual=res,
        rel_residual=rel,
        scale=scale,
        quad_error=quad_error,
        tol=tol,
        passed=bool(passed),
        nodes=ints.nodes,
    )


def integrate_terms(
    domain: Domain,
    u: JetField,
    y: Array,
    alpha: float,
    names: Sequence[str],
    budget: SampleBudget,
    workers: int = 1,
    beta: Optional[float] = None,
) -> Integrals:
    """
    Integrate the named terms, volume terms and surface terms together.

    The rules are graded toward *y* when it is on the boundary; *beta* is
    the power folded in the volume rule, by default *alpha*.
    """
    return integrate_fields(
        domain, [u], y, alpha, names, budget, workers, beta
    )[0]


def integrate_fields(
    domain: Domain,
    fields: Sequence[JetField],
    y: Array,
    alpha: float,
    names: Sequence[str],
    budget: SampleBudget,
    workers: int = 1,
    beta: Optional[float] = None,
) -> List[Integrals]:
    """
    Integrate the named terms of several fields on the same rules.

    The nodes, the weight and the factors shared by the fields are
    evaluated once per chunk. The rules are chosen for the largest field
    degree.
    """
    if not fields:
        return []
    loc = domain.location(y)
    on_boundary = loc is not Location.EXTERIOR
    weight = WeightJet(y, alpha)
    degree = 2 * max(u.degree for u in fields)
    nf = len(fields)

    values: List[Dict[str, float]] = [{} for _ in fields]
    errors: List[Dict[str, float]] = [{} for _ in fields]
    nodes = 0

    vnames = [n for n in names if n not in SURFACE_TERMS]
    snames = [n for n in names if n in SURFACE_TERMS]
    groups: List[Tuple[List[str], float, Callable]] = []
    if vnames:
        b = (alpha if beta is None else beta) if on_boundary else 0.0
        groups.append((vnames, b, volume_family))
    if snames:
        # on the boundary <omega, N> vanishes to first order at the pole
        b = alpha - 2.0 if on_boundary else 0.0
        groups.append((snames, b, surface_family))

    for group, b, family in groups:
        fam = family(domain, y, b, budget, degree)
        funcs = [INTEGRANDS[n] for n in group]

        def integrand(nodes: Nodes) -> Array:
            cols = []
            w = None
            for jet in shared_jets(fields, nodes.points):
                frame = Frame(jet, weight, nodes, w)
                cols.extend(f(frame) for f in funcs)
                w = frame._w
            return np.stack(cols, axis=1)

        res = fam.integrate(integrand, workers)
        k = len(group)
        for i in range(nf):
            for j, name in enumerate(group):
                values[i][name] = float(res.value[i * k + j])
                errors[i][name] = float(res.error[i * k + j])
        nodes += res.nodes

    return [
        Integrals(
            {n: values[i][n] for n in names},
            {n: errors[i][n] for n in names},
            nodes,
        )
        for i in range(nf)
    ]


# Preconditions


def check_pole(
    domain: Domain, u: JetField, y: Sequence[float], alpha: float
) -> Tuple[Array, Location]:
    """
    Verify that the pole is admissible for the weight exponent.

    The pole must be outside the closed domain or on its boundary, and in
    the latter case ``alpha < n``.
    """
    if not isinstance(domain, (Ball, ConvexPolytope)):
        raise e.NotSupportedError(
            f"identities can't be evaluated on {type(domain).__name__}"
        )
    y = np.asarray(y, dtype=float)
    n = domain.dim
    if y.shape != (n,) or u.dim != n:
        raise e.DomainError(
            f"dimension mismatch: domain {n}, pole {y.shape}, field {u.dim}"
        )

    loc = domain.location(y)
    if loc is Location.INTERIOR:
        raise e.PreconditionError(
            "the pole must be on the boundary or outside the domain",
            info={"quantity": "distance", "value": float(domain.distance(y))},
        )
    if loc is Location.BOUNDARY and alpha >= n:
        raise e.PreconditionError(
            f"alpha = {alpha:g} not admissible for a boundary pole:"
            f" it must be less than n = {n}",
            info={"quantity": "alpha", "value": alpha, "bound": n},
        )
    return y, loc


def check_clamped(
    domain: Domain, u: JetField, clamped: bool = True, samples: int = 2000
) -> None:
    """
    Verify that *u* vanishes on the boundary, with its gradient if *clamped*.

    Raise `PreconditionError` if the boundary values are not negligible
    with respect to the values inside the domain.
    """
    bnd = surface_nodes(domain, samples)
    jet = u.jet(bnd.points)
    ref = _reference_size(domain, u)
    diam = domain.diameter

    worst = float(np.max(np.abs(jet.value)))
    if worst > CLAMP_RTOL * ref:
        raise e.PreconditionError(
            "the field doesn't vanish on the boundary",
            info={"quantity": "|u|", "value": worst, "bound": ref},
        )
    if clamped:
        worst = diam * float(np.max(np.abs(jet.grad)))
        if worst > CLAMP_RTOL * ref:
            raise e.PreconditionError(
                "the field gradient doesn't vanish on the boundary",
                info={"quantity": "|grad u|", "value": worst, "bound": ref},
            )


def _reference_size(domain: Domain, u: JetField) -> float:
    if isinstance(domain, Ball):
        c, r = domain.center, domain.radius
    elif isinstance(domain, ConvexPolytope):
        c, r = domain.chebyshev_center, domain.chebyshev_radius
    else:
        raise e.NotSupportedError(type(domain).__name__)

    pts = np.vstack([c, c + 0.5 * r * rules.sphere_rule(domain.dim, 3).points])
    jet = u.jet(pts)
    ref = float(
        np.max(np.abs(jet.value))
        + domain.diameter * np.max(np.abs(jet.grad))
    )
    return ref if ref > 0 else 1.0


# Positivity and coercivity


class PositivityReport(NamedTuple):
    n: int
    alpha: float
    domain: Dict[str, object]
    y: List[float]
    terms: Dict[str, float]
    errors: Dict[str, float]
    slack: float
    slack_error: float
    coefficient: float
    rhs: float
    rhs_error: float
    lower_bound: float
    gradient_ratio: float
    value_ratio: float
    checks: Dict[str, bool]
    passed: bool


def positivity_chain(
    domain: Domain,
    u: JetField,
    y: Sequence[float],
    budget: Optional[SampleBudget] = None,
    alpha: Optional[float] = None,
    workers: int = 1,
) -> PositivityReport:
    """
    Verify the positivity of the Laplacian form at ``alpha = alpha_n``.

    The checks are:

    - "slack": ``int |Lu|^2 w >= (n + a)^2 / 4 int |du/drho|^2 w / rho^2``;
    - "coefficient": the coefficient of ``int u^2 w / rho^4`` is positive;
    - "rhs": the right side of the Laplacian identity is nonnegative;
    - "coercivity": ``quad_form(n, a) / 4 int |du/drho|^2 w / rho^2`` is
      not larger than the Laplacian form;
    - "resolved": every term is larger than its quadrature error.

    Every inequality is accepted within three times its quadrature error.
    """
    return positivity_chains(domain, [u], y, budget, alpha, workers)[0]


def positivity_chains(
    domain: Domain,
    fields: Sequence[JetField],
    y: Sequence[float],
    budget: Optional[SampleBudget] = None,
    alpha: Optional[float] = None,
    workers: int = 1,
) -> List[PositivityReport]:
    """
    Run `positivity_chain()` on several fields sharing the quadrature.

    Return one report per field, in the same order.
    """
    n = domain.dim
    if n < 8:
        raise e.PreconditionError(
            f"the positivity chain needs n >= 8, got {n}",
            info={"quantity": "n", "value": n, "bound": 8},
        )
    if alpha is None:
        alpha = alpha_n(n)
    budget = budget or SampleBudget()
    for u in fields:
        y, loc = check_pole(domain, u, y, alpha)
        check_clamped(domain, u)

    terms = TERMS[IdentityId.I2_13]
    names = [t.name for t in terms]
    ints = integrate_fields(
        domain, fields, y, alpha, names, budget, workers
    )
    rv = [_positivity_report(domain, y, alpha, i) for i in ints]
    failed = sum(not r.passed for r in rv)
    if failed:
        logger.warning(
            "positivity chain failed for %s fields out of %s",
            failed,
            len(rv),
        )
    return rv


def _positivity_report(
    domain: Domain, y: Array, alpha: float, ints: Integrals
) -> PositivityReport:
    n = domain.dim
    terms = TERMS[IdentityId.I2_13]
    v, err = ints.values, ints.errors

    k = 0.25 * (n + alpha) ** 2
    slack = v[LAP2] - k * v[RADIAL2]
    slack_error = err[LAP2] + k * err[RADIAL2]

    rhs_terms = [t for t in terms if not t.lhs]
    rhs = sum(t.coef(n, alpha) * v[t.name] for t in rhs_terms)
    rhs_error = sum(abs(t.coef(n, alpha)) * err[t.name] for t in rhs_terms)
    coefficient = terms[-1].coef(n, alpha)

    lhs = v[LAP_FORM]
    lower = 0.25 * quad_form(n, alpha) * v[RADIAL2]
    lower_error = 0.25 * abs(quad_form(n, alpha)) * err[RADIAL2]

    checks = {
        "slack": slack >= -3.0 * slack_error,
        "coefficient": coefficient > 0 and alpha < n - 4,
        "rhs": rhs >= -3.0 * rhs_error,
        "coercivity": lower <= lhs + 3.0 * (lower_error + err[LAP_FORM]),
        # every term must be larger than its quadrature error
        "resolved": all(err[name] < abs(v[name]) for name in v),
    }
    tiny = np.finfo(float).tiny
    return PositivityReport(
        n=n,
        alpha=float(alpha),
        domain=domain.describe(),
        y=[float(c) for c in y],
        terms=dict(v),
        errors=dict(err),
        slack=slack,
        slack_error=slack_error,
        coefficient=coefficient,
        rhs=rhs,
        rhs_error=rhs_error,
        lower_bound=lower,
        gradient_ratio=v[GRAD2] / max(lhs, tiny),
        value_ratio=v[VALUE2] / max(lhs, tiny),
        checks=checks,
        passed=all(checks.values()),
    )


class HardyReport(NamedTuple):
    n: int
    delta: float
    y: List[float]
    lhs: float
    rhs: float
    slack: float
    error: float
    passed: bool


def hardy(
    domain: Domain,
    u: JetField,
    y: Sequence[float],
    delta: float,
    budget: Optional[SampleBudget] = None,
    workers: int = 1,
) -> HardyReport:
    """
    Verify ``int |d(Du)/drho|^2 rho^(2-n+d) >= d^2/4 int |Du|^2 rho^(d-n)``.

    This is the radial Hardy identity applied to the derivatives of a
    clamped field, with weight exponent ``n - d``.
    """
    if delta <= 0:
        raise e.PreconditionError(
            f"delta must be positive, got {delta:g}",
            info={"quantity": "delta", "value": delta, "bound": 0},
        )
    n = domain.dim
    # |Du|^2 rho^(d-n) is the gradient term at alpha = n - d - 2
    alpha = n - delta - 2.0
    y, loc = check_pole(domain, u, y, alpha)
    check_clamped(domain, u)
    ints = integrate_terms(
        domain,
        u,
        y,
        alpha,
        [RADIAL_HESS2, GRAD2],
        budget or SampleBudget(),
        workers,
    )
    lhs = ints.values[RADIAL_HESS2]
    k = 0.25 * delta ** 2
    rhs = k * ints.values[GRAD2]
    error = ints.errors[RADIAL_HESS2] + k * ints.errors[GRAD2]
    slack = lhs - rhs
    return HardyReport(
        n=n,
        delta=float(delta),
        y=[float(c) for c in y],
        lhs=lhs,
        rhs=rhs,
        slack=slack,
        error=error,
        passed=bool(slack >= -3.0 * error),
    )
