"""
Integration of weighted integrands over balls and convex polytopes.

An integrand ``f(x) * rho(x)**-beta``, ``rho = |x - y|``, is integrated by
exact parametrization of the domain along rays. When the pole *y* is the
apex of the rays (pole on the boundary or inside the domain) the radial
rule is a Gauss-Jacobi rule carrying the singular factor, so that it is
exact for polynomial numerators. When the pole is outside the closed domain
the integrand is smooth and the rays start from an interior point.

Every rule is evaluated in chunks of nodes; the chunk partial sums are
combined with an exactly rounded sum in chunk order, so results don't
depend on the number of workers.
"""

# Copyright (C) 2020 The biharm Team

import math
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Iterator, List, NamedTuple, Optional
from typing import Sequence, Tuple

import numpy as np
from scipy import linalg

from . import errors as e
from . import rules
from .config import SampleBudget
from .enums import Location
from .geometry import Ball, ConvexPolytope, Domain, simplex_measure
from .proto import Array, Integrand

logger = logging.getLogger(__name__)

CHUNK_SIZE = 4096

# the smallest tensor orders worth using before switching to random rules
MIN_ANGULAR_ORDER = 6
MIN_SIMPLEX_ORDER = 3

# above this base dimension a tensor rule is only used if exact for the
# numerator degree, a randomized rule otherwise
TENSOR_MAX_DIM = 4

EPS = np.finfo(float).eps


class Nodes(NamedTuple):
    """
    A chunk of quadrature nodes.

    The integrand evaluated on the nodes must return ``f * rho**beta``: the
    singular factor ``rho**-beta`` is folded in the weights.
    """

    points: Array
    weights: Array
    normals: Optional[Array]
    beta: float


# Return the integrand values on the nodes, shape (m,) or (m, k)
NodesIntegrand = Callable[[Nodes], Array]


class Integral(NamedTuple):
    value: Any
    error: Any
    nodes: int


class QuadratureRule:
    """
    A set of nodes and weights, produced in chunks.
    """

    beta: float = 0.0

    @property
    def size(self) -> int:
        raise NotImplementedError

    def chunks(self, size: int = CHUNK_SIZE) -> Iterator[Nodes]:
        raise NotImplementedError

    def nodes(self) -> Nodes:
        """Return all the nodes at once. Only meant for small rules."""
        parts = list(self.chunks())
        normals = None
        if parts[0].normals is not None:
            normals = np.concatenate([p.normals for p in parts])
        return Nodes(
            np.concatenate([p.points for p in parts]),
            np.concatenate([p.weights for p in parts]),
            normals,
            self.beta,
        )


class PointRule(QuadratureRule):
    def __init__(
        self,
        points: Array,
        weights: Array,
        normals: Optional[Array] = None,
        beta: float = 0.0,
    ):
        self.points = points
        self.weights = weights
        self.normals = normals
        self.beta = beta

    @property
    def size(self) -> int:
        return len(self.weights)

    def chunks(self, size: int = CHUNK_SIZE) -> Iterator[Nodes]:
        for i in range(0, self.size, size):
            sl = slice(i, i + size)
            yield Nodes(
                self.points[sl],
                self.weights[sl],
                None if self.normals is None else self.normals[sl],
                self.beta,
            )


class RayRule(QuadratureRule):
    """
    Rays from *apex*: ``x = apex + r * omega``, ``0 <= r <= length``.

    The measure of a k-dimensional flat is ``sum_i W_i r**(k-1) dr`` along
    the rays. The radial rule carries the ``r**-beta`` factor, so *beta* is 0
    unless the pole is the apex.

    If *shell* is specified, only the part of the rays with ``r`` in the
    shell is integrated, with a Gauss-Legendre radial rule.
    """

    def __init__(
        self,
        apex: Array,
        directions: Array,
        lengths: Array,
        weights: Array,
        k: int,
        order: int,
        beta: float = 0.0,
        normal: Optional[Array] = None,
        shell: Optional[Tuple[float, float]] = None,
    ):
        if beta >= k and shell is None:
            raise e.DivergenceError(
                f"rho**-{beta:g} is not integrable in dimension {k}",
                info={"quantity": "beta", "value": beta, "bound": k},
            )
        self.apex = apex
        self.directions = directions
        self.lengths = lengths
        self.ray_weights = weights
        self.k = k
        self.order = order
        self.beta = beta
        self.normal = normal
        self.shell = shell

    @property
    def size(self) -> int:
        return len(self.lengths) * self.order

    def chunks(self, size: int = CHUNK_SIZE) -> Iterator[Nodes]:
        q = self.order
        step = max(1, size // q)
        k, beta = self.k, self.beta
        for i in range(0, len(self.lengths), step):
            sl = slice(i, i + step)
            omega = self.directions[sl]
            ell = self.lengths[sl]
            wray = self.ray_weights[sl]

            if self.shell is None:
                radial = rules.gauss_jacobi(q, 0.0, k - 1.0 - beta)
                r = ell[:, None] * radial.points[None, :]
                w = (wray * ell ** (k - beta))[:, None] * radial.weights
            else:
                lo = np.minimum(self.shell[0], ell)
                hi = np.minimum(self.shell[1], ell)
                radial = rules.gauss_jacobi(q)
                r = lo[:, None] + (hi - lo)[:, None] * radial.points
                w = (wray * (hi - lo))[:, None] * radial.weights
                with np.errstate(divide="ignore", invalid="ignore"):
                    w = np.where(r > 0, w * r ** (k - 1.0 - beta), 0.0)

            pts = self.apex + r[:, :, None] * omega[:, None, :]
            normals = None
            if self.normal is not None:
                normals = np.broadcast_to(
                    self.normal, (pts.shape[0] * q, len(self.apex))
                )
            yield Nodes(
                pts.reshape(-1, len(self.apex)), w.ravel(), normals, beta
            )

    def with_shell(self, lo: float, hi: float, beta: float) -> "RayRule":
        """Return the rule restricted to the shell ``lo <= r <= hi``."""
        return RayRule(
            self.apex,
            self.directions,
            self.lengths,
            self.ray_weights,
            self.k,
            self.order,
            beta,
            self.normal,
            (lo, hi),
        )

    def truncated(self, radius: float, beta: float) -> "RayRule":
        """Return the rule restricted to the ball of *radius* at the apex."""
        return RayRule(
            self.apex,
            self.directions,
            np.minimum(self.lengths, radius),
            self.ray_weights,
            self.k,
            self.order,
            beta,
            self.normal,
        )


class RuleFamily:
    """
    Some variants of the same rule, used to estimate the integration error.

    With kind "escalation" the first variant is the most accurate and the
    error is its difference with the second. With kind "replication" the
    variants are randomized replicas: the value is their mean and the error
    the standard error of the mean.

    Every variant is a list of parts, whose integrals are summed.
    """

    def __init__(self, kind: str, variants: List[List[QuadratureRule]]):
        if kind not in ("escalation", "replication"):
            raise e.InternalError(f"unknown rule family kind: {kind}")
        if len(variants) < 2:
            raise e.InternalError("at least two rule variants are needed")
        self.kind = kind
        self.variants = variants

    def __repr__(self) -> str:
        return (
            f"<RuleFamily {self.kind}: {len(self.variants)} variants,"
            f" {self.size} nodes>"
        )

    @property
    def size(self) -> int:
        return sum(r.size for v in self.variants for r in v)

    def integrate(
        self, integrand: NodesIntegrand, workers: int = 1
    ) -> Integral:
        sums = []
        abss = []
        for parts in self.variants:
            val, mag = _integrate_parts(parts, integrand, workers)
            sums.append(val)
            abss.append(mag)

        vals = np.array(sums)
        floor = 64.0 * EPS * np.max(np.array(abss), axis=0)
        if self.kind == "escalation":
            value = vals[0]
            error = np.abs(vals[0] - vals[1])
        else:
            value = vals.mean(axis=0)
            error = vals.std(axis=0, ddof=1) / math.sqrt(len(vals))

        error = np.maximum(error, floor)
        if np.ndim(value) == 0:
            value, error = float(value), float(error)
        return Integral(value, error, self.size)


def _integrate_parts(
    parts: Sequence[QuadratureRule], integrand: NodesIntegrand, workers: int
) -> Tuple[Array, Array]:
    chunks = (c for r in parts for c in r.chunks())

    def partial(nodes: Nodes) -> Tuple[Array, Array]:
        vals = np.asarray(integrand(nodes), dtype=float)
        w = nodes.weights
        return w @ vals, np.abs(w) @ np.abs(vals)

    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as ex:
            results = list(ex.map(partial, chunks))
    else:
        results = [partial(c) for c in chunks]

    if not results:
        return np.zeros(()), np.zeros(())

    vals = np.array([r[0] for r in results])
    mags = np.array([r[1] for r in results])
    return _fsum(vals), _fsum(mags)


def _fsum(a: Array) -> Array:
    if a.ndim == 1:
        return np.array(math.fsum(a))
    return np.array([math.fsum(a[:, j]) for j in range(a.shape[1])])


# Rule construction


def volume_family(
    domain: Domain,
    y: Sequence[float],
    beta: float,
    budget: SampleBudget,
    degree: Optional[int] = None,
) -> RuleFamily:
    """
    Return the rules to integrate ``f * rho**-beta`` on *domain*.

    *degree*, if known, is the degree of the numerator along the rays from
    the pole, and is used to choose the radial order.
    """
    y = np.asarray(y, dtype=float)
    loc = domain.location(y)
    if isinstance(domain, Ball):
        if loc is Location.EXTERIOR:
            return _ball_center_family(domain, budget)
        elif loc is Location.BOUNDARY:
            return _ball_boundary_family(domain, y, beta, budget, degree)
        else:
            return _ball_interior_family(domain, y, beta, budget, degree)

    elif isinstance(domain, ConvexPolytope):
        if loc is Location.EXTERIOR:
            apex = domain.chebyshev_center
            return _polytope_family(domain, apex, 0.0, budget, degree, False)
        else:
            return _polytope_family(domain, y, beta, budget, degree)

    raise e.NotSupportedError(
        f"no volume quadrature for {type(domain).__name__}"
    )


def surface_family(
    domain: Domain,
    y: Sequence[float],
    beta: float,
    budget: SampleBudget,
    degree: Optional[int] = None,
) -> RuleFamily:
    """
    Return the rules to integrate ``g * rho**-beta`` on the boundary.

    The nodes carry the outward normals.
    """
    y = np.asarray(y, dtype=float)
    loc = domain.location(y)
    if isinstance(domain, Ball):
        if loc is Location.BOUNDARY:
            return _sphere_pole_family(domain, y, beta, budget, degree)
        else:
            return _sphere_center_family(domain, budget)

    elif isinstance(domain, ConvexPolytope):
        return _facets_family(domain, y, beta, budget, degree)

    raise e.NotSupportedError(
        f"no surface quadrature for {type(domain).__name__}"
    )


def _radial_order(
    budget: SampleBudget, degree: Optional[int], pole_at_apex: bool
) -> int:
    if degree is None or not pole_at_apex:
        return budget.order
    return min(budget.order, max(4, degree // 2 + 2))


def _lower(order: int) -> int:
    return max(1, order - max(2, order // 4))


def _least_simplex_order(
    dim: int, budget: SampleBudget, degree: Optional[int]
) -> int:
    """
    Return the smallest tensor order accepted on a *dim*-simplex base.

    Above `TENSOR_MAX_DIM` the order must integrate a numerator of
    *degree* exactly, up to the angular order of the budget.
    """
    if degree is None or dim <= TENSOR_MAX_DIM:
        return MIN_SIMPLEX_ORDER
    return max(MIN_SIMPLEX_ORDER, min(budget.angular_order, degree // 2 + 1))


def _fit(
    count: Callable[[int], int], limit: int, start: int, least: int
) -> Optional[int]:
    """Return the largest order <= start with count <= limit, or None."""
    p = start
    while p >= least:
        if count(p) <= limit:
            return p
        p -= 1
    return None


def _ball_center_family(ball: Ball, budget: SampleBudget) -> RuleFamily:
    n = ball.dim
    q = budget.order
    p = _fit(
        lambda p: q * rules.sphere_count(n, p),
        budget.max_nodes,
        budget.angular_order,
        MIN_ANGULAR_ORDER,
    )

    def make(q: int, srule: rules.Rule) -> RayRule:
        return RayRule(
            ball.center,
            srule.points,
            np.full(len(srule), ball.radius),
            srule.weights,
            n,
            q,
        )

    if p is not None:
        logger.debug("ball rule: radial %s, angular %s", q, p)
        return RuleFamily(
            "escalation",
            [
                [make(q, rules.sphere_rule(n, p))],
                [make(_lower(q), rules.sphere_rule(n, _lower(p)))],
            ],
        )

    size = _qmc_size(budget, q)
    logger.debug("ball rule: radial %s, %s random directions", q, size)
    return RuleFamily(
        "replication",
        [
            [make(q, rules.sphere_qmc(n, size, budget.seed + i))]
            for i in range(budget.replications)
        ],
    )


def _ball_interior_family(
    ball: Ball,
    y: Array,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int],
) -> RuleFamily:
    n = ball.dim
    q = _radial_order(budget, degree, True)
    z = y - ball.center

    def make(q: int, srule: rules.Rule) -> RayRule:
        p = srule.points @ z
        ell = -p + np.sqrt(p * p - (z @ z - ball.radius ** 2))
        return RayRule(y, srule.points, ell, srule.weights, n, q, beta)

    p = _fit(
        lambda p: q * rules.sphere_count(n, p),
        budget.max_nodes,
        budget.angular_order,
        MIN_ANGULAR_ORDER,
    )
    if p is not None:
        return RuleFamily(
            "escalation",
            [
                [make(q, rules.sphere_rule(n, p))],
                [make(_lower(q), rules.sphere_rule(n, _lower(p)))],
            ],
        )

    size = _qmc_size(budget, q)
    return RuleFamily(
        "replication",
        [
            [make(q, rules.sphere_qmc(n, size, budget.seed + i))]
            for i in range(budget.replications)
        ],
    )


def _ball_boundary_family(
    ball: Ball,
    y: Array,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int],
) -> RuleFamily:
    n = ball.dim
    if beta >= n:
        raise e.DivergenceError(
            f"rho**-{beta:g} is not integrable at a boundary point in {n}D",
            info={"quantity": "beta", "value": beta, "bound": n},
        )

    nu = (ball.center - y) / ball.radius
    basis = linalg.null_space(nu[None, :])
    q = _radial_order(budget, degree, True)
    qt = budget.order

    def make(q: int, qt: int, eta: rules.Rule) -> RayRule:
        # polar axis on the inward normal, t = cos(angle)
        trule = rules.gauss_jacobi(qt, (n - 3) / 2.0, n - beta)
        t = np.repeat(trule.points, len(eta))
        wt = np.repeat(trule.weights, len(eta))
        s = np.sqrt(1.0 - t * t)
        e_pts = np.tile(eta.points, (qt, 1))
        omega = t[:, None] * nu + s[:, None] * (e_pts @ basis.T)
        w = (
            wt
            * np.tile(eta.weights, qt)
            * (1.0 + t) ** ((n - 3) / 2.0)
            / t ** (n - beta)
        )
        return RayRule(y, omega, 2.0 * ball.radius * t, w, n, q, beta)

    if n == 2:
        eta = rules.sphere_rule(1, 1)
        return RuleFamily(
            "escalation",
            [[make(q, qt, eta)], [make(_lower(q), _lower(qt), eta)]],
        )

    p = _fit(
        lambda p: q * qt * rules.sphere_count(n - 1, p),
        budget.max_nodes,
        budget.angular_order,
        MIN_ANGULAR_ORDER,
    )
    if p is not None:
        logger.debug("ball pole rule: radial %s, t %s, eta %s", q, qt, p)
        return RuleFamily(
            "escalation",
            [
                [make(q, qt, rules.sphere_rule(n - 1, p))],
                [
                    make(
                        _lower(q),
                        _lower(qt),
                        rules.sphere_rule(n - 1, _lower(p)),
                    )
                ],
            ],
        )

    size = _qmc_size(budget, q * qt)
    logger.debug(
        "ball pole rule: radial %s, t %s, %s random eta", q, qt, size
    )
    return RuleFamily(
        "replication",
        [
            [make(q, qt, rules.sphere_qmc(n - 1, size, budget.seed + i))]
            for i in range(budget.replications)
        ],
    )


def _qmc_size(budget: SampleBudget, per_direction: int) -> int:
    # antithetic rules double the points
    size = budget.max_nodes // (2 * per_direction * budget.replications)
    if size < 16:
        raise e.ResolutionError(
            "the node budget is too small for a randomized rule",
            info={"quantity": "max_nodes", "value": budget.max_nodes},
        )
    # round down to a power of 2, the balance of Sobol sequences
    return 2 ** int(math.log2(size))


def _cone_rays(
    apex: Array,
    bases: Sequence[Array],
    lam: rules.Rule,
    k: int,
) -> Tuple[Array, Array, Array]:
    """
    Rays from *apex* to the nodes of the base simplices.

    Every base is a (k, n) array of vertices of a (k-1)-simplex.
    """
    dirs, lens, wts = [], [], []
    for base in bases:
        edges = base - apex
        vol = simplex_measure(edges) * math.factorial(k)
        if vol <= 1e-14 * max(1.0, float(np.abs(edges).max())) ** k:
            continue
        z = base[0] + lam.points @ (base[1:] - base[0])
        d = z - apex
        ell = np.sqrt(np.einsum("mi,mi->m", d, d))
        dirs.append(d / ell[:, None])
        lens.append(ell)
        wts.append(vol * lam.weights / ell ** k)

    if not dirs:
        n = len(apex)
        return np.zeros((0, n)), np.zeros(0), np.zeros(0)
    return np.concatenate(dirs), np.concatenate(lens), np.concatenate(wts)


def _polytope_family(
    poly: ConvexPolytope,
    apex: Array,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int],
    pole_at_apex: bool = True,
) -> RuleFamily:
    n = poly.dim
    q = _radial_order(budget, degree, pole_at_apex)
    if beta >= n:
        raise e.DivergenceError(
            f"rho**-{beta:g} is not integrable at a boundary point in {n}D",
            info={"quantity": "beta", "value": beta, "bound": n},
        )

    cones = poly.cone_simplices(apex)
    bases = [c[1:] for c in cones]

    def make(q: int, lam: rules.Rule) -> RayRule:
        dirs, lens, wts = _cone_rays(apex, bases, lam, n)
        return RayRule(apex, dirs, lens, wts, n, q, beta)

    p = _fit(
        lambda p: q * len(bases) * rules.simplex_count(n - 1, p),
        budget.max_nodes,
        budget.angular_order,
        _least_simplex_order(n - 1, budget, degree),
    )
    if p is not None:
        logger.debug(
            "polytope rule: %s cones, radial %s, base %s", len(bases), q, p
        )
        return RuleFamily(
            "escalation",
            [
                [make(q, rules.simplex_rule(n - 1, p))],
                [make(_lower(q), rules.simplex_rule(n - 1, _lower(p)))],
            ],
        )

    size = _qmc_size(budget, q * len(bases))
    logger.debug(
        "polytope rule: %s cones, radial %s, %s random base nodes",
        len(bases),
        q,
        size,
    )
    return RuleFamily(
        "replication",
        [
            [make(q, rules.simplex_qmc(n - 1, size, budget.seed + i))]
            for i in range(budget.replications)
        ],
    )


def _sphere_center_family(ball: Ball, budget: SampleBudget) -> RuleFamily:
    n = ball.dim

    def make(srule: rules.Rule) -> PointRule:
        pts = ball.center + ball.radius * srule.points
        w = srule.weights * ball.radius ** (n - 1)
        return PointRule(pts, w, srule.points)

    p = _fit(
        lambda p: rules.sphere_count(n, p),
        budget.max_nodes,
        budget.angular_order,
        MIN_ANGULAR_ORDER,
    )
    if p is not None:
        return RuleFamily(
            "escalation",
            [
                [make(rules.sphere_rule(n, p))],
                [make(rules.sphere_rule(n, _lower(p)))],
            ],
        )

    size = _qmc_size(budget, 1)
    return RuleFamily(
        "replication",
        [
            [make(rules.sphere_qmc(n, size, budget.seed + i))]
            for i in range(budget.replications)
        ],
    )


def _sphere_pole_family(
    ball: Ball,
    y: Array,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int],
) -> RuleFamily:
    n = ball.dim
    R = ball.radius
    if beta >= n - 1:
        raise e.DivergenceError(
            f"rho**-{beta:g} is not integrable on a {n - 1}D surface",
            info={"quantity": "beta", "value": beta, "bound": n - 1},
        )
    axis = (y - ball.center) / R
    basis = linalg.null_space(axis[None, :])
    qt = budget.order

    def make(qt: int, eta: rules.Rule) -> PointRule:
        # t = sin(psi / 2)**2, psi the angle from the pole
        trule = rules.gauss_jacobi(qt, (n - 3) / 2.0, (n - 3 - beta) / 2.0)
        t = np.repeat(trule.points, len(eta))
        wt = np.repeat(trule.weights, len(eta))
        cos = 1.0 - 2.0 * t
        sin = 2.0 * np.sqrt(t * (1.0 - t))
        e_pts = np.tile(eta.points, (qt, 1))
        normal = cos[:, None] * axis + sin[:, None] * (e_pts @ basis.T)
        w = (
            wt
            * np.tile(eta.weights, qt)
            * R ** (n - 1)
            * 2.0 ** (n - 2)
            * (2.0 * R) ** -beta
        )
        return PointRule(ball.center + R * normal, w, normal, beta)

    if n == 2:
        eta = rules.sphere_rule(1, 1)
        return RuleFamily(
            "escalation", [[make(qt, eta)], [make(_lower(qt), eta)]]
        )

    p = _fit(
        lambda p: qt * rules.sphere_count(n - 1, p),
        budget.max_nodes,
        budget.angular_order,
        MIN_ANGULAR_ORDER,
    )
    if p is not None:
        return RuleFamily(
            "escalation",
            [
                [make(qt, rules.sphere_rule(n - 1, p))],
                [make(_lower(qt), rules.sphere_rule(n - 1, _lower(p)))],
            ],
        )

    size = _qmc_size(budget, qt)
    return RuleFamily(
        "replication",
        [
            [make(qt, rules.sphere_qmc(n - 1, size, budget.seed + i))]
            for i in range(budget.replications)
        ],
    )


def _facets_family(
    poly: ConvexPolytope,
    y: Array,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int],
) -> RuleFamily:
    n = poly.dim
    k = n - 1
    on = set(poly.active_facets(y)) if poly.contains(y) else set()
    if on and beta >= k:
        raise e.DivergenceError(
            f"rho**-{beta:g} is not integrable on a {k}D facet",
            info={"quantity": "beta", "value": beta, "bound": k},
        )

    facets = []
    for f in poly.facets:
        bases = poly.facet_boundary(f)
        if f.index in on:
            facets.append((f, y, beta, True, bases))
        else:
            facets.append((f, f.centroid, 0.0, False, bases))

    nbases = sum(len(fb[-1]) for fb in facets)
    q = budget.order

    def make(q: int, lam: rules.Rule) -> List[QuadratureRule]:
        rv: List[QuadratureRule] = []
        for f, apex, b, at_pole, bases in facets:
            qf = min(q, _radial_order(budget, degree, at_pole))
            dirs, lens, wts = _cone_rays(apex, bases, lam, k)
            if len(lens):
                rv.append(RayRule(apex, dirs, lens, wts, k, qf, b, f.normal))
        return rv

    p = _fit(
        lambda p: q * nbases * rules.simplex_count(k - 1, p),
        budget.max_nodes,
        budget.angular_order,
        _least_simplex_order(k - 1, budget, degree),
    )
    if p is not None:
        return RuleFamily(
            "escalation",
            [
                make(q, rules.simplex_rule(k - 1, p)),
                make(_lower(q), rules.simplex_rule(k - 1, _lower(p))),
            ],
        )

    size = _qmc_size(budget, q * nbases)
    return RuleFamily(
        "replication",
        [
            make(q, rules.simplex_qmc(k - 1, size, budget.seed + i))
            for i in range(budget.replications)
        ],
    )


# Public integration functions


def _weighted(
    f: Integrand, y: Array, beta: float
) -> NodesIntegrand:
    def integrand(nodes: Nodes) -> Array:
        vals = np.asarray(f(nodes.points), dtype=float)
        shift = nodes.beta - beta
        if shift:
            rho = np.linalg.norm(nodes.points - y, axis=1)
            vals = vals * rho ** shift
        return vals

    return integrand


def integrate_generic(
    domain: Domain,
    y: Sequence[float],
    f: Integrand,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int] = None,
    workers: int = 1,
) -> Integral:
    """
    Integrate ``f(x) * |x - y|**-beta`` on a ball or a convex polytope.

    Polytopes are decomposed in simplicial cones from the pole if it is in
    the closed domain, from the Chebyshev center otherwise.
    """
    y = np.asarray(y, dtype=float)
    family = volume_family(domain, y, beta, budget, degree)
    return family.integrate(_weighted(f, y, beta), workers)


def integrate_ball_pole_boundary(
    ball: Ball,
    y: Sequence[float],
    f: Integrand,
    beta: float,
    budget: SampleBudget,
    degree: Optional[int] = None,
    workers: int = 1,
) -> Integral:
    """
    Integrate ``f(x) * |x - y|**-beta`` on a ball with *y* on its sphere.

    The rays start from *y*; their length is the chord ``2 R <omega, nu>``,
    *nu* the inward normal in *y*.
    """
    y = np.asarray(y, dtype=float)
    if ball.location(y) is not Location.BOUNDARY:
        raise e.PreconditionError(
            "the pole must lie on the sphere",
            info={"quantity": "distance", "value": float(ball.distance(y))},
        )
    family = _ball_boundary_family(ball, y, beta, budget, degree)
    return family.integrate(_weighted(f, y, beta), workers)


def integrate_surface(
    domain: Domain,
    y: Sequence[float],
    g: Callable[[Array, Array], Array],
    beta: float,
    budget: SampleBudget,
    degree: Optional[int] = None,
    workers: int = 1,
) -> Integral:
    """
    Integrate ``g(x, N(x)) * |x - y|**-beta`` on the boundary.

    *g* receives the points and their outward normals.
    """
    y = np.asarray(y, dtype=float)
    family = surface_family(domain, y, beta, budget, degree)

    def integrand(nodes: Nodes) -> Array:
        vals = np.asarray(g(nodes.points, nodes.normals), dtype=float)
        shift = nodes.beta - beta
        if shift:
            rho = np.linalg.norm(nodes.points - y, axis=1)
            vals = vals * rho ** shift
        return vals

    return family.integrate(integrand, workers)


class Shell(NamedTuple):
    inner: float
    outer: float
    value: float
    error: float


class ShellIntegral(NamedTuple):
    value: float
    error: float
    shells: List[Shell]
    core: Optional[Shell]


def integrate_shells(
    domain: Domain,
    y: Sequence[float],
    f: Integrand,
    beta: float,
    budget: SampleBudget,
    max_shells: int = 60,
) -> ShellIntegral:
    """
    Integrate ``f(x) * |x - y|**-beta`` by dyadic shells around *y*.

    Shell j is ``{x : D 2**-(j+1) <= rho <= D 2**-j}``, D the largest
    distance from *y* to the domain. Shells are added until their
    contribution falls below the tolerance; the ball left around *y* is
    integrated at once if ``rho**-beta`` is integrable there.

    Raise DivergenceError if the shell contributions stop decreasing.
    """
    y = np.asarray(y, dtype=float)
    if domain.location(y) is Location.EXTERIOR:
        raise e.PreconditionError("dyadic shells need a pole in the domain")

    base = volume_family(domain, y, 0.0, budget)
    variants = [
        [r for r in v if isinstance(r, RayRule)] for v in base.variants
    ]
    rays = variants[0]
    reach = max(float(np.max(r.lengths)) for r in rays if len(r.lengths))
    integrand = _weighted(f, y, beta)

    shells: List[Shell] = []
    total = 0.0
    small = growing = 0
    for j in range(max_shells):
        hi = reach * 2.0 ** -j
        lo = hi / 2.0
        fam = RuleFamily(
            base.kind,
            [[r.with_shell(lo, hi, beta) for r in v] for v in variants],
        )
        res = fam.integrate(integrand)
        shells.append(Shell(lo, hi, res.value, res.error))
        total += res.value
        logger.debug("shell %s [%g, %g]: %g", j, lo, hi, res.value)

        prev = abs(shells[-2].value) if j else 0.0
        if prev and abs(res.value) >= prev * (1.0 - 1e-3):
            growing += 1
            if growing >= 3:
                raise e.DivergenceError(
                    "the dyadic shells contributions don't decrease",
                    info={
                        "quantity": "shell value",
                        "value": res.value,
                        "bound": prev,
                    },
                )
        else:
            growing = 0

        if abs(res.value) <= budget.tol * abs(total):
            small += 1
            if small >= 2:
                break
        else:
            small = 0

    inner = shells[-1].inner
    core = None
    error = math.fsum(s.error for s in shells)
    if beta < rays[0].k:
        fam = RuleFamily(
            base.kind,
            [[r.truncated(inner, beta) for r in v] for v in variants],
        )
        res = fam.integrate(integrand)
        core = Shell(0.0, inner, res.value, res.error)
        error += res.error
    else:
        # bound the geometric tail with the last shell
        error += abs(shells[-1].value)

    value = math.fsum(
        [s.value for s in shells] + ([core.value] if core else [])
    )
    return ShellIntegral(value, error, shells, core)
