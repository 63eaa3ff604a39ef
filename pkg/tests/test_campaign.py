import json

import numpy as np
import pytest

from biharm import DivergenceError, DomainError, InterfaceError
from biharm import NotSupportedError
from biharm import adapt
from biharm import campaign as cp
from biharm.campaign import Case, CaseResult, plan, run_campaign, run_case
from biharm.constants import alpha_n
from biharm.enums import IdentityId, Pole
from biharm.geometry import Ball, ConvexPolytope, Polygon2D


def test_make_domain():
    b = cp.make_domain("ball", 3)
    assert isinstance(b, Ball)
    assert b.radius == 1.0
    assert cp.make_domain("cube", 2).volume == pytest.approx(1.0)
    assert cp.make_domain("simplex", 3).volume == pytest.approx(1 / 6)

    d = cp.make_domain('{"type": "cube", "dim": 2, "hi": 2}', 2)
    assert isinstance(d, ConvexPolytope)
    assert d.volume == pytest.approx(4.0)


def test_make_domain_bad():
    with pytest.raises(InterfaceError):
        cp.make_domain("torus", 3)
    with pytest.raises(InterfaceError):
        cp.make_domain("{nope", 3)
    with pytest.raises(DomainError):
        cp.make_domain('{"type": "cube", "dim": 2}', 3)


def test_clamped_field_unsupported():
    with pytest.raises(NotSupportedError):
        cp.clamped_field(Polygon2D.square())


@pytest.mark.parametrize(
    "n, exp",
    [(2, [0.0, 1.0]), (4, [0.0, 1.0, 2.0]), (6, [0.0, 1.0, 2.0, 4.0])],
)
def test_default_alphas(n, exp):
    assert cp.default_alphas(n) == exp


def test_default_alphas_alpha_n():
    got = cp.default_alphas(8)
    assert got[:4] == [0.0, 1.0, 4.0, 6.0]
    assert got[4] == alpha_n(8)


@pytest.mark.parametrize(
    "n, exp",
    [(2, [0.0, 1.0]), (3, [0.0, 1.0]), (4, [0.0, 1.0, 2.0])],
)
def test_convexity_alphas(n, exp):
    assert cp.convexity_alphas(n) == exp


@pytest.mark.parametrize("kind", ["ball", "simplex"])
def test_clamped_fields(kind):
    domain = cp.make_domain(kind, 3)
    polys = [cp.random_poly(3, 2, seed=i) for i in range(3)]
    fields = cp.clamped_fields(domain, polys)
    pts = np.array([[0.1, 0.2, 0.3], [0.2, 0.1, 0.05]])
    for p, u in zip(polys, fields):
        exp = cp.clamped_field(domain, p)
        assert u.degree == exp.degree
        assert np.allclose(u.jet(pts).hess, exp.jet(pts).hess)
        assert np.allclose(u.jet(pts).bilap, exp.jet(pts).bilap)


def test_plan():
    cases = plan(
        [IdentityId.I2_13, IdentityId.I3_3],
        [2, 3],
        ["ball", "cube"],
        [0.0, 1.0],
        ["exterior", "boundary"],
    )
    assert len(cases) == 2 * 2 * 2 * 2 * 2
    assert cases[0] == Case(IdentityId.I2_13, "ball", 2, 0.0, Pole.EXTERIOR)
    assert cases[1] == Case(IdentityId.I3_3, "ball", 2, 0.0, Pole.EXTERIOR)
    assert cases[2].pole is Pole.BOUNDARY_SPHERE_POINT
    assert cases[8].kind == "cube"
    assert cases[10].pole is Pole.BOUNDARY_VERTEX
    assert cases[-1].n == 3


def test_plan_pole_values():
    cases = plan(
        [IdentityId.I2_13], [3], ["cube"], [1], ["boundary-facet-center"]
    )
    assert len(cases) == 1
    assert cases[0].pole is Pole.BOUNDARY_FACET_CENTER
    assert isinstance(cases[0].alpha, float)


def test_plan_default_alphas():
    cases = plan([IdentityId.I2_13], [4], ["ball"], poles=["exterior"])
    assert [c.alpha for c in cases] == [0.0, 1.0, 2.0]


@pytest.mark.parametrize(
    "case, reason",
    [
        (
            Case(IdentityId.I2_13, "ball", 2, 2.0, Pole.BOUNDARY_SPHERE_POINT),
            "n = 2",
        ),
        (Case(IdentityId.I2_13, "cube", 8, 0.0, Pole.EXTERIOR), "degree"),
        (Case(IdentityId.I2_13, "torus", 2, 0.0, Pole.EXTERIOR), "torus"),
    ],
)
def test_infeasible(case, reason):
    got = cp.infeasible(case)
    assert got is not None
    assert reason in got


def test_feasible():
    case = Case(IdentityId.I2_13, "ball", 2, 2.0, Pole.EXTERIOR)
    assert cp.infeasible(case) is None
    case = Case(IdentityId.I2_13, "simplex", 8, 1.0, Pole.BOUNDARY_VERTEX)
    assert cp.infeasible(case) is None


def test_run_case(small_budget):
    case = Case(IdentityId.I2_13, "ball", 2, 1.0, Pole.EXTERIOR)
    res = run_case(case, small_budget)
    assert res.report is not None
    assert res.report.passed
    assert res.passed
    assert res.skipped is None and res.error is None


def test_run_case_skipped(small_budget, caplog):
    case = Case(IdentityId.I2_13, "ball", 2, 3.0, Pole.BOUNDARY_SPHERE_POINT)
    res = run_case(case, small_budget)
    assert res.report is None
    assert res.skipped
    assert res.passed
    assert "skipping" in caplog.text


def test_run_case_error(small_budget, monkeypatch):
    def boom(*args, **kwargs):
        raise DivergenceError("boom")

    monkeypatch.setattr(cp, "evaluate", boom)
    case = Case(IdentityId.I2_13, "ball", 2, 1.0, Pole.EXTERIOR)
    res = run_case(case, small_budget)
    assert res.error == "DivergenceError: boom"
    assert not res.passed

    camp = cp.Campaign([res, CaseResult(case, skipped="no")])
    assert not camp.passed
    assert camp.counts() == {
        "passed": 0,
        "failed": 0,
        "skipped": 1,
        "errors": 1,
    }


def test_run_campaign(small_budget):
    cases = plan(
        [IdentityId.I2_13, IdentityId.I2_19],
        [2],
        ["ball"],
        [0.0, 1.0, 2.0],
        ["exterior", "boundary"],
    )
    camp = run_campaign(cases, small_budget)
    assert [r.case for r in camp.results] == cases
    counts = camp.counts()
    # alpha = 2 is not admissible with a boundary pole in 2D
    assert counts["skipped"] == 2
    assert counts["passed"] == len(cases) - 2
    assert camp.passed

    camp2 = run_campaign(cases, small_budget, workers=3)
    assert camp2 == camp


def test_case_result_json(small_budget):
    case = Case(IdentityId.I3_3, "cube", 2, 1.0, Pole.BOUNDARY_VERTEX)
    res = run_case(case, small_budget)
    data = json.loads(json.dumps(adapt.dump(res)))
    assert data["identity"] == "I3_3"
    assert data["domain"] == "cube"
    assert data["pole"] == "boundary-vertex"
    assert data["report"]["passed"]

    skipped = CaseResult(case, skipped="why")
    assert adapt.dump(skipped)["skipped"] == "why"


def test_random_poly():
    p = cp.random_poly(3, 2, seed=1)
    assert p.dim == 3
    assert p.degree == 2
    assert len(p) == 10
    assert p.coef((0, 0, 0)) == 1.0
    assert p == cp.random_poly(3, 2, seed=1)
    assert p != cp.random_poly(3, 2, seed=2)
