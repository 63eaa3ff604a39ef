import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from biharm import DegreeError, DomainError, InterfaceError
from biharm.geometry import Ball, ConvexPolytope
from biharm.jets import PolyField, ProductField, WeightJet, clamped_ball
from biharm.jets import clamped_polytope, leibniz, vanishing_ball
from biharm.jets import shared_jets, vanishing_polytope, weight_jet
from biharm.poly import MultiPoly


def x(i, dim=2):
    return MultiPoly.variable(dim, i)


def assert_jets_close(j1, j2, **kwargs):
    for f in j1._fields:
        a, b = getattr(j1, f), getattr(j2, f)
        if a is None or b is None:
            assert a is b, f
        else:
            assert np.allclose(a, b, **kwargs), f


pts3 = np.array([[0.1, 0.2, 0.3], [-0.5, 0.4, 0.9], [1.0, -1.0, 0.5]])


def test_poly_field_jet():
    p = x(0, 3) ** 3 * x(1, 3) + x(2, 3) ** 4 - 2 * x(0, 3) * x(2, 3)
    j = PolyField(p).jet(pts3, third=True)
    for k, pt in enumerate(pts3):
        assert j.value[k] == pytest.approx(p(pt))
        for i in range(3):
            assert j.grad[k, i] == pytest.approx(p.deriv(i)(pt))
            for jj in range(3):
                h = p.deriv(i).deriv(jj)
                assert j.hess[k, i, jj] == pytest.approx(h(pt))
                for kk in range(3):
                    t = h.deriv(kk)
                    assert j.third[k, i, jj, kk] == pytest.approx(t(pt))
        assert j.lap[k] == pytest.approx(p.laplacian()(pt))
        assert j.bilap[k] == pytest.approx(p.bilaplacian()(pt))
        for i in range(3):
            gl = p.laplacian().deriv(i)
            assert j.grad_lap[k, i] == pytest.approx(gl(pt))


def test_poly_field_fd(fd):
    p = (1 + x(0) * x(1)) ** 3 - x(1) ** 5
    f = PolyField(p)
    oracle = fd(lambda pts: f.jet(pts).value)
    pt = np.array([0.3, -0.7])
    j = f.jet(pt[None, :])
    assert np.allclose(j.grad[0], oracle.grad(pt), rtol=1e-6)
    assert np.allclose(j.hess[0], oracle.hess(pt), rtol=1e-4, atol=1e-5)


def test_poly_field_no_third():
    j = PolyField(x(0) ** 2).jet(np.zeros((1, 2)))
    assert j.third is None


def test_poly_field_bad_points():
    with pytest.raises(DomainError):
        PolyField(x(0)).jet(np.zeros((1, 3)))


@st.composite
def small_polys(draw, dim=3):
    exps = st.tuples(*[st.integers(0, 2)] * dim)
    terms = draw(
        st.dictionaries(exps, st.floats(-2, 2, width=32), max_size=4)
    )
    return MultiPoly(dim, terms)


@settings(max_examples=30, deadline=None)
@given(small_polys(), small_polys())
def test_leibniz_matches_expansion(p, q):
    ja = PolyField(p).jet(pts3, third=True)
    jb = PolyField(q).jet(pts3, third=True)
    jpq = PolyField(p * q).jet(pts3, third=True)
    assert_jets_close(leibniz(ja, jb), jpq, rtol=1e-9, atol=1e-9)


def test_product_field():
    p = 1 + x(0, 3)
    q = x(1, 3) ** 2 - x(2, 3)
    r = x(0, 3) * x(2, 3)
    f = ProductField([PolyField(p), PolyField(q), PolyField(r)], coef=-2.0)
    assert f.dim == 3
    assert f.degree == 5
    exp = PolyField(-2 * p * q * r).jet(pts3, third=True)
    assert_jets_close(f.jet(pts3, third=True), exp)
    assert_jets_close(f.scaled(-0.5).jet(pts3, third=True), exp.scaled(-0.5))


def test_shared_jets():
    base = clamped_ball([0.0, 0.0, 0.0], 1.0)
    polys = [x(0, 3), 1 - x(2, 3)]
    fields = [ProductField([base, PolyField(p)]) for p in polys]
    fields.append(base)
    jets = shared_jets(fields, pts3)
    assert len(jets) == 3
    for f, j in zip(fields, jets):
        assert_jets_close(j, f.jet(pts3))


def test_product_field_bad():
    with pytest.raises(InterfaceError):
        ProductField([])
    with pytest.raises(DomainError):
        ProductField([PolyField(x(0, 2)), PolyField(x(0, 3))])
    big = PolyField(MultiPoly.monomial((12, 0)))
    with pytest.raises(DegreeError):
        ProductField([big, big, PolyField(x(1))])
    assert ProductField([big, big]).degree == 24


def test_clamped_ball():
    b = Ball([0.5, 0.0, -0.5], 1.5)
    u = clamped_ball(b.center, b.radius, 1 + x(1, 3))
    dirs = np.random.default_rng(0).standard_normal((50, 3))
    dirs /= np.linalg.norm(dirs, axis=1)[:, None]
    j = u.jet(b.center + b.radius * dirs)
    assert np.allclose(j.value, 0, atol=1e-12)
    assert np.allclose(j.grad, 0, atol=1e-12)
    assert not np.allclose(j.hess, 0)
    assert u.jet(b.center[None, :]).value[0] == pytest.approx(1.5 ** 4)


def test_clamped_polytope():
    c = ConvexPolytope.simplex(3)
    u = clamped_polytope(c.halfspaces)
    for f in c.facets:
        j = u.jet(f.vertices + 0.1 * (f.centroid - f.vertices))
        assert np.allclose(j.value, 0, atol=1e-14)
        assert np.allclose(j.grad, 0, atol=1e-14)
    assert u.jet(c.chebyshev_center[None, :]).value[0] > 0


def test_vanishing_fields():
    u = vanishing_ball([0.0, 0.0], 1.0)
    j = u.jet(np.array([[0.6, 0.8]]))
    assert j.value[0] == pytest.approx(0, abs=1e-14)
    assert np.allclose(j.grad[0], [-1.2, -1.6])

    c = ConvexPolytope.cube(2)
    u = vanishing_polytope(c.halfspaces)
    j = u.jet(np.array([[1.0, 0.5]]))
    assert j.value[0] == pytest.approx(0, abs=1e-14)
    assert abs(j.grad[0, 0]) > 0.01


@pytest.mark.parametrize("n", [2, 3, 5, 8])
@pytest.mark.parametrize("alpha", [0.0, 1.0, 2.5, 4.0])
def test_weight_jet(fd, n, alpha):
    rng = np.random.default_rng(n)
    y = rng.standard_normal(n)
    pt = y + rng.standard_normal(n)
    w = WeightJet(y, alpha)
    v = w.at(pt[None, :])
    oracle = fd(lambda pts: w.at(pts).value)
    assert v.value[0] == pytest.approx(np.linalg.norm(pt - y) ** -alpha)
    assert np.allclose(v.grad[0], oracle.grad(pt), rtol=1e-5, atol=1e-8)
    assert np.allclose(v.hess[0], oracle.hess(pt), rtol=1e-4, atol=1e-6)
    assert v.lap[0] == pytest.approx(np.trace(v.hess[0]), abs=1e-12)

    lap_oracle = fd(lambda pts: w.at(pts).lap)
    assert v.bilap[0] == pytest.approx(
        lap_oracle.lap(pt), rel=1e-3, abs=1e-6
    )


def test_weight_jet_shift():
    w = WeightJet([0.0, 0.0, 0.0], 1.5)
    pts = np.array([[0.3, 0.0, 0.4], [1.0, 2.0, 2.0]])
    v0 = w.at(pts)
    v1 = w.at(pts, shift=2.0)
    rho2 = v0.rho ** 2
    assert np.allclose(v1.value, v0.value * rho2)
    assert np.allclose(v1.grad, v0.grad * rho2[:, None])
    assert np.allclose(v1.hess, v0.hess * rho2[:, None, None])
    assert np.allclose(v1.bilap, v0.bilap * rho2)
    assert np.allclose(v1.rho, v0.rho)


def test_weight_jet_pole():
    w = WeightJet([1.0, 1.0], 2.0)
    with pytest.raises(DomainError):
        w.at(np.array([[0.0, 0.0], [1.0, 1.0]]))
    assert w.dim == 2


@pytest.mark.parametrize("alpha", [0.5, 3.0])
def test_moment_hess(fd, alpha):
    y = np.array([0.2, -0.1, 0.4])
    w = WeightJet(y, alpha)
    pt = np.array([1.0, 0.5, -0.3])
    mh = w.moment_hess(pt[None, :])
    for k in range(3):
        oracle = fd(lambda pts: (pts[:, k] - y[k]) * w.at(pts).value)
        assert np.allclose(mh[0, k], oracle.hess(pt), rtol=1e-4, atol=1e-6)


def test_weight_jet_single():
    v = weight_jet([0.0, 0.0], 2.0, [3.0, 4.0])
    assert v.value[0] == pytest.approx(1 / 25)
    assert np.allclose(v.omega[0], [0.6, 0.8])
    # rho**-2 is harmonic in 4D only
    assert v.lap[0] == pytest.approx(-2 * (2 - 2 - 2) * 5.0 ** -4)
