import math

import numpy as np
import pytest

from biharm import DomainError, InterfaceError, InternalError
from biharm import PreconditionError, ResolutionError
from biharm.decay import caccioppoli_check, corner_experiment, decay_fit
from biharm.decay import dyadic_radii, fit_exponent, local_energy
from biharm.decay import weighted_caccioppoli
from biharm.enums import SolveMethod
from biharm.geometry import Polygon2D
from biharm.poly import MultiPoly
from biharm.solver import Grid, analytic_data, half_plane_fixtures
from biharm.solver import solve_grid

X = MultiPoly.variable(2, 0)
Y = MultiPoly.variable(2, 1)
Q = [0.0, 0.0]


def test_dyadic_radii():
    assert dyadic_radii(1.0, 4) == [1.0, 0.5, 0.25, 0.125]
    with pytest.raises(InterfaceError):
        dyadic_radii(0.0, 3)
    with pytest.raises(InterfaceError):
        dyadic_radii(1.0, 0)


def test_energy_y2():
    # |grad y**2|**2 = 4 y**2 on the half disk
    radii = [1.0, 0.5, 0.2]
    got = local_energy(Y ** 2, Q, radii)
    for r, en in zip(radii, got):
        assert en == pytest.approx(math.pi / 2 * r ** 4, rel=1e-10)


def test_energy_translated():
    q = [0.3, 0.0]
    u = (X - 0.3) * Y ** 2
    got = local_energy(u, q, [0.4, 0.1])
    exp = local_energy(X * Y ** 2, Q, [0.4, 0.1])
    assert got == pytest.approx(exp, rel=1e-10)


@pytest.mark.parametrize("name, exp", [("y^2", 4.0), ("xy^2", 6.0)])
def test_fixture_exponent(name, exp):
    fix = {f.name: f for f in half_plane_fixtures()}[name]
    fit = decay_fit(fix.poly, Q, 1.0, count=6)
    assert fit.exponent == pytest.approx(exp, abs=0.05)
    assert fit.window == [1, 2, 3, 4]
    assert len(fit.radii) == len(fit.energies) == 6
    table = fit.log_table()
    assert table[0] == pytest.approx((0.0, math.log(fit.energies[0])))


@pytest.mark.parametrize("name", ["y^2", "xy^2"])
def test_caccioppoli_scale_invariance(name):
    fix = {f.name: f for f in half_plane_fixtures()}[name]
    ratios = [caccioppoli_check(fix.poly, Q, r) for r in (0.1, 0.2, 0.4)]
    for r in ratios[1:]:
        assert r == pytest.approx(ratios[0], rel=0.01)
    assert all(r > 0 for r in ratios)


def test_caccioppoli_homogeneous():
    u = X * Y ** 2 + Y ** 2
    r1 = caccioppoli_check(u, Q, 0.3)
    r2 = caccioppoli_check(-7.5 * u, Q, 0.3)
    assert r2 == pytest.approx(r1, rel=1e-12)


def test_caccioppoli_bad():
    with pytest.raises(InterfaceError):
        caccioppoli_check(Y ** 2, Q, 0.0)
    with pytest.raises(PreconditionError):
        caccioppoli_check(MultiPoly.constant(2, 0.0), Q, 0.5)
    with pytest.raises(DomainError):
        caccioppoli_check(MultiPoly.variable(3, 0), [0.0] * 3, 0.5)


@pytest.mark.parametrize("alpha", [0.0, 0.5, 1.5])
def test_weighted_caccioppoli(alpha):
    ratios = [
        weighted_caccioppoli(Y ** 2, Q, r, alpha) for r in (0.1, 0.2, 0.4)
    ]
    for r in ratios[1:]:
        assert r == pytest.approx(ratios[0], rel=1e-8)


@pytest.mark.parametrize("alpha", [-0.1, 2.0, 3.0])
def test_weighted_caccioppoli_bad(alpha):
    with pytest.raises(PreconditionError) as excinfo:
        weighted_caccioppoli(Y ** 2, Q, 0.5, alpha)
    assert excinfo.value.info["bound"] == 2


def test_fit_errors():
    with pytest.raises(InterfaceError):
        fit_exponent(Q, [1.0, 0.5, 0.25], [1.0, 0.1, 0.01])
    with pytest.raises(PreconditionError) as excinfo:
        fit_exponent(Q, [1.0, 0.5, 0.25, 0.125], [1.0, 0.1, 0.0, 0.0])
    assert excinfo.value.info["value"] == 0.0


def test_fit_window():
    radii = dyadic_radii(1.0, 5)
    energies = [r ** 3 for r in radii]
    energies[0] = 100.0
    fit = fit_exponent(Q, radii, energies)
    assert fit.exponent == pytest.approx(3.0)
    assert fit.stderr == pytest.approx(0.0, abs=1e-10)
    fit = fit_exponent(Q, radii, energies, window=[0, 1, 2, 3, 4])
    assert fit.exponent > 3.0


def test_radii_order():
    with pytest.raises(InterfaceError):
        local_energy(Y ** 2, Q, [0.5, 1.0])
    with pytest.raises(InterfaceError):
        local_energy(Y ** 2, Q, [0.5, 0.5])


def test_energy_increasing():
    # a sector with the angles reversed gives negative energies
    with pytest.raises(InternalError):
        local_energy(Y ** 2, Q, [1.0, 0.5], sector=(math.pi, 0.0))


def test_grid_energy():
    rect = Polygon2D([[-1, 0], [1, 0], [1, 2], [-1, 2]])
    grid = Grid(rect, 1 / 32)
    res = solve_grid(grid, analytic_data(grid, Y ** 2))
    got = local_energy(res, Q, [0.5, 0.25])
    assert got[0] == pytest.approx(math.pi / 2 * 0.5 ** 4, rel=0.1)
    assert got[1] == pytest.approx(math.pi / 2 * 0.25 ** 4, rel=0.1)

    with pytest.raises(ResolutionError):
        local_energy(res, Q, [0.5, 0.1])

    assert 0 < caccioppoli_check(res, Q, 0.25) < math.inf
    with pytest.raises(ResolutionError):
        caccioppoli_check(res, Q, 0.1)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(5))
def test_corner_experiment(seed):
    exp = corner_experiment(seed, method=SolveMethod.DIRECT)
    assert exp.seed == seed
    assert exp.h == 1 / 128
    assert exp.reentrant.q == [1.0, 1.0]
    assert len(exp.convex) == 1
    assert exp.ordered
    assert exp.reentrant.exponent < exp.convex[0].exponent
    assert np.isfinite(exp.reentrant.exponent)
