import pytest

from biharm import InterfaceError
from biharm.config import SampleBudget, budget_to_dict, make_budget


def test_defaults():
    b = make_budget()
    assert b == SampleBudget()
    assert b.tol == 1e-7
    assert b.max_nodes == 2 ** 22
    assert b.seed == 0
    assert b.order == 24
    assert b.angular_order == 24
    assert b.replications == 8


@pytest.mark.parametrize(
    "source, kwargs, exp",
    [
        ("", {}, {}),
        ("tol=1e-8", {}, {"tol": 1e-8}),
        ("tol=1e-8 seed=3", {}, {"tol": 1e-8, "seed": 3}),
        ("tol=1e-8", {"tol": 1e-9}, {"tol": 1e-9}),
        ("", {"seed": 5, "order": None}, {"seed": 5}),
        (
            '{"tol": 1e-6, "maxNodes": 5000}',
            {},
            {"tol": 1e-6, "max_nodes": 5000},
        ),
        ({"angularOrder": 10}, {}, {"angular_order": 10}),
        ({"angular_order": 10}, {"seed": 1}, {"angular_order": 10, "seed": 1}),
        (SampleBudget(seed=7), {"order": 8}, {"seed": 7, "order": 8}),
    ],
)
def test_make_budget(source, kwargs, exp):
    b = make_budget(source, **kwargs)
    assert b == SampleBudget(**exp)


@pytest.mark.parametrize(
    "source, kwargs",
    [
        ("hello", {}),
        ("tol=", {}),
        ("foo=bar", {}),
        ("tol=abc", {}),
        ("tol=2", {}),
        ("tol=0", {}),
        ("maxNodes=10", {}),
        ("seed=-1", {}),
        (f"seed={2 ** 64}", {}),
        ("order=1", {}),
        ("replications=1", {}),
        ('{"tol": ', {}),
        ("[1, 2]", {}),
        ("", {"wat": 1}),
        (42, {}),
    ],
)
def test_make_budget_bad(source, kwargs):
    with pytest.raises(InterfaceError):
        make_budget(source, **kwargs)


def test_budget_to_dict():
    assert budget_to_dict(None) == {}
    assert budget_to_dict("tol=1e-3") == {"tol": "1e-3"}
    assert budget_to_dict({"maxNodes": 2000}) == {"max_nodes": 2000}
    b = SampleBudget(seed=3)
    assert make_budget(budget_to_dict(b)) == b


@pytest.mark.parametrize("factor", [0.25, 1, 4])
def test_scaled(factor):
    b = SampleBudget()
    s = b.scaled(factor)
    assert s.tol == b.tol
    assert s.seed == b.seed
    if factor == 1:
        assert s is b
    elif factor > 1:
        assert s.max_nodes > b.max_nodes
        assert s.order > b.order
    else:
        assert s.max_nodes < b.max_nodes
        assert s.order < b.order
