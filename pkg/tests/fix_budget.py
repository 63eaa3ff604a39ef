import os
import pytest


def pytest_addoption(parser):
    parser.addoption(
        "--budget-scale",
        metavar="FACTOR",
        type=float,
        default=float(os.environ.get("BIHARM_TEST_BUDGET") or 1.0),
        help="Scale factor of the quadrature budgets of the heavier tests"
        " [you can also use the BIHARM_TEST_BUDGET env var].",
    )


@pytest.fixture(scope="session")
def budget_scale(request):
    return request.config.getoption("--budget-scale")


@pytest.fixture(scope="session")
def budget(budget_scale):
    """Return the default `SampleBudget`, scaled by `--budget-scale`."""
    from biharm.config import SampleBudget

    return SampleBudget().scaled(budget_scale)


@pytest.fixture(scope="session")
def small_budget(budget_scale):
    """Return a budget good enough for the low dimensional tests."""
    from biharm.config import make_budget

    return make_budget(
        order=16, angular_order=12, max_nodes=2 ** 18
    ).scaled(budget_scale)
