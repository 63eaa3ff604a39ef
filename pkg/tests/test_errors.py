import pickle

import numpy as np
import pytest

import biharm
from biharm import errors as e


def test_hierarchy():
    assert issubclass(e.InterfaceError, e.Error)
    for cls in [
        e.DomainError,
        e.DegreeError,
        e.PreconditionError,
        e.DivergenceError,
        e.ResolutionError,
        e.NotSupportedError,
        e.InternalError,
    ]:
        assert issubclass(cls, e.ComputationError)
        assert not issubclass(cls, e.InterfaceError)
        assert getattr(biharm, cls.__name__) is cls


def test_diag():
    exc = e.PreconditionError(
        "oops", info={"quantity": "alpha", "value": 9, "bound": 8}
    )
    assert exc.diag.quantity == "alpha"
    assert exc.diag.value == 9
    assert exc.diag.bound == 8
    assert exc.diag.get("nope", 42) == 42


def test_diag_empty():
    exc = e.Error("oops")
    assert exc.diag.quantity is None
    assert exc.diag.value is None
    assert exc.diag.bound is None


def test_error_pickle():
    exc = e.DivergenceError(
        "diverges",
        info={"quantity": "beta", "value": np.float64(4.5), "bound": 4},
    )
    exc1 = pickle.loads(pickle.dumps(exc))
    assert isinstance(exc1, e.DivergenceError)
    assert str(exc1) == "diverges"
    assert exc1.diag.quantity == "beta"
    assert exc1.diag.value == 4.5
    assert exc1.diag.bound == 4


def test_error_pickle_no_info():
    exc = e.InternalError("bad")
    exc1 = pickle.loads(pickle.dumps(exc))
    assert isinstance(exc1, e.InternalError)
    assert exc1.diag.value is None


def test_raised_with_diag():
    with pytest.raises(e.PreconditionError) as excinfo:
        biharm.alpha_n(6)
    assert excinfo.value.diag.quantity == "n"
    assert excinfo.value.diag.value == 6
