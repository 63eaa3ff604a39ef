"""
biharm exceptions

The exceptions raised by the package are defined in the following
hierarchy::

    Exceptions
    |__Warning
    |__Error
       |__InterfaceError
       |__ComputationError
          |__DomainError
          |__DegreeError
          |__PreconditionError
          |__DivergenceError
          |__ResolutionError
          |__NotSupportedError
          |__InternalError
"""

# Copyright (C) 2020 The biharm Team

from typing import Any, Dict, Mapping, Optional, Sequence, Tuple, Union


class Warning(Exception):
    """
    Exception raised for important warnings.

    For example a linear solver exhausting its iterations.
    """


ErrorInfo = Optional[Mapping[str, Any]]


class Error(Exception):
    """
    Base exception for all the errors biharm will raise.
    """

    def __init__(self, *args: Sequence[Any], info: ErrorInfo = None):
        super().__init__(*args)
        self._info = info

    @property
    def diag(self) -> "Diagnostic":
        return Diagnostic(self._info)

    def __reduce__(self) -> Union[str, Tuple[Any, ...]]:
        res = super().__reduce__()
        if isinstance(res, tuple) and len(res) >= 3:
            res[2]["_info"] = self._info_to_dict(self._info)

        return res

    @classmethod
    def _info_to_dict(cls, info: ErrorInfo) -> Optional[Dict[str, Any]]:
        """
        Convert the info to a plain dictionary to make it picklable.
        """
        if info is None:
            return None
        return {k: _plain(v) for k, v in info.items()}


class InterfaceError(Error):
    """
    An error related to the toolkit interface rather than to the computation.

    Examples may be an invalid configuration, an unknown identity name, a
    malformed JSON description.
    """


class ComputationError(Error):
    """
    An error related to the numerical computation.
    """


class DomainError(ComputationError):
    """
    An error caused by an invalid domain or point.

    Examples may be a dimension mismatch, an empty or unbounded polytope, a
    self-intersecting polygon.
    """


class DegreeError(ComputationError):
    """
    An error raised when a polynomial exceeds the degree cap.
    """


class PreconditionError(ComputationError):
    """
    An error raised when the hypotheses of a computation are not met.

    Examples may be a field not vanishing with its gradient on the boundary,
    a pole on the boundary with an exponent too large to be integrable.
    """


class DivergenceError(ComputationError):
    """
    An error raised when a singular integral diverges.
    """


class ResolutionError(ComputationError):
    """
    An error raised when a discretization cannot resolve a requested scale.

    Examples may be a radius smaller than a few grid steps, a polygon whose
    vertices don't lie on the grid.
    """


class NotSupportedError(ComputationError):
    """
    An operation was requested on a domain variant that doesn't support it.
    """


class InternalError(ComputationError):
    """
    An error generated when an internal invariant is broken.
    """


class Diagnostic:
    """Details about a numerical error, available as `Error.diag`."""

    def __init__(self, info: ErrorInfo):
        self._info: Mapping[str, Any] = info or {}

    @property
    def quantity(self) -> Optional[str]:
        """The name of the quantity which failed the check."""
        return self._info.get("quantity")

    @property
    def value(self) -> Optional[Any]:
        """The value found."""
        return self._info.get("value")

    @property
    def bound(self) -> Optional[Any]:
        """The limit the value should have respected."""
        return self._info.get("bound")

    def get(self, key: str, default: Any = None) -> Any:
        return self._info.get(key, default)

    def __repr__(self) -> str:
        return f"<Diagnostic {dict(self._info)!r}>"


def _plain(value: Any) -> Any:
    # numpy scalars and arrays don't survive a round trip in every context
    tolist = getattr(value, "tolist", None)
    return tolist() if tolist is not None else value
