"""
Quadrature budgets and their configuration sources.
"""

# Copyright (C) 2020 The biharm Team

import re
import json
from typing import Any, Dict, Mapping, NamedTuple, Union

from . import errors as e

SEED_MAX = 2 ** 64 - 1


class SampleBudget(NamedTuple):
    """
    How much work a quadrature is allowed to do.

    Build it with `make_budget()` to have the values validated.
    """

    tol: float = 1e-7
    """Target relative tolerance."""

    max_nodes: int = 2 ** 22
    """Maximum number of nodes of a single rule."""

    seed: int = 0
    """Seed of every randomized rule (scrambling, replications)."""

    order: int = 24
    """Number of radial Gauss nodes."""

    angular_order: int = 24
    """Number of Gauss nodes per polar angle of a sphere rule."""

    replications: int = 8
    """Randomized replications used by low-discrepancy rules."""

    def scaled(self, factor: float) -> "SampleBudget":
        """Return a budget with node counts multiplied by *factor*."""
        if factor == 1:
            return self
        return make_budget(
            self,
            max_nodes=max(1000, int(self.max_nodes * factor)),
            order=max(4, int(round(self.order * factor ** 0.5))),
            angular_order=max(
                4, int(round(self.angular_order * factor ** 0.5))
            ),
        )


# names accepted in config sources, mapped to the field names
_aliases = {
    "tol": "tol",
    "maxNodes": "max_nodes",
    "max_nodes": "max_nodes",
    "seed": "seed",
    "order": "order",
    "angularOrder": "angular_order",
    "angular_order": "angular_order",
    "replications": "replications",
}

BudgetSource = Union[str, Mapping[str, Any], SampleBudget, None]


def make_budget(source: BudgetSource = None, **kwargs: Any) -> SampleBudget:
    """
    Merge a config source and keyword params into a validated budget.

    *source* may be a JSON object string, a ``key=value`` string, a mapping
    or another budget. Keyword arguments override the source; None values
    are ignored.

    Raise InterfaceError if the input doesn't make a valid budget.
    """
    params = budget_to_dict(source)
    for k, v in kwargs.items():
        if v is not None:
            params[_field(k)] = v

    try:
        defaults = SampleBudget._field_defaults
        budget = SampleBudget(
            tol=float(params.get("tol", defaults["tol"])),
            max_nodes=int(params.get("max_nodes", defaults["max_nodes"])),
            seed=int(params.get("seed", defaults["seed"])),
            order=int(params.get("order", defaults["order"])),
            angular_order=int(
                params.get("angular_order", defaults["angular_order"])
            ),
            replications=int(
                params.get("replications", defaults["replications"])
            ),
        )
    except (TypeError, ValueError) as ex:
        raise e.InterfaceError(f"invalid budget: {ex}")

    _validate(budget)
    return budget


def budget_to_dict(source: BudgetSource) -> Dict[str, Any]:
    """
    Convert a budget source into a dictionary of parameters.

    Raise InterfaceError if the source is not valid.
    """
    if source is None:
        return {}
    if isinstance(source, SampleBudget):
        return source._asdict()
    if isinstance(source, Mapping):
        return {_field(k): v for k, v in source.items()}
    if isinstance(source, str):
        return _parse_string(source)

    raise e.InterfaceError(
        f"budget source should be a string or a mapping, got {source!r}"
    )


def _parse_string(source: str) -> Dict[str, Any]:
    source = source.strip()
    if not source:
        return {}

    if source.startswith("{"):
        try:
            obj = json.loads(source)
        except json.JSONDecodeError as ex:
            raise e.InterfaceError(f"bad budget json: {ex}")
        if not isinstance(obj, dict):
            raise e.InterfaceError("budget json should be an object")
        return {_field(k): v for k, v in obj.items()}

    rv = {}
    for item in re_space.split(source):
        key, sep, value = item.partition("=")
        if not sep or not value:
            raise e.InterfaceError(f"bad budget parameter: {item!r}")
        rv[_field(key)] = value
    return rv


re_space = re.compile(r"\s+")


def _field(key: str) -> str:
    try:
        return _aliases[key]
    except KeyError:
        raise e.InterfaceError(f"unknown budget parameter: {key!r}")


def _validate(budget: SampleBudget) -> None:
    if not 0.0 < budget.tol < 1.0:
        raise e.InterfaceError(
            f"budget tolerance should be in (0, 1), got {budget.tol}"
        )
    if budget.max_nodes < 1000:
        raise e.InterfaceError(
            f"budget max_nodes should be at least 1000,"
            f" got {budget.max_nodes}"
        )
    if not 0 <= budget.seed <= SEED_MAX:
        raise e.InterfaceError(
            f"budget seed should be a 64 bits unsigned, got {budget.seed}"
        )
    if budget.order < 2 or budget.angular_order < 2:
        raise e.InterfaceError("rule orders should be at least 2")
    if budget.replications < 2:
        raise e.InterfaceError("at least 2 replications are needed")
