"""
biharm -- numerical verification of weighted biharmonic identities
"""

# Copyright (C) 2020 The biharm Team

import logging

from .geometry import Ball, ConvexPolytope, Polygon2D
from .poly import MultiPoly
from .jets import PolyField, ProductField, clamped_ball, clamped_polytope
from .jets import vanishing_ball, vanishing_polytope
from .config import SampleBudget, make_budget
from .enums import Format, IdentityId, Pole, SolveMethod
from .identities import evaluate, evaluate_expanded_3_1, consistency_3_22
from .identities import hardy, positivity_chain, positivity_chains
from .constants import alpha_n, lambda_n, p_range, p_upper, quad_form
from .registry import registry

from .errors import Warning, Error, InterfaceError, ComputationError
from .errors import DomainError, DegreeError, PreconditionError
from .errors import DivergenceError, ResolutionError, NotSupportedError
from .errors import InternalError

from .version import __version__

# register default adapters
from . import types

logger = logging.getLogger("biharm")
logger.addHandler(logging.NullHandler())

__all__ = [
    "Ball",
    "ConvexPolytope",
    "Polygon2D",
    "MultiPoly",
    "PolyField",
    "ProductField",
    "clamped_ball",
    "clamped_polytope",
    "vanishing_ball",
    "vanishing_polytope",
    "SampleBudget",
    "make_budget",
    "Format",
    "IdentityId",
    "Pole",
    "SolveMethod",
    "evaluate",
    "evaluate_expanded_3_1",
    "consistency_3_22",
    "hardy",
    "positivity_chain",
    "positivity_chains",
    "alpha_n",
    "lambda_n",
    "p_range",
    "p_upper",
    "quad_form",
    "registry",
    "Warning",
    "Error",
    "InterfaceError",
    "ComputationError",
    "DomainError",
    "DegreeError",
    "PreconditionError",
    "DivergenceError",
    "ResolutionError",
    "NotSupportedError",
    "InternalError",
    "types",
    "__version__",
]
