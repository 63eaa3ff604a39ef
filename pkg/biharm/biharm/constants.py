"""
Explicit constants, exponents and ranges of the weighted estimates.
"""

# Copyright (C) 2020 The biharm Team

import math
import logging
from typing import Dict, Iterable, List, NamedTuple, Optional, Sequence

from . import errors as e

logger = logging.getLogger(__name__)

INF = float("inf")

# the smallest dimension in which the exponent alpha_n is used
ALPHA_MIN_DIM = 8


def quad_form(n: int, alpha: float) -> float:
    """Return ``n**2 + 2 n alpha - 7 alpha**2 - 8 alpha``."""
    return n * n + 2 * n * alpha - 7 * alpha * alpha - 8 * alpha


def alpha_n(n: int) -> float:
    """
    Return the positive root of `quad_form()` in *alpha*.

    The value is defined for every n, but it is only relevant for n >= 8,
    where ``alpha = n - 4`` is not admissible anymore.
    """
    _check_alpha_dim(n)
    return (n - 4 + 2 * math.sqrt(2 * (n * n - n + 2))) / 7


def lambda_n(n: int) -> float:
    """Return the decay exponent ``alpha_n + 2``."""
    return alpha_n(n) + 2


def _check_alpha_dim(n: int) -> None:
    if n < ALPHA_MIN_DIM:
        raise e.PreconditionError(
            f"alpha_n is only used for n >= {ALPHA_MIN_DIM}, got n = {n}:"
            f" in lower dimension alpha = n - 4 is admissible",
            info={"quantity": "n", "value": n, "bound": ALPHA_MIN_DIM},
        )


def p_upper(n: int, lam: float) -> float:
    """
    Return the upper exponent ``2 + 4 / (n - lam)`` given a decay exponent.

    If the decay exponent is at least *n* every exponent is reached.
    """
    if lam >= n:
        return INF
    return 2.0 + 4.0 / (n - lam)


class PRange(NamedTuple):
    """
    The range of the exponents p, ``2 - eps < p < upper + eps``.

    *candidates* maps the name of every bound considered to its value.
    """

    n: int
    convex: bool
    lower: str
    upper: float
    candidates: Dict[str, float]

    def describe(self) -> str:
        up = "inf" if math.isinf(self.upper) else f"{self.upper:.6f}+eps"
        return f"{self.lower} < p < {up}"


def p_range(n: int, convex: bool = False) -> PRange:
    if n < 4:
        raise e.PreconditionError(
            f"the p ranges are given for n >= 4, got n = {n}",
            info={"quantity": "n", "value": n, "bound": 4},
        )
    cands: Dict[str, float]
    if convex:
        cands = {"convex": INF}
    elif n == 4:
        cands = {"lipschitz": p_upper(n, 3)}
    elif n < ALPHA_MIN_DIM:
        cands = {"lipschitz": p_upper(n, n - 2)}
    else:
        cands = {
            "lipschitz": p_upper(n, 3),
            "weighted": p_upper(n, lambda_n(n)),
        }
    return PRange(n, convex, "2-eps", max(cands.values()), cands)


def admissible_alphas(n: int, grid: Iterable[float]) -> List[float]:
    """
    Return the values in *grid* for which the gradient coercivity holds.

    They are the alpha in ``(0, n - 4]`` with ``quad_form(n, alpha) > 0``.
    """
    return [a for a in grid if 0 < a <= n - 4 and quad_form(n, a) > 0]


class ExponentTable(NamedTuple):
    n: int
    quad_form_at_n_minus_4: float
    alpha_n: Optional[float]
    lambda_n: Optional[float]
    p_upper_lipschitz: float
    mazya_positivity: bool


def exponent_table(n: int) -> ExponentTable:
    an = alpha_n(n) if n >= ALPHA_MIN_DIM else None
    return ExponentTable(
        n=n,
        quad_form_at_n_minus_4=quad_form(n, n - 4),
        alpha_n=an,
        lambda_n=an + 2 if an is not None else None,
        p_upper_lipschitz=p_range(n).upper,
        mazya_positivity=n >= 5 and quad_form(n, n - 4) > 0,
    )


def exponent_tables(dims: Sequence[int]) -> List[ExponentTable]:
    return [exponent_table(n) for n in dims]


def parse_dims(arg: str) -> List[int]:
    """
    Parse a dimensions list such as ``4..12`` or ``2,3,4`` or ``4..8,10``.
    """
    rv: List[int] = []
    try:
        for part in arg.split(","):
            part = part.strip()
            if not part:
                continue
            if ".." in part:
                lo, hi = part.split("..", 1)
                rv.extend(range(int(lo), int(hi) + 1))
            else:
                rv.append(int(part))
    except ValueError:
        raise e.InterfaceError(f"bad dimensions list: {arg!r}")
    if not rv:
        raise e.InterfaceError(f"empty dimensions list: {arg!r}")
    return rv
