"""
Adapters for the tables of constants.
"""

# Copyright (C) 2020 The biharm Team

import math
from typing import Any, Dict, Optional

from ..adapt import Dumper
from ..constants import ExponentTable, PRange

# columns of the CSV and text tables
FIELDS = list(ExponentTable._fields)


def _num(x: Optional[float]) -> str:
    if x is None:
        return ""
    if isinstance(x, float) and math.isinf(x):
        return "inf"
    if isinstance(x, float):
        return repr(float(x))
    return repr(x)


@Dumper.json(ExponentTable)
class ExponentTableDumper(Dumper):
    def dump(self, obj: ExponentTable) -> Dict[str, Any]:
        rv = obj._asdict()
        # json has no infinity
        if math.isinf(obj.p_upper_lipschitz):
            rv["p_upper_lipschitz"] = "inf"
        return rv


@Dumper.csv(ExponentTable)
class ExponentTableCsvDumper(Dumper):
    def dump(self, obj: ExponentTable) -> str:
        return ",".join(_num(getattr(obj, f)) for f in FIELDS) + "\n"


@Dumper.text(ExponentTable)
class ExponentTableTextDumper(Dumper):
    def dump(self, obj: ExponentTable) -> str:
        an = "-" if obj.alpha_n is None else f"{obj.alpha_n:.6f}"
        ln = "-" if obj.lambda_n is None else f"{obj.lambda_n:.6f}"
        p = obj.p_upper_lipschitz
        ps = "inf" if math.isinf(p) else f"{p:.6f}"
        return (
            f"n={obj.n:<3} quad_form(n, n-4)={obj.quad_form_at_n_minus_4:<6g}"
            f" alpha_n={an:<9} lambda_n={ln:<9} p_upper={ps:<9}"
            f" positivity={'yes' if obj.mazya_positivity else 'no'}"
        )


@Dumper.json(PRange)
class PRangeDumper(Dumper):
    def dump(self, obj: PRange) -> Dict[str, Any]:
        return {
            "type": "p-range",
            "n": obj.n,
            "convex": obj.convex,
            "lower": obj.lower,
            "upper": "inf" if math.isinf(obj.upper) else obj.upper,
            "candidates": {
                k: "inf" if math.isinf(v) else v
                for k, v in obj.candidates.items()
            },
            "text": obj.describe(),
        }
