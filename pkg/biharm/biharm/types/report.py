"""
Adapters for the verification reports.
"""

# Copyright (C) 2020 The biharm Team

import io
import csv
from typing import Any, Dict, List

from ..adapt import Dumper
from ..campaign import CaseResult
from ..identities import HardyReport, IdentityReport, PositivityReport

# columns of the CSV records of the identity reports
CSV_FIELDS = [
    "identity",
    "variant",
    "n",
    "alpha",
    "pole",
    "lhs",
    "rhs",
    "abs_residual",
    "rel_residual",
    "scale",
    "quad_error",
    "passed",
]


def csv_header() -> str:
    return _csv_line(CSV_FIELDS)


def _csv_line(values: List[Any]) -> str:
    out = io.StringIO()
    csv.writer(out, lineterminator="\n").writerow(values)
    return out.getvalue()


@Dumper.json(IdentityReport)
class IdentityReportDumper(Dumper):
    def dump(self, obj: IdentityReport) -> Dict[str, Any]:
        rv = obj._asdict()
        rv["identity"] = obj.identity.name
        rv["type"] = "identity-report"
        return rv


@Dumper.csv(IdentityReport)
class IdentityReportCsvDumper(Dumper):
    def dump(self, obj: IdentityReport) -> str:
        d = obj._asdict()
        d["identity"] = obj.identity.name
        # repr() keeps every bit of the floats
        return _csv_line(
            [
                repr(float(d[f])) if isinstance(d[f], float) else d[f]
                for f in CSV_FIELDS
            ]
        )


@Dumper.text(IdentityReport)
class IdentityReportTextDumper(Dumper):
    def dump(self, obj: IdentityReport) -> str:
        return (
            f"{obj.identity.name:<6} {obj.variant:<8} n={obj.n} "
            f"alpha={obj.alpha:<9.6g} pole={obj.pole:<8} "
            f"rel={obj.rel_residual:.3e} quad_error={obj.quad_error:.3e} "
            f"{'pass' if obj.passed else 'FAIL'}"
        )


@Dumper.json(PositivityReport)
class PositivityReportDumper(Dumper):
    def dump(self, obj: PositivityReport) -> Dict[str, Any]:
        rv = obj._asdict()
        rv["type"] = "positivity-report"
        return rv


@Dumper.json(HardyReport)
class HardyReportDumper(Dumper):
    def dump(self, obj: HardyReport) -> Dict[str, Any]:
        rv = obj._asdict()
        rv["type"] = "hardy-report"
        return rv


@Dumper.json(CaseResult)
class CaseResultDumper(Dumper):
    def dump(self, obj: CaseResult) -> Dict[str, Any]:
        c = obj.case
        rv: Dict[str, Any] = {
            "identity": c.identity.name,
            "domain": c.kind,
            "n": c.n,
            "alpha": c.alpha,
            "pole": c.pole.value,
        }
        if obj.skipped is not None:
            rv["skipped"] = obj.skipped
        elif obj.error is not None:
            rv["error"] = obj.error
            rv["passed"] = False
        elif obj.report is not None:
            rv["report"] = IdentityReportDumper(IdentityReport).dump(
                obj.report
            )
            rv["passed"] = obj.report.passed
        return rv
