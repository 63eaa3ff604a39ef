"""
Adapters for the polynomials.
"""

# Copyright (C) 2020 The biharm Team

from typing import Any, Dict

from .. import errors as e
from ..adapt import Dumper, Loader
from ..poly import MultiPoly


@Dumper.json(MultiPoly)
class MultiPolyDumper(Dumper):
    def dump(self, obj: MultiPoly) -> Dict[str, Any]:
        return {
            "type": "poly",
            "dim": obj.dim,
            "terms": [
                {"exps": list(exps), "coef": coef}
                for exps, coef in sorted(obj.terms())
            ],
        }


@Dumper.text(MultiPoly)
class MultiPolyTextDumper(Dumper):
    def dump(self, obj: MultiPoly) -> str:
        return str(obj)


@Loader.json("poly")
class MultiPolyLoader(Loader):
    def load(self, data: Dict[str, Any]) -> MultiPoly:
        try:
            terms = {tuple(t["exps"]): t["coef"] for t in data["terms"]}
            dim = int(data.get("dim") or len(next(iter(terms))))
        except (KeyError, TypeError, ValueError, StopIteration) as ex:
            raise e.InterfaceError(f"bad polynomial description: {ex!r}")
        return MultiPoly(dim, terms)
