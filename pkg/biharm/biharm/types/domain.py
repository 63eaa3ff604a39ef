"""
Adapters for the domains.
"""

# Copyright (C) 2020 The biharm Team

from typing import Any, Dict

from .. import errors as e
from ..adapt import Dumper, Loader
from ..geometry import Ball, ConvexPolytope, Domain, Polygon2D


@Dumper.json(Ball)
@Dumper.json(ConvexPolytope)
@Dumper.json(Polygon2D)
class DomainDumper(Dumper):
    def dump(self, obj: Domain) -> Dict[str, Any]:
        return obj.describe()


class DomainLoader(Loader):
    def load(self, data: Dict[str, Any]) -> Domain:
        try:
            return self._load(data)
        except (KeyError, TypeError, ValueError) as ex:
            raise e.InterfaceError(f"bad {self.tag} description: {ex!r}")

    def _load(self, data: Dict[str, Any]) -> Domain:
        raise NotImplementedError


@Loader.json("ball")
class BallLoader(DomainLoader):
    def _load(self, data: Dict[str, Any]) -> Domain:
        return Ball(data["center"], float(data.get("radius", 1.0)))


@Loader.json("polytope")
class PolytopeLoader(DomainLoader):
    def _load(self, data: Dict[str, Any]) -> Domain:
        hs = data["halfspaces"]
        return ConvexPolytope.from_inequalities(
            [h["a"] for h in hs], [h["b"] for h in hs]
        )


@Loader.json("cube")
class CubeLoader(DomainLoader):
    def _load(self, data: Dict[str, Any]) -> Domain:
        return ConvexPolytope.cube(
            int(data["dim"]),
            float(data.get("lo", 0.0)),
            float(data.get("hi", 1.0)),
        )


@Loader.json("simplex")
class SimplexLoader(DomainLoader):
    def _load(self, data: Dict[str, Any]) -> Domain:
        return ConvexPolytope.simplex(
            int(data["dim"]), float(data.get("size", 1.0))
        )


@Loader.json("polygon2d")
class Polygon2DLoader(DomainLoader):
    def _load(self, data: Dict[str, Any]) -> Domain:
        return Polygon2D(data["vertices"])
