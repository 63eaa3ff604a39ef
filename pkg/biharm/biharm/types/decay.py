"""
Adapters for the decay measures.
"""

# Copyright (C) 2020 The biharm Team

from typing import Any, Dict

from ..adapt import Dumper
from ..decay import CornerExperiment, DecayFit


@Dumper.json(DecayFit)
class DecayFitDumper(Dumper):
    def dump(self, obj: DecayFit) -> Dict[str, Any]:
        rv = obj._asdict()
        rv["type"] = "decay-fit"
        return rv


@Dumper.csv(DecayFit)
class DecayFitCsvDumper(Dumper):
    """Two columns, ``log r`` and ``log E``, ready to be plotted."""

    def dump(self, obj: DecayFit) -> str:
        lines = ["log_r,log_energy"]
        lines.extend(f"{lr!r},{le!r}" for lr, le in obj.log_table())
        return "\n".join(lines) + "\n"


@Dumper.json(CornerExperiment)
class CornerExperimentDumper(Dumper):
    def dump(self, obj: CornerExperiment) -> Dict[str, Any]:
        fit = DecayFitDumper(DecayFit)
        return {
            "type": "corner-experiment",
            "seed": obj.seed,
            "h": obj.h,
            "reentrant": fit.dump(obj.reentrant),
            "convex": [fit.dump(f) for f in obj.convex],
            "ordered": obj.ordered,
        }
