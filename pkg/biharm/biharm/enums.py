"""
Enum definitions for biharm
"""

# Copyright (C) 2020 The biharm Team

from enum import Enum, IntEnum, auto


class Format(IntEnum):
    JSON = 0
    CSV = auto()
    TEXT = auto()
    BINARY = auto()


class IdentityId(IntEnum):
    I2_13 = 0
    I2_19 = auto()
    I3_3 = auto()
    I3_8 = auto()
    I3_18 = auto()
    I3_1 = auto()
    I3_22 = auto()


class SampleScheme(Enum):
    GRID = "deterministic-facet-grid"
    LOW_DISCREPANCY = "low-discrepancy"


class Pole(Enum):
    BOUNDARY_VERTEX = "boundary-vertex"
    BOUNDARY_FACET_CENTER = "boundary-facet-center"
    BOUNDARY_SPHERE_POINT = "boundary-sphere-point"
    EXTERIOR = "exterior"

    @property
    def on_boundary(self) -> bool:
        return self is not Pole.EXTERIOR


class Location(IntEnum):
    """Position of a point with respect to a closed domain."""

    INTERIOR = 0
    BOUNDARY = auto()
    EXTERIOR = auto()


class SolveMethod(Enum):
    CG = "cg"
    DIRECT = "direct"
