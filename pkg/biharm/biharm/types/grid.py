"""
Adapters for the grid solutions.

The binary layout is a little endian header followed by the nodal values
in row-major order::

    magic "BHG1", ny (uint32), nx (uint32), h, x0, y0 (float64)
    ny * nx float64

NaN marks the nodes outside the closed domain.
"""

# Copyright (C) 2020 The biharm Team

import struct
from typing import NamedTuple

import numpy as np

from .. import errors as e
from ..adapt import Dumper, Loader
from ..proto import Array
from ..solver import SolveResult

MAGIC = b"BHG1"
CSV_MAX_NODES = 256 * 256

_header = struct.Struct("<4sIIddd")


class GridValues(NamedTuple):
    """Nodal values loaded back from their binary representation."""

    values: Array
    h: float
    origin: Array


@Dumper.binary(SolveResult)
class SolveResultBinaryDumper(Dumper):
    def dump(self, obj: SolveResult) -> bytes:
        ny, nx = obj.values.shape
        x0, y0 = obj.grid.origin
        head = _header.pack(MAGIC, ny, nx, obj.grid.h, x0, y0)
        return head + obj.values.astype("<f8").tobytes(order="C")


@Dumper.csv(SolveResult)
class SolveResultCsvDumper(Dumper):
    """The nodes of the closed domain as ``x,y,value`` rows."""

    def dump(self, obj: SolveResult) -> str:
        if obj.values.size > CSV_MAX_NODES:
            raise e.InterfaceError(
                f"grid too large for CSV: {obj.values.size} nodes;"
                f" use the binary format"
            )
        mask = obj.grid.closed
        pts = obj.grid.points[mask]
        vals = obj.values[mask]
        lines = ["x,y,value"]
        lines.extend(
            f"{x!r},{y!r},{v!r}"
            for (x, y), v in zip(pts.tolist(), vals.tolist())
        )
        return "\n".join(lines) + "\n"


@Loader.binary("grid")
class GridValuesLoader(Loader):
    def load(self, data: bytes) -> GridValues:
        if len(data) < _header.size:
            raise e.InterfaceError("truncated grid data")
        magic, ny, nx, h, x0, y0 = _header.unpack_from(data)
        if magic != MAGIC:
            raise e.InterfaceError(f"bad grid data magic: {magic!r}")
        size = _header.size + 8 * ny * nx
        if len(data) != size:
            raise e.InterfaceError(
                f"grid data size {len(data)}, expected {size}"
            )
        values = np.frombuffer(data, dtype="<f8", offset=_header.size)
        return GridValues(
            values.reshape(ny, nx).astype(float), h, np.array([x0, y0])
        )
