import json
import math

import pytest

from biharm.adapt import dump
from biharm.constants import alpha_n, exponent_table, p_range
from biharm.decay import decay_fit
from biharm.enums import Format
from biharm.geometry import Polygon2D
from biharm.poly import MultiPoly
from biharm.solver import Grid, clamped_data, solve_grid
from biharm.types import grid as tgrid
from biharm.types.constants import FIELDS


def test_exponent_table_json():
    data = dump(exponent_table(4))
    assert data["n"] == 4
    assert data["alpha_n"] is None
    assert data["p_upper_lipschitz"] == 6.0
    assert not data["mazya_positivity"]
    json.dumps(data)


def test_exponent_table_csv():
    row = dump(exponent_table(8), Format.CSV).rstrip("\n").split(",")
    assert len(row) == len(FIELDS)
    rec = dict(zip(FIELDS, row))
    assert rec["n"] == "8"
    assert float(rec["alpha_n"]) == alpha_n(8)
    assert float(rec["lambda_n"]) == alpha_n(8) + 2


def test_exponent_table_csv_empty():
    rec = dict(zip(FIELDS, dump(exponent_table(5), Format.CSV).split(",")))
    assert rec["alpha_n"] == ""
    assert rec["lambda_n"] == ""


def test_exponent_table_text():
    line = dump(exponent_table(9), Format.TEXT)
    assert line.startswith("n=9 ")
    assert f"alpha_n={alpha_n(9):.6f}" in line


def test_p_range_json():
    data = dump(p_range(6, convex=True))
    assert data["type"] == "p-range"
    assert data["upper"] == "inf"
    assert data["candidates"] == {"convex": "inf"}
    assert data["text"].endswith("< inf")

    data = dump(p_range(4))
    assert data["upper"] == 6.0
    assert "6.000000+eps" in data["text"]


def test_decay_fit():
    fit = decay_fit(MultiPoly(2, {(0, 2): 1.0}), (0.0, 0.0), 1.0)
    data = json.loads(json.dumps(dump(fit)))
    assert data["type"] == "decay-fit"
    assert data["exponent"] == pytest.approx(4.0)

    lines = dump(fit, Format.CSV).splitlines()
    assert lines[0] == "log_r,log_energy"
    assert len(lines) == 6
    lr, le = map(float, lines[1].split(","))
    assert lr == 0.0
    assert le == pytest.approx(math.log(math.pi / 2))


def test_grid_csv():
    grid = Grid(Polygon2D.square(), 0.25)
    res = solve_grid(grid, clamped_data(grid))
    lines = dump(res, Format.CSV).splitlines()
    assert lines[0] == "x,y,value"
    assert len(lines) == 1 + 25
    assert lines[1] == "0.0,0.0,0.0"


def test_grid_csv_too_large(monkeypatch):
    from biharm import InterfaceError

    monkeypatch.setattr(tgrid, "CSV_MAX_NODES", 10)
    grid = Grid(Polygon2D.square(), 0.25)
    res = solve_grid(grid, clamped_data(grid))
    with pytest.raises(InterfaceError):
        dump(res, Format.CSV)
