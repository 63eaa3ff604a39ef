#!/usr/bin/env python
"""Generate the table of the critical exponents in the docs.

The script can be run after a change to the constants module to refresh
the table in ``docs/constants.rst``.
"""

# Copyright (C) 2020 The biharm Team


import os
import re
import sys
import logging
import argparse

from biharm.constants import exponent_tables, parse_dims

logger = logging.getLogger()
logging.basicConfig(
    level=logging.INFO, format="%(asctime)s %(levelname)s %(message)s"
)

COLUMNS = [
    ("n", 5),
    (":math:`Q_n(n - 4)`", 20),
    ("alpha_n", 12),
    ("lambda_n", 12),
    ("p upper", 10),
]


def main():
    opt = parse_cmdline()
    fn = os.path.dirname(__file__) + "/../docs/constants.rst"

    with open(fn, "r") as f:
        lines = f.read().splitlines()

    istart, iend = [
        i
        for i, line in enumerate(lines)
        if re.match(r"\s*\.\.\s*autogenerated:\s+(start|end)", line)
    ]

    lines[istart + 1 : iend] = [""] + list(generate_table(opt.dims)) + [""]

    logger.info("writing %s", fn)
    with open(fn, "w") as f:
        for line in lines:
            f.write(line + "\n")


def parse_cmdline():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument(
        "--dims",
        type=parse_dims,
        default=parse_dims("4..12"),
        help="the dimensions in the table [default: %(default)s]",
    )
    return parser.parse_args()


def generate_table(dims):
    rule = "  ".join("=" * width for _, width in COLUMNS)
    yield rule
    yield format_row(label for label, _ in COLUMNS)
    yield rule
    for t in exponent_tables(dims):
        yield format_row(
            [
                str(t.n),
                f"{t.quad_form_at_n_minus_4:g}",
                fmt(t.alpha_n),
                fmt(t.lambda_n),
                fmt(t.p_upper_lipschitz),
            ]
        )
    yield rule


def format_row(cells):
    return "  ".join(
        cell.ljust(width) for cell, (_, width) in zip(cells, COLUMNS)
    ).rstrip()


def fmt(x):
    if x is None:
        return "\\-"
    if x == float("inf"):
        return "inf"
    return f"{x:.6f}"


if __name__ == "__main__":
    sys.exit(main())
