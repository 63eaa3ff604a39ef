"""
biharm types package
"""

# Copyright (C) 2020 The biharm Team

# Register default adapters
from . import constants, decay, domain, grid, poly, report  # noqa
