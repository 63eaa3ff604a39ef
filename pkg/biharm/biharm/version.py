"""
biharm distribution version file.
"""

# Copyright (C) 2020 The biharm Team

__version__ = "0.3.0"
