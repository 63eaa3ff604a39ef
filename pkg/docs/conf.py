# Configuration file for the Sphinx documentation builder.
#
# This file only contains a selection of the most common options. For a full
# list see the documentation:
# https://www.sphinx-doc.org/en/master/usage/configuration.html

# -- Path setup --------------------------------------------------------------

import sys
from pathlib import Path

from better import better_theme_path  # type: ignore

sys.path.insert(0, str(Path(__file__).parent.parent / "biharm"))

# -- Project information -----------------------------------------------------

project = "biharm"
copyright = "2020, The biharm Team"
author = "The biharm Team"
release = "UNRELEASED"

# -- General configuration ---------------------------------------------------

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.intersphinx",
    "sphinx.ext.mathjax",
]

templates_path = ["_templates"]
exclude_patterns = ["_build", "Thumbs.db", ".DS_Store", ".venv"]

# -- Options for HTML output -------------------------------------------------

html_theme = "better"
html_theme_path = [better_theme_path]
html_show_sphinx = False
html_theme_options = {"linktotheme": False}
html_static_path = []

# The reST default role (used for this markup: `text`) to use for all
# documents.
default_role = "obj"

intersphinx_mapping = {
    "py": ("https://docs.python.org/3", None),
    "numpy": ("https://numpy.org/doc/stable/", None),
    "scipy": ("https://docs.scipy.org/doc/scipy/", None),
}

autodoc_member_order = "bysource"
