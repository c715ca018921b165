# Sphinx configuration for the ddmaxwell documentation.
# Options: https://www.sphinx-doc.org/en/master/usage/configuration.html

import os
import sys
from pathlib import Path

sys.path.insert(0, Path().resolve().as_posix())
sys.path.insert(0, "../..")
from ddmaxwell import __version__

on_rtd = os.environ.get("READTHEDOCS", None) == "True"

project = "ddmaxwell"
copyright = "2024, the ddmaxwell developers"
author = "the ddmaxwell developers"
version = __version__
release = __version__

extensions = ["sphinx.ext.autodoc", "sphinx.ext.mathjax", "sphinx_autodoc_typehints"]

typehints_use_signature = True
typehints_use_signature_return = True
autodoc_member_order = "bysource"

source_suffix = ".rst"
master_doc = "index"
templates_path = ["_templates"]

html_theme = "sphinx_rtd_theme"
