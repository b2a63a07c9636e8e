#
# asd-boundary documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing dir.

import os
import sys
from importlib import metadata

sys.path.insert(0, os.path.abspath(".."))


# -- General configuration -----------------------------------------------------

extensions = ["sphinx.ext.autodoc", "sphinx.ext.viewcode"]

templates_path = ["_templates"]

source_suffix = ".rst"

master_doc = "index"

project = "asd-boundary"
copyright = "2024, asd-boundary contributors"

# The short X.Y version.
version = metadata.version("asd-boundary")
# The full version, including alpha/beta/rc tags.
release = version

exclude_patterns = ["_build"]

pygments_style = "sphinx"

autodoc_member_order = "bysource"


# -- Options for HTML output ---------------------------------------------------

html_theme = "default"

html_static_path = ["_static"]

htmlhelp_basename = "asd-boundarydoc"


# -- Options for LaTeX output --------------------------------------------------

latex_documents = [("index", "asd-boundary.tex", "asd-boundary Documentation", "asd-boundary contributors", "manual")]
