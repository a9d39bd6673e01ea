# -*- coding: utf-8 -*-
#
# signet documentation build configuration file

import os
import sys

sys.path.insert(0, os.path.abspath("../../src"))

project = "Signet"
copyright = "2024 Signet Team"
author = "Signet Team"

version = "0.1.0"
release = "0.1.0"

extensions = [
    "sphinx.ext.autodoc",
    "sphinx.ext.doctest",
    "sphinx.ext.intersphinx",
    "sphinx.ext.todo",
    "sphinx.ext.viewcode",
    "sphinx_rtd_theme",
    "recommonmark",
]

templates_path = ["_templates"]
source_suffix = [".rst"]
master_doc = "index"
language = "en"
exclude_patterns = []
pygments_style = "sphinx"
todo_include_todos = True

html_theme = "sphinx_rtd_theme"
html_theme_options = {"vcs_pageview_mode": "edit"}
html_static_path = []
htmlhelp_basename = "signetdoc"

latex_documents = [
    (master_doc, "signet.tex", "Signet Documentation", author, "manual")
]
man_pages = [(master_doc, "signet", "Signet Documentation", [author], 1)]

intersphinx_mapping = {"python": ("https://docs.python.org/3", None)}
