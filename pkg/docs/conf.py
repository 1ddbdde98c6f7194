# Sphinx configuration for the geonorm API reference.

project = "geonorm"
copyright = "2026, Vagner Bessa"
author = "Vagner Bessa"

extensions = [
    "myst_parser",
    "autoapi.extension",
    "sphinx.ext.napoleon",
    "sphinx.ext.mathjax",
]

# geodesic_normal, von_mises, estimation, studies, cli, ...
autoapi_dirs = ["../src/geonorm"]
autoapi_options = ["members", "show-inheritance", "show-module-summary"]
autoapi_ignore = ["*/__main__.py"]

napoleon_numpy_docstring = True
napoleon_google_docstring = False

exclude_patterns = ["_build"]

html_theme = "sphinx_rtd_theme"
