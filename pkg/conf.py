# -*- coding: utf-8 -*-
#
# Configuration file for the Sphinx documentation builder.

import os
import sys
sys.path.insert(0, os.path.abspath('.'))

import nkgspline


# -- Project information -----------------------------------------------------

project = 'nkgspline'
copyright = '2026, nkgspline developers'
author = 'nkgspline developers'

version = nkgspline.__version__
release = nkgspline.__version__


# -- General configuration ---------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.doctest',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'
language = 'en'

exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store', 'examples', 'tests']

pygments_style = None


# -- Options for HTML output -------------------------------------------------

html_theme = 'alabaster'
html_static_path = []
htmlhelp_basename = 'nkgsplinedoc'

autodoc_member_order = 'bysource'
