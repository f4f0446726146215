#!/usr/bin/env python3
# -*- coding: utf-8 -*-
#
# tractorholonomy documentation build configuration file.
#
# Run with: sphinx-build -b html docs docs/_build/html

import os
import sys
sys.path.insert(0, os.path.abspath('../src'))

from tractorholonomy import __version__


# -- General configuration ------------------------------------------------

extensions = ['sphinx.ext.autodoc',
              'sphinx.ext.mathjax']

autoclass_content = 'both'
autodoc_member_order = 'bysource'

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = 'tractorholonomy'
copyright = '2017-2025, KU Leuven, DTAI Research Group'
author = 'Wannes Meert'

version = '.'.join(__version__.split('.')[:2])
release = __version__

language = "en"
exclude_patterns = ['_build', 'Thumbs.db', '.DS_Store']
pygments_style = 'sphinx'
todo_include_todos = False


# -- Options for HTML output ----------------------------------------------

html_theme = "sphinx_rtd_theme"
html_static_path = ['_static']
htmlhelp_basename = 'tractorholonomydoc'


# -- Options for other output ---------------------------------------------

latex_documents = [
    (master_doc, 'tractorholonomy.tex', 'tractorholonomy Documentation',
     author, 'manual'),
]

man_pages = [
    (master_doc, 'tractorholonomy', 'tractorholonomy Documentation',
     [author], 1)
]

texinfo_documents = [
    (master_doc, 'tractorholonomy', 'tractorholonomy Documentation',
     author, 'tractorholonomy', 'Conformal tractor calculus and holonomy of metrics.',
     'Miscellaneous'),
]
