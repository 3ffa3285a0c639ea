# -*- coding: utf-8 -*-
"""subtrack documentation build configuration file."""
import sys
import os

# Make the package importable from the source checkout.
sys.path.insert(0, os.path.abspath('..'))

import subtrack

# -- General configuration -----------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.coverage',
    'sphinx.ext.mathjax',
    'sphinx.ext.viewcode',
]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'subtrack'
copyright = u'subtrack contributors'

version = subtrack.__version__
release = subtrack.__version__

exclude_patterns = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

import sphinx_rtd_theme
html_theme = 'sphinx_rtd_theme'
html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]

html_static_path = ['_static']
htmlhelp_basename = 'subtrackdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_elements = {
}

latex_documents = [
  ('index', 'subtrack.tex', u'subtrack Documentation',
   u'subtrack contributors', 'manual'),
]

# -- Options for manual page output --------------------------------------------

man_pages = [
    ('index', 'subtrack', u'subtrack Documentation',
     [u'subtrack contributors'], 1)
]
