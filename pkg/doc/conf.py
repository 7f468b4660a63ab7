# -*- coding: utf-8 -*-
#
# nlcm documentation build configuration file.
#
# This file is execfile()d with the current directory set to its containing
# dir.

import sys, os

# Let Sphinx find the package from a source checkout.
sys.path.insert(0, os.getcwd() + "/..")

# -- General configuration -----------------------------------------------------

extensions = ['sphinx.ext.autodoc', 'sphinx.ext.doctest', 'sphinx.ext.imgmath',
              'sphinx.ext.intersphinx',
              'IPython.sphinxext.ipython_directive',
              'IPython.sphinxext.ipython_console_highlighting',
              ]

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'nlcm'
copyright = u'2024, nlcm Developers'

import nlcm
# The short X.Y version.
version = nlcm.__version__
# The full version, including alpha/beta/rc tags.
release = version

exclude_trees = ['_build']
pygments_style = 'sphinx'

# -- Options for HTML output ---------------------------------------------------

html_theme = 'default'
htmlhelp_basename = 'nlcmdoc'

# -- Options for LaTeX output --------------------------------------------------

latex_documents = [
  ('index', 'nlcm.tex', u'nlcm Documentation',
   u'nlcm Developers', 'manual'),
]

# -- Extension configuration ---------------------------------------------------

autoclass_content = "both"

intersphinx_mapping = {"python": ("https://docs.python.org/3", None),
                       "numpy": ("https://numpy.org/doc/stable", None),
                       "scipy": ("https://docs.scipy.org/doc/scipy", None),
                       }

autodoc_member_order = "source"
