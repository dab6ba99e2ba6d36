# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Sphinx configuration."""

from __future__ import print_function

import os
import sys

sys.path.insert(0, os.path.abspath('..'))

# -- General configuration ------------------------------------------------

extensions = [
    'sphinx.ext.autodoc',
    'sphinx.ext.intersphinx',
]

# Compiled dependencies are not needed to render the API documentation.
autodoc_mock_imports = ['bitarray', 'cryptography', 'numpy', 'scipy',
                        'xxhash']

templates_path = ['_templates']
source_suffix = '.rst'
master_doc = 'index'

project = u'Invenio QHT'
copyright = u'2016, CERN'
author = u'CERN'

# Get the version string. Cannot be done with import!
g = {}
with open(os.path.join('..', 'invenio_qht', 'version.py'), 'rt') as fp:
    exec(fp.read(), g)
    version = g['__version__']

release = version
language = None
exclude_patterns = ['_build']
pygments_style = 'sphinx'
todo_include_todos = False

# -- Options for HTML output ----------------------------------------------

on_rtd = os.environ.get('READTHEDOCS', None) == 'True'
if not on_rtd:
    try:
        import sphinx_rtd_theme
        html_theme = "sphinx_rtd_theme"
        html_theme_path = [sphinx_rtd_theme.get_html_theme_path()]
    except ImportError:
        print("`sphinx_rtd_theme` not found, pip install it", file=sys.stderr)
        html_theme = 'alabaster'

html_static_path = []
htmlhelp_basename = 'invenio-qht_namedoc'

# -- Options for other outputs --------------------------------------------

latex_documents = [
    (master_doc, 'invenio-qht.tex', u'invenio-qht Documentation',
     u'CERN', 'manual'),
]

man_pages = [
    (master_doc, 'invenio-qht', u'invenio-qht Documentation',
     [author], 1)
]

texinfo_documents = [
    (master_doc, 'invenio-qht', u'Invenio QHT Documentation',
     author, 'invenio-qht', 'Approximate duplicate detection in streams.',
     'Miscellaneous'),
]

intersphinx_mapping = {'python': ('https://docs.python.org/3', None)}
