# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Version information for Invenio QHT.

This file is imported by ``invenio_qht.__init__``,
and parsed by ``setup.py``.
"""

__version__ = "0.2.0.dev20160000"
