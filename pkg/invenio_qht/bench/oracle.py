# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Exact ground truth for benchmark streams."""


class GroundTruthOracle(object):
    """Remembers every element seen; needs memory proportional to them."""

    def __init__(self):
        self._seen = set()

    def classify(self, element):
        """Return ``True`` when ``element`` arrived before, then record it."""
        if element in self._seen:
            return True
        self._seen.add(element)
        return False

    def __len__(self):
        return len(self._seen)
