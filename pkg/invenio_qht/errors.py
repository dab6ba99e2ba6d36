# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Exceptions raised by Invenio QHT."""


class QhtError(Exception):
    """Base class of every error raised by this package."""


class ConfigurationError(QhtError, ValueError):
    """Invalid filter, stream or formula parameters."""


class RankError(ConfigurationError):
    """A semi-sorted row rank lies outside the valid range."""


class StreamFormatError(QhtError, ValueError):
    """An input record could not be turned into an element."""

    def __init__(self, message, line_number=None):
        super(StreamFormatError, self).__init__(message)
        self.line_number = line_number


class SnapshotError(QhtError, ValueError):
    """A serialized filter state is malformed."""


class FingerprintExhaustedError(QhtError, RuntimeError):
    """Fingerprint re-derivation kept producing the empty code."""


class ConvergenceError(QhtError, RuntimeError):
    """A saturation search never crossed its threshold."""
