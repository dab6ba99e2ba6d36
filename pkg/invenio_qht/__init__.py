# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Invenio module for approximate duplicate detection in streams.

Quotient Hash Tables remember small fingerprints of the elements of an
unbounded stream in a fixed amount of memory and answer, for each arrival,
whether it was probably seen before.

Example:

    .. code-block:: python

        from invenio_qht import Verdict, new_qht

        table = new_qht(memory_bits=2 ** 16, fingerprint_bits=3)
        for url in urls:
            if table.stream(url.encode('utf-8')) is Verdict.UNSEEN:
                crawl(url)
"""

from .core import (DuplicateFilter, EmptyCellPolicy, HashFamily,
                   RandomFilter, Verdict, as_element, fingerprint, hash_row)
from .errors import (ConfigurationError, ConvergenceError,
                     FingerprintExhaustedError, QhtError, RankError,
                     SnapshotError, StreamFormatError)
from .filters import (CuckooFilter, QhtParams, QuotientHashTable,
                      StableBloomFilter, StreamingQuotientFilter, SqfParams,
                      from_snapshot, new_qht, new_qhtd, new_qqhtd)
from .version import __version__

__all__ = ('ConfigurationError', 'ConvergenceError', 'CuckooFilter',
           'DuplicateFilter', 'EmptyCellPolicy', 'FingerprintExhaustedError',
           'HashFamily', 'QhtError', 'QhtParams', 'QuotientHashTable',
           'RandomFilter', 'RankError', 'SnapshotError', 'SqfParams',
           'StableBloomFilter', 'StreamFormatError',
           'StreamingQuotientFilter', 'Verdict', '__version__', 'as_element',
           'fingerprint', 'from_snapshot', 'hash_row', 'new_qht', 'new_qhtd',
           'new_qqhtd')
