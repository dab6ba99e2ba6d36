# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Duplicate detection filters.

The module exposes the row-organised filters (QHT, QHTD, QQHTD and SQF)
and two comparison baselines (Stable Bloom Filter and Cuckoo filter).
All of them implement :class:`invenio_qht.core.DuplicateFilter`.
"""

from ..errors import SnapshotError
from ..table import decode_snapshot
from .baselines import (CuckooFilter, CuckooParams, SbfParams,
                        StableBloomFilter)
from .qht import QhtParams, QuotientHashTable, new_qht, new_qhtd, new_qqhtd
from .sqf import (SqfParams, StreamingQuotientFilter, empty_code,
                  reachable_fingerprints, sqf_fingerprint)

__all__ = ('CuckooFilter', 'CuckooParams', 'QhtParams', 'QuotientHashTable',
           'SbfParams', 'SqfParams', 'StableBloomFilter',
           'StreamingQuotientFilter', 'empty_code', 'from_snapshot',
           'new_qht', 'new_qhtd', 'new_qqhtd', 'reachable_fingerprints',
           'sqf_fingerprint')

_RESTORERS = {
    'qht': QuotientHashTable.from_snapshot,
    'qhtd': QuotientHashTable.from_snapshot,
    'qqhtd': QuotientHashTable.from_snapshot,
    'sqf': StreamingQuotientFilter.from_snapshot,
    'sbf': StableBloomFilter.from_snapshot,
    'cuckoo': CuckooFilter.from_snapshot,
}


def from_snapshot(data, hash_key=None):
    """Rebuild any filter from the bytes returned by its ``snapshot``.

    :param hash_key: secret of a keyed hash family; snapshots never store it.
    """
    variant = decode_snapshot(data).variant
    try:
        restore = _RESTORERS[variant]
    except KeyError:
        raise SnapshotError('No filter for variant {0!r}'.format(variant))
    return restore(data, hash_key=hash_key)
