# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Streaming Quotient Filter.

An element hashes to ``q + r`` bits: ``q`` quotient bits pick the row and
the ``r`` remainder bits are compressed into a fingerprint made of their
lowest ``r'`` bits followed by their population count.
"""

from dataclasses import dataclass

from ..core import HashFamily
from ..errors import (ConfigurationError, FingerprintExhaustedError,
                      SnapshotError)
from ..table import decode_snapshot
from .rows import RowTable


def _ceil_log2(value):
    return (value - 1).bit_length()


@dataclass(frozen=True)
class SqfParams(object):
    """Quotient bits, remainder bits, kept remainder bits and buckets."""

    quotient_bits: int
    remainder_bits: int
    kept_bits: int
    buckets: int = 1

    def __post_init__(self):
        if self.quotient_bits < 0 or self.remainder_bits < 1:
            raise ConfigurationError('Need quotient_bits >= 0 and '
                                     'remainder_bits >= 1')
        if not 0 <= self.kept_bits < self.remainder_bits:
            raise ConfigurationError('kept_bits must lie in [0, r)')
        if self.quotient_bits + self.remainder_bits > 64:
            raise ConfigurationError('q + r cannot exceed 64 bits')
        if self.quotient_bits > 32:
            raise ConfigurationError('At most 2**32 rows are supported')
        if self.buckets < 1:
            raise ConfigurationError('buckets must be positive')
        if self.fingerprint_bits > 32:
            raise ConfigurationError('Fingerprints cannot exceed 32 bits')

    @property
    def weight_bits(self):
        return _ceil_log2(self.remainder_bits + 1)

    @property
    def fingerprint_bits(self):
        return self.kept_bits + self.weight_bits

    @property
    def fingerprint_space(self):
        """Distinct fingerprints: ``2**r' * (r - r' + 1)``."""
        return (1 << self.kept_bits) * (
            self.remainder_bits - self.kept_bits + 1)

    @property
    def rows(self):
        return 1 << self.quotient_bits

    @property
    def memory_bits(self):
        return self.rows * self.buckets * self.fingerprint_bits

    @classmethod
    def from_memory(cls, memory_bits, remainder_bits=2, kept_bits=1,
                    buckets=1):
        """Largest filter of this shape fitting in ``memory_bits``."""
        shape = cls(0, remainder_bits, kept_bits, buckets)
        rows = memory_bits // (buckets * shape.fingerprint_bits)
        if rows < 1:
            raise ConfigurationError(
                '{0} bits cannot hold a single SQF row'.format(memory_bits))
        return cls(rows.bit_length() - 1, remainder_bits, kept_bits, buckets)


def sqf_fingerprint(params, remainder):
    """Compressed fingerprint of the ``r``-bit ``remainder``.

    Example:

        .. code-block:: python

            >>> params = SqfParams(8, 2, 1)
            >>> bin(sqf_fingerprint(params, 0b11))
            '0b110'
    """
    kept = remainder & ((1 << params.kept_bits) - 1)
    return (kept << params.weight_bits) | bin(remainder).count('1')


def reachable_fingerprints(params):
    """Every fingerprint some remainder can produce."""
    spread = params.remainder_bits - params.kept_bits
    reachable = set()
    for kept in range(1 << params.kept_bits):
        low = bin(kept).count('1')
        for weight in range(low, low + spread + 1):
            reachable.add((kept << params.weight_bits) | weight)
    return reachable


def empty_code(params):
    """Smallest fingerprint code no remainder produces, or ``None``."""
    reachable = reachable_fingerprints(params)
    for code in range(1 << params.fingerprint_bits):
        if code not in reachable:
            return code
    return None


class StreamingQuotientFilter(RowTable):
    """Row table keyed by quotient with popcount-compressed remainders.

    The empty cell holds the smallest unreachable fingerprint code. When
    every code is reachable zero marks empty cells and remainders mapping
    to zero are re-derived from a chained digest.
    """

    name = 'sqf'

    def __init__(self, params, seed=0, hash_key=None):
        self.params = params
        code = empty_code(params)
        self._chained = code is None
        self.family = HashFamily(seed, params.rows, params.fingerprint_bits,
                                 key=hash_key)
        self._digest = self.family.digest
        self._shift = 64 - params.quotient_bits - params.remainder_bits
        self._remainder_mask = (1 << params.remainder_bits) - 1
        self._kept_mask = (1 << params.kept_bits) - 1
        self._weight_bits = params.weight_bits
        super(StreamingQuotientFilter, self).__init__(
            params.rows, params.buckets, params.fingerprint_bits,
            0 if code is None else code, self.family.seed)

    def fingerprint(self, element):
        """Fingerprint stored for ``element``."""
        return self._locate(element)[1]

    def _compress(self, remainder):
        return (((remainder & self._kept_mask) << self._weight_bits)
                | bin(remainder).count('1'))

    def _locate(self, element):
        digest = self._digest(element)
        value = digest >> self._shift
        fingerprint = self._compress(value & self._remainder_mask)
        if self._chained and fingerprint == 0:
            for _ in range(self.family.max_rounds - 1):
                digest = self.family.rehash(digest)
                fingerprint = self._compress(digest & self._remainder_mask)
                if fingerprint:
                    break
            else:
                raise FingerprintExhaustedError(
                    'Remainder kept compressing to the empty code')
        return value >> self.params.remainder_bits, fingerprint

    def _snapshot_variant(self):
        return 'sqf'

    def _snapshot_fields(self):
        params = self.params
        return (params.quotient_bits, params.remainder_bits,
                params.kept_bits, params.buckets, self.seed, self.draws)

    @classmethod
    def from_snapshot(cls, data, hash_key=None):
        """Rebuild a filter from :meth:`snapshot` output."""
        snapshot = decode_snapshot(data)
        if snapshot.variant != 'sqf' or len(snapshot.fields) != 6:
            raise SnapshotError('Snapshot is not an SQF state')
        quotient, remainder, kept, buckets, seed, draws = snapshot.fields
        try:
            params = SqfParams(quotient, remainder, kept, buckets)
        except ConfigurationError as error:
            raise SnapshotError(str(error))
        sqf = cls(params, seed=seed, hash_key=hash_key)
        sqf._load_payload(snapshot.bits)
        sqf.draws = draws
        return sqf
