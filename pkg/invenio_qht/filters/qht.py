# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Quotient Hash Table and its QHTD and QQHTD variants."""

from dataclasses import dataclass
from fractions import Fraction

from ..core import EmptyCellPolicy, HashFamily, effective_fingerprint_space
from ..errors import ConfigurationError, SnapshotError
from ..table import decode_snapshot
from .rows import LAYOUTS, VARIANTS, RowTable

_POLICY_CODES = {EmptyCellPolicy.ZERO: 0, EmptyCellPolicy.REMAP: 1,
                 EmptyCellPolicy.REHASH: 2}
_POLICIES = dict((code, policy) for policy, code in _POLICY_CODES.items())


@dataclass(frozen=True)
class QhtParams(object):
    """Memory budget, fingerprint width and buckets per row."""

    memory_bits: int
    fingerprint_bits: int
    buckets: int = 1

    def __post_init__(self):
        if not 1 <= self.fingerprint_bits <= 32:
            raise ConfigurationError(
                'fingerprint_bits must lie in [1, 32], got {0}'.format(
                    self.fingerprint_bits))
        if not 1 <= self.buckets <= self.fingerprint_space:
            raise ConfigurationError(
                'buckets must lie in [1, 2**fingerprint_bits], got {0}'.format(
                    self.buckets))
        if self.memory_bits <= self.fingerprint_bits * self.buckets:
            raise ConfigurationError(
                'memory_bits must exceed fingerprint_bits * buckets')
        if self.rows > 1 << 32:
            raise ConfigurationError('At most 2**32 rows are supported')

    @classmethod
    def from_rows(cls, rows, buckets, fingerprint_bits):
        """Parameters whose table has exactly ``rows`` rows.

        :raises ConfigurationError: when no budget gives that row count,
            as for a single row holding one one-bit cell.
        """
        if rows < 1:
            raise ConfigurationError('rows must be positive')
        cell_bits = buckets * fingerprint_bits
        params = cls(max(rows * cell_bits, cell_bits + 1), fingerprint_bits,
                     buckets)
        if params.rows != rows:
            raise ConfigurationError(
                'Cannot lay out exactly {0} rows of {1} bits'.format(
                    rows, cell_bits))
        return params

    @property
    def rows(self):
        return self.memory_bits // (self.buckets * self.fingerprint_bits)

    @property
    def fingerprint_space(self):
        return 1 << self.fingerprint_bits


class QuotientHashTable(RowTable):
    """Row-organised table of small fingerprints.

    :param params: a :class:`QhtParams`.
    :param seed: hash and replacement seed.
    :param variant: ``qht`` inserts unseen fingerprints only, ``qhtd``
        also re-inserts duplicates and ``qqhtd`` keeps each row as a FIFO.
    :param empty_policy: see :class:`invenio_qht.core.EmptyCellPolicy`.
    :param layout: ``plain`` or ``semisorted``.
    :param hash_key: optional secret switching hashing to keyed BLAKE2b.

    Example:

        .. code-block:: python

            table = QuotientHashTable(QhtParams(2 ** 16, 3, 1), seed=1)
            table.stream(b'a')  # Verdict.UNSEEN
            table.stream(b'a')  # Verdict.DUPLICATE
    """

    name = 'qht'

    def __init__(self, params, seed=0, variant='qht', empty_policy=None,
                 layout='plain', hash_key=None):
        self.params = params
        self.policy = EmptyCellPolicy.coerce(empty_policy)
        self.family = HashFamily(seed, params.rows, params.fingerprint_bits,
                                 policy=self.policy, key=hash_key)
        self._digest = self.family.digest
        self._mask = self.family.mask
        self._rows = params.rows
        empty = None if self.policy is EmptyCellPolicy.ZERO else 0
        super(QuotientHashTable, self).__init__(
            params.rows, params.buckets, params.fingerprint_bits, empty,
            self.family.seed, variant=variant, layout=layout)

    @property
    def effective_space(self):
        """Distinct fingerprints a row can actually hold."""
        return effective_fingerprint_space(self.width, self.policy)

    def asymptotic_fpr(self):
        """Saturated false positive rate on a uniform unbounded stream."""
        if self.variant == 'qht':
            return Fraction(self.k, self.effective_space)
        return 1 - Fraction(self.effective_space - 1,
                            self.effective_space) ** self.k

    def _locate(self, element):
        digest = self._digest(element)
        fingerprint = digest & self._mask
        if not fingerprint:
            fingerprint = self.family.fingerprint_of(digest)
        return ((digest >> 32) * self._rows) >> 32, fingerprint

    def _snapshot_fields(self):
        return (self.params.memory_bits, self.width, self.k, self.rows,
                self.seed, _POLICY_CODES[self.policy],
                LAYOUTS.index(self.layout), self.draws)

    @classmethod
    def from_snapshot(cls, data, hash_key=None):
        """Rebuild a table from :meth:`snapshot` output."""
        snapshot = decode_snapshot(data)
        if snapshot.variant not in VARIANTS or len(snapshot.fields) != 8:
            raise SnapshotError('Snapshot is not a QHT state')
        memory, width, k, rows, seed, policy, layout, draws = snapshot.fields
        if policy not in _POLICIES or layout >= len(LAYOUTS):
            raise SnapshotError('Snapshot has unknown policy or layout')
        try:
            params = QhtParams(memory, width, k)
        except ConfigurationError as error:
            raise SnapshotError(str(error))
        if params.rows != rows:
            raise SnapshotError('Row count does not match the budget')
        table = cls(params, seed=seed, variant=snapshot.variant,
                    empty_policy=_POLICIES[policy], layout=LAYOUTS[layout],
                    hash_key=hash_key)
        table._load_payload(snapshot.bits)
        table.draws = draws
        return table


def new_qht(memory_bits, fingerprint_bits, buckets=1, seed=0, **kwargs):
    """Build a QHT from its memory budget."""
    return QuotientHashTable(
        QhtParams(memory_bits, fingerprint_bits, buckets), seed=seed,
        variant='qht', **kwargs)


def new_qhtd(memory_bits, fingerprint_bits, buckets=1, seed=0, **kwargs):
    """Build a QHTD, which also re-inserts duplicate fingerprints."""
    return QuotientHashTable(
        QhtParams(memory_bits, fingerprint_bits, buckets), seed=seed,
        variant='qhtd', **kwargs)


def new_qqhtd(memory_bits, fingerprint_bits, buckets=1, seed=0, **kwargs):
    """Build a QQHTD, whose rows behave as FIFO queues."""
    return QuotientHashTable(
        QhtParams(memory_bits, fingerprint_bits, buckets), seed=seed,
        variant='qqhtd', **kwargs)
