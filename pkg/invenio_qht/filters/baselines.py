# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Comparison baselines: Stable Bloom Filter and Cuckoo filter."""

import logging
from dataclasses import dataclass

import numpy as np
import xxhash

from ..analysis import sbf_decrements_for
from ..config import (QHT_CUCKOO_MAX_KICKS, QHT_SBF_CELL_BITS,
                      QHT_SBF_HASHES, QHT_SBF_TARGET_FPR)
from ..core import (DuplicateFilter, EmptyCellPolicy, HashFamily, Verdict,
                    derive_seed)
from ..errors import ConfigurationError, SnapshotError
from ..table import decode_snapshot, encode_snapshot, pack_cells, \
    unpack_cells

logger = logging.getLogger(__name__)

_DRAW_BATCH = 4096


@dataclass(frozen=True)
class SbfParams(object):
    """Cells, bits per cell, hashes per element and decrements per insert."""

    rows: int
    cell_bits: int = QHT_SBF_CELL_BITS
    hashes: int = QHT_SBF_HASHES
    decrements: int = 1

    def __post_init__(self):
        if not 1 <= self.cell_bits <= 8:
            raise ConfigurationError('SBF cells hold 1 to 8 bits')
        if self.hashes < 1 or self.decrements < 1:
            raise ConfigurationError('K and P must be positive')
        if self.rows <= self.hashes:
            raise ConfigurationError('An SBF needs more cells than hashes')

    @property
    def max_value(self):
        return (1 << self.cell_bits) - 1

    @property
    def memory_bits(self):
        return self.rows * self.cell_bits

    @classmethod
    def from_memory(cls, memory_bits, cell_bits=QHT_SBF_CELL_BITS,
                    hashes=QHT_SBF_HASHES, target_fpr=QHT_SBF_TARGET_FPR):
        """Fill ``memory_bits`` and calibrate decrements to ``target_fpr``."""
        rows = memory_bits // cell_bits
        if rows <= hashes:
            raise ConfigurationError(
                '{0} bits are too few for an SBF'.format(memory_bits))
        decrements = sbf_decrements_for(hashes, (1 << cell_bits) - 1, rows,
                                        target_fpr)
        return cls(rows, cell_bits, hashes, decrements)


class StableBloomFilter(DuplicateFilter):
    """Counting cells that decay so the filter never fills up.

    An element is a duplicate when all of its ``K`` cells are non-zero.
    Inserting decrements ``P`` cells chosen uniformly at random and then
    sets the element's cells to ``Max``.
    """

    name = 'sbf'
    variant = 'sbf'

    def __init__(self, params, seed=0, hash_key=None):
        self.params = params
        self.family = HashFamily(seed, 1, 1, key=hash_key)
        self.seed = self.family.seed
        self._cells = bytearray(params.rows)
        self._pending = []
        self.draws = 0
        self._generator = np.random.Generator(
            np.random.Philox(derive_seed(self.seed, 2)))

    def _positions(self, element):
        digest = self.family.digest(element)
        first = digest & 0xffffffff
        step = (digest >> 32) | 1
        rows = self.params.rows
        return [(first + index * step) % rows
                for index in range(self.params.hashes)]

    def _batch(self):
        return self._generator.integers(
            0, self.params.rows, size=self.params.decrements * _DRAW_BATCH)

    def _random_cells(self):
        count = self.params.decrements
        if len(self._pending) < count:
            self._pending = self._batch().tolist()
            self._pending.reverse()
        self.draws += count
        return [self._pending.pop() for _ in range(count)]

    def _replay(self, draws):
        """Advance the decay stream past ``draws`` consumed cells."""
        full, used = divmod(draws, self.params.decrements * _DRAW_BATCH)
        for _ in range(full):
            self._batch()
        if used:
            self._pending = self._batch().tolist()
            self._pending.reverse()
            del self._pending[-used:]
        self.draws = draws

    def detect(self, element):
        cells = self._cells
        if all(cells[position] for position in self._positions(element)):
            return Verdict.DUPLICATE
        return Verdict.UNSEEN

    def insert(self, element):
        self._set(self._positions(element))

    def _set(self, positions):
        cells = self._cells
        for index in self._random_cells():
            if cells[index]:
                cells[index] -= 1
        top = self.params.max_value
        for position in positions:
            cells[position] = top

    def stream(self, element):
        positions = self._positions(element)
        cells = self._cells
        if all(cells[position] for position in positions):
            verdict = Verdict.DUPLICATE
        else:
            verdict = Verdict.UNSEEN
        self._set(positions)
        return verdict

    @property
    def memory_bits(self):
        return self.params.memory_bits

    def snapshot(self):
        params = self.params
        fields = (params.rows, params.cell_bits, params.hashes,
                  params.decrements, self.seed, self.draws)
        return encode_snapshot('sbf', fields,
                               pack_cells(list(self._cells),
                                          params.cell_bits))

    @classmethod
    def from_snapshot(cls, data, hash_key=None):
        """Rebuild a filter, resuming its decay stream where it stopped."""
        snapshot = decode_snapshot(data)
        if snapshot.variant != 'sbf' or len(snapshot.fields) != 6:
            raise SnapshotError('Snapshot is not an SBF state')
        rows, cell_bits, hashes, decrements, seed, draws = snapshot.fields
        try:
            params = SbfParams(rows, cell_bits, hashes, decrements)
        except ConfigurationError as error:
            raise SnapshotError(str(error))
        if draws % decrements:
            raise SnapshotError('Draw count is not a whole number of '
                                'insertions')
        sbf = cls(params, seed=seed, hash_key=hash_key)
        sbf._cells = bytearray(unpack_cells(snapshot.bits, cell_bits, rows))
        sbf._replay(draws)
        return sbf


@dataclass(frozen=True)
class CuckooParams(object):
    """Power-of-two bucket count, entries per bucket and fingerprint bits."""

    buckets: int
    entries: int = 1
    fingerprint_bits: int = 3
    max_kicks: int = QHT_CUCKOO_MAX_KICKS

    def __post_init__(self):
        if self.buckets < 1 or self.buckets & (self.buckets - 1):
            raise ConfigurationError('Bucket count must be a power of two')
        if self.buckets > 1 << 32:
            raise ConfigurationError('At most 2**32 buckets are supported')
        if self.entries < 1:
            raise ConfigurationError('Buckets need at least one entry')
        if not 1 <= self.fingerprint_bits <= 32:
            raise ConfigurationError('Fingerprints hold 1 to 32 bits')
        if self.max_kicks < 0:
            raise ConfigurationError('max_kicks cannot be negative')

    @property
    def memory_bits(self):
        return self.buckets * self.entries * self.fingerprint_bits

    @classmethod
    def from_memory(cls, memory_bits, entries=1, fingerprint_bits=3,
                    max_kicks=QHT_CUCKOO_MAX_KICKS):
        """Largest power-of-two table fitting in ``memory_bits``."""
        buckets = memory_bits // (entries * fingerprint_bits)
        if buckets < 1:
            raise ConfigurationError(
                '{0} bits cannot hold a Cuckoo bucket'.format(memory_bits))
        return cls(1 << (buckets.bit_length() - 1), entries,
                   fingerprint_bits, max_kicks)


class CuckooFilter(DuplicateFilter):
    """Partial-key cuckoo hashing over non-zero fingerprints.

    Each fingerprint may live in its primary bucket or in the bucket
    obtained by XOR-ing the primary index with a hash of the fingerprint.
    When both are full, resident fingerprints are relocated up to
    ``max_kicks`` times; after that the homeless fingerprint is dropped.
    """

    name = 'cuckoo'
    variant = 'cuckoo'

    def __init__(self, params, seed=0, hash_key=None):
        self.params = params
        self.family = HashFamily(seed, params.buckets,
                                 params.fingerprint_bits,
                                 policy=EmptyCellPolicy.REHASH, key=hash_key)
        self.seed = self.family.seed
        self.dropped = 0
        self.draws = 0
        self._victim_seed = derive_seed(self.seed, 3)
        self._index_mask = params.buckets - 1
        self._cells = [0] * (params.buckets * params.entries)
        if params.fingerprint_bits <= 16:
            self._offsets = [self._offset(value) for value in
                             range(1 << params.fingerprint_bits)]
        else:
            self._offsets = None

    def _offset(self, fingerprint):
        return xxhash.xxh64_intdigest(fingerprint.to_bytes(4, 'little'),
                                      self.seed) & self._index_mask

    def _alternate(self, bucket, fingerprint):
        if self._offsets is not None:
            return bucket ^ self._offsets[fingerprint]
        return bucket ^ self._offset(fingerprint)

    def _locate(self, element):
        digest = self.family.digest(element)
        fingerprint = self.family.fingerprint_of(digest)
        primary = (digest >> 32) & self._index_mask
        return primary, self._alternate(primary, fingerprint), fingerprint

    def _bucket(self, index):
        base = index * self.params.entries
        return self._cells[base:base + self.params.entries]

    def _contains(self, primary, alternate, fingerprint):
        return (fingerprint in self._bucket(primary)
                or fingerprint in self._bucket(alternate))

    def _draw(self, bound):
        self.draws += 1
        digest = xxhash.xxh64_intdigest(self.draws.to_bytes(8, 'little'),
                                        self._victim_seed)
        return (digest * bound) >> 64

    def _put(self, index, fingerprint):
        base = index * self.params.entries
        cells = self._cells
        for slot in range(base, base + self.params.entries):
            if not cells[slot]:
                cells[slot] = fingerprint
                return True
        return False

    def _insert_at(self, primary, alternate, fingerprint):
        if self._put(primary, fingerprint) or \
                self._put(alternate, fingerprint):
            return
        index = (primary, alternate)[self._draw(2)]
        entries = self.params.entries
        for _ in range(self.params.max_kicks):
            slot = index * entries + self._draw(entries)
            fingerprint, self._cells[slot] = self._cells[slot], fingerprint
            index = self._alternate(index, fingerprint)
            if self._put(index, fingerprint):
                return
        self.dropped += 1
        logger.debug('Cuckoo filter dropped a fingerprint after %d kicks',
                     self.params.max_kicks)

    def detect(self, element):
        if self._contains(*self._locate(element)):
            return Verdict.DUPLICATE
        return Verdict.UNSEEN

    def insert(self, element):
        primary, alternate, fingerprint = self._locate(element)
        if not self._contains(primary, alternate, fingerprint):
            self._insert_at(primary, alternate, fingerprint)

    def stream(self, element):
        primary, alternate, fingerprint = self._locate(element)
        if self._contains(primary, alternate, fingerprint):
            return Verdict.DUPLICATE
        self._insert_at(primary, alternate, fingerprint)
        return Verdict.UNSEEN

    def load_factor(self):
        """Fraction of occupied slots."""
        return sum(1 for cell in self._cells if cell) / len(self._cells)

    @property
    def memory_bits(self):
        return self.params.memory_bits

    def snapshot(self):
        params = self.params
        fields = (params.buckets, params.entries, params.fingerprint_bits,
                  params.max_kicks, self.seed, self.draws)
        return encode_snapshot('cuckoo', fields,
                               pack_cells(self._cells,
                                          params.fingerprint_bits))

    @classmethod
    def from_snapshot(cls, data, hash_key=None):
        """Rebuild a filter from :meth:`snapshot` output."""
        snapshot = decode_snapshot(data)
        if snapshot.variant != 'cuckoo' or len(snapshot.fields) != 6:
            raise SnapshotError('Snapshot is not a Cuckoo filter state')
        buckets, entries, bits, kicks, seed, draws = snapshot.fields
        try:
            params = CuckooParams(buckets, entries, bits, kicks)
        except ConfigurationError as error:
            raise SnapshotError(str(error))
        cuckoo = cls(params, seed=seed, hash_key=hash_key)
        cuckoo._cells = unpack_cells(snapshot.bits, bits,
                                     buckets * entries)
        cuckoo.draws = draws
        return cuckoo
