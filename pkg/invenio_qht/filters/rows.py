# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Row-organised fingerprint tables shared by QHT variants and SQF."""

import logging

import xxhash

from ..core import DuplicateFilter, Verdict, derive_seed
from ..errors import ConfigurationError, SnapshotError
from ..semisort import count_states, decode_row, encode_row, rank_width
from ..table import encode_snapshot, pack_cells, unpack_cells

logger = logging.getLogger(__name__)

VARIANTS = ('qht', 'qhtd', 'qqhtd')
LAYOUTS = ('plain', 'semisorted')

DUPLICATE = Verdict.DUPLICATE
UNSEEN = Verdict.UNSEEN


class RowTable(DuplicateFilter):
    """``rows`` x ``k`` cells of ``width`` bits with per-variant updates.

    Subclasses provide :meth:`_locate`, mapping an element onto its row
    and its fingerprint. ``empty`` is the cell code meaning "no
    fingerprint" or ``None`` when every code is a valid fingerprint.

    Replacement picks the ``j``-th smallest value of a full row, with ``j``
    drawn from a counter-based hash of the seed. Plain and semi-sorted
    layouts therefore stay verdict-identical under the same seed, and the
    draw counter is all a snapshot needs to resume replacement.
    """

    def __init__(self, rows, k, width, empty, seed, variant='qht',
                 layout='plain'):
        if variant not in VARIANTS:
            raise ConfigurationError('Unknown variant {0!r}'.format(variant))
        if layout not in LAYOUTS:
            raise ConfigurationError('Unknown layout {0!r}'.format(layout))
        if layout == 'semisorted' and variant == 'qqhtd':
            raise ConfigurationError(
                'The semi-sorted layout discards the cell order QQHTD needs')
        self.rows = rows
        self.k = k
        self.width = width
        self.empty = empty
        self.seed = seed
        self.variant = variant
        self.layout = layout
        self.draws = 0
        self._victim_seed = derive_seed(seed, 1)
        fill = 0 if empty is None else empty
        if layout == 'plain':
            self._cells = [fill] * (rows * k)
            self._update = getattr(self, '_update_' + variant)
        else:
            self._space = 1 << width
            self._rank_width = rank_width(self._space, k)
            if self._rank_width > 62:
                raise ConfigurationError(
                    'Semi-sorted rows need {0} bit ranks'.format(
                        self._rank_width))
            self._ranks = [encode_row([fill] * k, self._space)] * rows
            self._update = self._update_semisorted
        logger.debug('Built %s %s table: %d rows x %d cells of %d bits',
                     layout, variant, rows, k, width)

    def _locate(self, element):
        raise NotImplementedError

    def row(self, index):
        """Values held by row ``index``.

        Plain rows keep their column order; semi-sorted rows are sorted.
        """
        if self.layout == 'plain':
            base = index * self.k
            return self._cells[base:base + self.k]
        return decode_row(self._ranks[index], self._space, self.k)

    def cells(self):
        """All cell values, row by row."""
        if self.layout == 'plain':
            return list(self._cells)
        values = []
        for index in range(self.rows):
            values.extend(self.row(index))
        return values

    def load_factor(self):
        """Fraction of cells holding a fingerprint."""
        cells = self.cells()
        if self.empty is None:
            return 1.0
        return sum(1 for value in cells if value != self.empty) / len(cells)

    @property
    def memory_bits(self):
        if self.layout == 'plain':
            return self.rows * self.k * self.width
        return self.rows * self._rank_width

    def detect(self, element):
        index, fingerprint = self._locate(element)
        if fingerprint in self.row(index):
            return DUPLICATE
        return UNSEEN

    def insert(self, element):
        self._update(*self._locate(element))

    def stream(self, element):
        return self._update(*self._locate(element))

    def _victim(self, values):
        if self.k == 1:
            return values[0]
        self.draws += 1
        digest = xxhash.xxh64_intdigest(self.draws.to_bytes(8, 'little'),
                                        self._victim_seed)
        return sorted(values)[(digest * self.k) >> 64]

    def _place(self, base, values, fingerprint):
        try:
            column = values.index(self.empty)
        except ValueError:
            column = values.index(self._victim(values))
        self._cells[base + column] = fingerprint

    def _update_qht(self, index, fingerprint):
        base = index * self.k
        values = self._cells[base:base + self.k]
        if fingerprint in values:
            return DUPLICATE
        self._place(base, values, fingerprint)
        return UNSEEN

    def _update_qhtd(self, index, fingerprint):
        base = index * self.k
        values = self._cells[base:base + self.k]
        verdict = DUPLICATE if fingerprint in values else UNSEEN
        self._place(base, values, fingerprint)
        return verdict

    def _update_qqhtd(self, index, fingerprint):
        base = index * self.k
        end = base + self.k
        cells = self._cells
        verdict = DUPLICATE if fingerprint in cells[base:end] else UNSEEN
        cells[base:end - 1] = cells[base + 1:end]
        cells[end - 1] = fingerprint
        return verdict

    def _update_semisorted(self, index, fingerprint):
        values = decode_row(self._ranks[index], self._space, self.k)
        verdict = DUPLICATE if fingerprint in values else UNSEEN
        if verdict is UNSEEN or self.variant == 'qhtd':
            try:
                column = values.index(self.empty)
            except ValueError:
                column = values.index(self._victim(values))
            values[column] = fingerprint
            self._ranks[index] = encode_row(values, self._space)
        return verdict

    def _snapshot_fields(self):
        raise NotImplementedError

    def snapshot(self):
        if self.layout == 'plain':
            bits = pack_cells(self._cells, self.width)
        else:
            bits = pack_cells(self._ranks, self._rank_width)
        return encode_snapshot(self._snapshot_variant(),
                               self._snapshot_fields(), bits)

    def _snapshot_variant(self):
        return self.variant

    def _load_payload(self, bits):
        if self.layout == 'plain':
            self._cells = unpack_cells(bits, self.width, self.rows * self.k)
        else:
            ranks = unpack_cells(bits, self._rank_width, self.rows)
            total = count_states(self._space, self.k)
            if any(rank >= total for rank in ranks):
                raise SnapshotError('Snapshot holds an invalid rank')
            self._ranks = ranks

    def __repr__(self):
        return '<{0} {1} rows={2} k={3} width={4}>'.format(
            type(self).__name__, self.variant, self.rows, self.k, self.width)
