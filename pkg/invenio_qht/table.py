# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Exact bit packing of filter cells and the snapshot wire format.

A snapshot is laid out as::

    magic (4 bytes) | variant (u16) | field count (u16) |
    fields (u64 each) | payload bit length (u64) | payload bytes

All integers are little endian. The payload is the cell array packed with
exactly ``width`` bits per cell, least significant bit first.
"""

import collections
import struct

import numpy as np
from bitarray import bitarray

from .errors import SnapshotError

SNAPSHOT_MAGIC = b'QHTS'

VARIANT_CODES = collections.OrderedDict([
    ('qht', 1),
    ('qhtd', 2),
    ('qqhtd', 3),
    ('sqf', 4),
    ('sbf', 5),
    ('cuckoo', 6),
])
_VARIANT_NAMES = dict((code, name) for name, code in VARIANT_CODES.items())

_HEADER = struct.Struct('<4sHH')
_FIELD = struct.Struct('<Q')

Snapshot = collections.namedtuple('Snapshot', ['variant', 'fields', 'bits'])


def pack_cells(values, width):
    """Pack integers into a bit array using ``width`` bits each.

    :param values: sequence of integers in ``[0, 2**width)``.
    :param width: bits per value, at most 64.
    :return: a little endian :class:`bitarray.bitarray`.
    """
    if not 1 <= width <= 64:
        raise SnapshotError('Cell width must lie in [1, 64]')
    cells = np.asarray(values, dtype='<u8').reshape(-1)
    if width < 64 and cells.size and int(cells.max()) >> width:
        raise SnapshotError('Cell value does not fit in {0} bits'.format(
            width))
    planes = np.unpackbits(cells.view(np.uint8).reshape(-1, 8), axis=1,
                           bitorder='little')[:, :width]
    bits = bitarray(endian='little')
    bits.frombytes(np.packbits(planes.reshape(-1),
                               bitorder='little').tobytes())
    del bits[cells.size * width:]
    return bits


def unpack_cells(bits, width, count):
    """Inverse of :func:`pack_cells`."""
    if len(bits) < width * count:
        raise SnapshotError('Payload holds {0} bits, expected {1}'.format(
            len(bits), width * count))
    raw = np.frombuffer(bits.tobytes(), dtype=np.uint8)
    flat = np.unpackbits(raw, bitorder='little')[:width * count]
    planes = flat.reshape(count, width).astype(np.uint64)
    weights = np.left_shift(np.uint64(1),
                            np.arange(width, dtype=np.uint64))
    return [int(value) for value in (planes * weights).sum(axis=1,
                                                         dtype=np.uint64)]


def encode_snapshot(variant, fields, bits):
    """Serialize a filter state.

    :param variant: one of :data:`VARIANT_CODES`.
    :param fields: integer parameters needed to rebuild the filter.
    :param bits: packed cell payload.
    """
    try:
        code = VARIANT_CODES[variant]
    except KeyError:
        raise SnapshotError('Unknown variant {0!r}'.format(variant))
    chunks = [_HEADER.pack(SNAPSHOT_MAGIC, code, len(fields))]
    chunks.extend(_FIELD.pack(int(value)) for value in fields)
    chunks.append(_FIELD.pack(len(bits)))
    chunks.append(bits.tobytes())
    return b''.join(chunks)


def decode_snapshot(data):
    """Parse bytes produced by :func:`encode_snapshot`.

    :return: a :class:`Snapshot` tuple.
    """
    if len(data) < _HEADER.size:
        raise SnapshotError('Snapshot is truncated')
    magic, code, count = _HEADER.unpack_from(data)
    if magic != SNAPSHOT_MAGIC:
        raise SnapshotError('Not a filter snapshot')
    if code not in _VARIANT_NAMES:
        raise SnapshotError('Unknown variant code {0}'.format(code))
    offset = _HEADER.size
    end = offset + _FIELD.size * (count + 1)
    if len(data) < end:
        raise SnapshotError('Snapshot header is truncated')
    fields = tuple(_FIELD.unpack_from(data, offset + _FIELD.size * index)[0]
                   for index in range(count))
    length = _FIELD.unpack_from(data, end - _FIELD.size)[0]
    payload = data[end:]
    if len(payload) != (length + 7) // 8:
        raise SnapshotError('Payload length does not match its header')
    bits = bitarray(endian='little')
    bits.frombytes(payload)
    del bits[length:]
    return Snapshot(_VARIANT_NAMES[code], fields, bits)
