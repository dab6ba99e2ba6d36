# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Reproducible element streams.

Uniform streams are drawn from a counter-based Philox generator so the
same ``(U, n, seed)`` always yields the same bytes on every platform.
"""

import logging
import math
from dataclasses import dataclass

import numpy as np

from .config import QHT_INGEST_MAX_LINE_BYTES
from .errors import ConfigurationError, StreamFormatError

logger = logging.getLogger(__name__)

_CHUNK = 1 << 16
MAX_ALPHABET = 1 << 63


def _generator(seed):
    return np.random.Generator(np.random.Philox(int(seed) & ((1 << 64) - 1)))


def gen_uniform(alphabet_size, length, seed=0):
    """Iterate ``length`` elements drawn uniformly from ``alphabet_size``.

    Elements are the eight little endian bytes of integers in
    ``[0, alphabet_size)``.

    Example:

        .. code-block:: python

            elements = list(gen_uniform(2 ** 20, 1000, seed=3))
    """
    if not 1 <= alphabet_size <= MAX_ALPHABET:
        raise ConfigurationError('Alphabet size must lie in [1, 2**63]')
    if length < 0:
        raise ConfigurationError('Stream length cannot be negative')
    return _uniform(_generator(seed), alphabet_size, length)


def _uniform(generator, alphabet_size, length):
    remaining = length
    while remaining:
        size = min(_CHUNK, remaining)
        raw = generator.integers(0, alphabet_size, size=size,
                                 dtype=np.uint64).astype('<u8').tobytes()
        for offset in range(0, 8 * size, 8):
            yield raw[offset:offset + 8]
        remaining -= size


def expected_duplicates(alphabet_size, length):
    """Expected fraction of arrivals whose value appeared earlier.

    Example:

        .. code-block:: python

            >>> round(expected_duplicates(2 ** 27, 150 * 10 ** 6), 3)
            0.398
    """
    if alphabet_size < 1 or length < 0:
        raise ConfigurationError('Need U >= 1 and n >= 0')
    if length == 0:
        return 0.0
    if alphabet_size == 1:
        return (length - 1) / length
    distinct = -alphabet_size * math.expm1(
        length * math.log1p(-1.0 / alphabet_size))
    return max(0.0, (length - distinct) / length)


def ingest_file(path, max_line_bytes=QHT_INGEST_MAX_LINE_BYTES):
    """Yield each newline-delimited record of ``path`` as an element.

    Records are taken byte-exact apart from the trailing newline.

    :raises StreamFormatError: when a record exceeds ``max_line_bytes``.
    :raises OSError: when ``path`` cannot be read.
    """
    with open(path, 'rb') as stream:
        for number, line in enumerate(stream, 1):
            if line.endswith(b'\n'):
                line = line[:-1]
            if len(line) > max_line_bytes:
                raise StreamFormatError(
                    'Line {0} of {1} exceeds {2} bytes'.format(
                        number, path, max_line_bytes), line_number=number)
            yield line


def gen_locality(length, repeat_fraction=0.15, mean_distance=4000, seed=0):
    """Iterate URL-like elements with temporal locality.

    Each arrival repeats a recent element with probability
    ``repeat_fraction``, reaching back a geometric number of positions
    with mean ``mean_distance``; otherwise it is a fresh URL.
    """
    if length < 0:
        raise ConfigurationError('Stream length cannot be negative')
    if not 0.0 <= repeat_fraction < 1.0:
        raise ConfigurationError('repeat_fraction must lie in [0, 1)')
    if mean_distance < 1:
        raise ConfigurationError('mean_distance must be at least 1')
    return _locality(_generator(seed), length, repeat_fraction,
                     mean_distance)


def _locality(generator, length, repeat_fraction, mean_distance):
    history = []
    fresh = 0
    produced = 0
    while produced < length:
        size = min(_CHUNK, length - produced)
        repeats = generator.random(size) < repeat_fraction
        distances = generator.geometric(1.0 / mean_distance, size=size)
        hosts = generator.integers(0, 4096, size=size)
        for repeat, distance, host in zip(repeats.tolist(),
                                          distances.tolist(),
                                          hosts.tolist()):
            if repeat and history:
                element = history[-min(distance, len(history))]
            else:
                element = 'https://site{0}.example.org/page/{1:x}'.format(
                    host, fresh).encode('ascii')
                fresh += 1
            history.append(element)
            if len(history) > 16 * mean_distance:
                del history[:len(history) - 8 * mean_distance]
            yield element
        produced += size


def write_corpus(path, elements):
    """Write ``elements`` to ``path`` one per line and return their count."""
    count = 0
    with open(path, 'wb') as stream:
        for element in elements:
            if b'\n' in element:
                raise StreamFormatError(
                    'Element {0} contains a newline'.format(count + 1))
            stream.write(element)
            stream.write(b'\n')
            count += 1
    return count


def count_duplicates(elements):
    """Return ``(length, duplicates)`` of an element sequence."""
    seen = set()
    length = 0
    for element in elements:
        seen.add(element)
        length += 1
    return length, length - len(seen)


@dataclass(frozen=True)
class StreamSpec(object):
    """Picklable description of a benchmark stream.

    :param source: ``uniform``, ``locality`` or ``file``.
    :param alphabet_size: ``U`` of uniform streams.
    :param length: number of elements of generated streams.
    :param path: input file of ``file`` streams.
    """

    source: str = 'uniform'
    alphabet_size: int = 1 << 20
    length: int = 10 ** 5
    path: str = None

    def __post_init__(self):
        if self.source not in ('uniform', 'locality', 'file'):
            raise ConfigurationError('Unknown stream source {0!r}'.format(
                self.source))
        if self.source == 'file' and not self.path:
            raise ConfigurationError('File streams need a path')
        if self.source == 'uniform' and not \
                1 <= self.alphabet_size <= MAX_ALPHABET:
            raise ConfigurationError('Alphabet size must lie in [1, 2**63]')
        if self.length < 0:
            raise ConfigurationError('Stream length cannot be negative')

    @classmethod
    def parse(cls, text, alphabet_bits=20, length=10 ** 5):
        """Build a spec from ``uniform``, ``locality`` or ``file:PATH``."""
        if text.startswith('file:'):
            return cls('file', path=text[len('file:'):], length=0)
        if text in ('uniform', 'locality'):
            if not 0 <= alphabet_bits <= 63:
                raise ConfigurationError('alphabet_bits must lie in [0, 63]')
            return cls(text, alphabet_size=1 << alphabet_bits, length=length)
        raise ConfigurationError('Unknown stream {0!r}'.format(text))

    @property
    def label(self):
        if self.source == 'file':
            return 'file:{0}'.format(self.path)
        if self.source == 'locality':
            return 'locality(n={0})'.format(self.length)
        return 'uniform(U={0},n={1})'.format(self.alphabet_size, self.length)

    def elements(self, seed=0):
        """Iterate the stream; ``seed`` only affects generated sources."""
        if self.source == 'uniform':
            return gen_uniform(self.alphabet_size, self.length, seed)
        if self.source == 'locality':
            return gen_locality(self.length, seed=seed)
        return ingest_file(self.path)
