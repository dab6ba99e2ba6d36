# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Elements, verdicts, keyed hashing and the duplicate filter contract.

Every filter in this package consumes opaque byte strings and answers each
arrival with a :class:`Verdict`. Hashing is deterministic given a seed so
that two filters built with the same parameters and seed evolve
identically on the same stream.
"""

import abc
import enum
import hashlib
import logging

import numpy as np
import xxhash

from .config import QHT_EMPTY_CELL_POLICY, QHT_MAX_REHASH_ROUNDS
from .errors import ConfigurationError, FingerprintExhaustedError

logger = logging.getLogger(__name__)

MASK64 = (1 << 64) - 1
MAX_FINGERPRINT_BITS = 32


class Verdict(enum.Enum):
    """Answer of a duplicate filter for one arrival."""

    DUPLICATE = 'DUPLICATE'
    UNSEEN = 'UNSEEN'


class EmptyCellPolicy(enum.Enum):
    """Treatment of fingerprints that collide with the empty cell code.

    ``ZERO`` keeps zero as an ordinary fingerprint; rows then never hold an
    empty cell. ``REMAP`` maps zero onto one. ``REHASH`` re-derives the
    fingerprint until it is non-zero.
    """

    ZERO = 'zero'
    REMAP = 'remap'
    REHASH = 'rehash'

    @classmethod
    def coerce(cls, value):
        """Turn ``None``, a name or a member into a member."""
        if value is None:
            value = QHT_EMPTY_CELL_POLICY
        if isinstance(value, cls):
            return value
        try:
            return cls(str(value).lower())
        except ValueError:
            raise ConfigurationError(
                'Unknown empty cell policy {0!r}'.format(value))


def as_element(value):
    """Return ``value`` as an element byte string.

    Text is UTF-8 encoded and non-negative integers become eight little
    endian bytes.
    """
    if isinstance(value, bytes):
        return value
    if isinstance(value, (bytearray, memoryview)):
        return bytes(value)
    if isinstance(value, str):
        return value.encode('utf-8')
    if isinstance(value, int) and 0 <= value <= MASK64:
        return value.to_bytes(8, 'little')
    raise TypeError('Cannot use {0!r} as an element'.format(value))


def derive_seed(seed, *path):
    """Derive an independent 64-bit seed from ``seed`` and a path of ints.

    :param seed: root seed.
    :param path: indices naming the derived stream.
    :return: an integer in ``[0, 2**64)``.
    """
    entropy = [int(seed) & MASK64] + [int(step) & MASK64 for step in path]
    state = np.random.SeedSequence(entropy).generate_state(1, dtype=np.uint64)
    return int(state[0])


def effective_fingerprint_space(fingerprint_bits, policy=None):
    """Number of distinct fingerprints a row can hold.

    :param fingerprint_bits: bits per fingerprint.
    :param policy: an :class:`EmptyCellPolicy` or its name.
    :return: ``2**bits`` when zero is an ordinary value, else one less.
    """
    policy = EmptyCellPolicy.coerce(policy)
    space = 1 << fingerprint_bits
    return space if policy is EmptyCellPolicy.ZERO else space - 1


class HashFamily(object):
    """Seeded row and fingerprint hashing for one filter instance.

    A single 64-bit digest is derived per element. Its high half selects
    the row by multiply-shift and its low bits form the fingerprint.
    When ``key`` is given the digest is a keyed BLAKE2b instead of xxHash.

    Example:

        .. code-block:: python

            family = HashFamily(seed=7, rows=1024, fingerprint_bits=3)
            row, fingerprint = family.locate(b'https://cern.ch')
    """

    def __init__(self, seed, rows, fingerprint_bits, policy=None, key=None,
                 max_rounds=QHT_MAX_REHASH_ROUNDS):
        if not 1 <= rows <= 1 << 32:
            raise ConfigurationError(
                'Row count must lie in [1, 2**32], got {0}'.format(rows))
        if not 1 <= fingerprint_bits <= MAX_FINGERPRINT_BITS:
            raise ConfigurationError(
                'Fingerprint width must lie in [1, {0}], got {1}'.format(
                    MAX_FINGERPRINT_BITS, fingerprint_bits))
        if max_rounds < 1:
            raise ConfigurationError('max_rounds must be positive')
        self.seed = int(seed) & MASK64
        self.rows = rows
        self.fingerprint_bits = fingerprint_bits
        self.policy = EmptyCellPolicy.coerce(policy)
        self.max_rounds = max_rounds
        self.mask = (1 << fingerprint_bits) - 1
        self.keyed = key is not None
        if key is None:
            self.digest = self._xxhash_digest
        else:
            self._key = as_element(key)[:64]
            self._person = self.seed.to_bytes(8, 'little')
            self.digest = self._keyed_digest

    def _xxhash_digest(self, element):
        return xxhash.xxh64_intdigest(element, self.seed)

    def _keyed_digest(self, element):
        blake = hashlib.blake2b(element, digest_size=8, key=self._key,
                                person=self._person)
        return int.from_bytes(blake.digest(), 'little')

    def rehash(self, digest):
        """Derive the next digest in the chain that starts at ``digest``."""
        return self.digest(digest.to_bytes(8, 'little'))

    def row_of(self, digest):
        """Row index selected by the high half of ``digest``."""
        return ((digest >> 32) * self.rows) >> 32

    def fingerprint_of(self, digest):
        """Fingerprint drawn from ``digest`` under the empty cell policy."""
        fingerprint = digest & self.mask
        if fingerprint or self.policy is EmptyCellPolicy.ZERO:
            return fingerprint
        if self.policy is EmptyCellPolicy.REMAP:
            return 1
        for _ in range(self.max_rounds - 1):
            digest = self.rehash(digest)
            fingerprint = digest & self.mask
            if fingerprint:
                return fingerprint
        raise FingerprintExhaustedError(
            'No non-zero fingerprint after {0} derivations'.format(
                self.max_rounds))

    def locate(self, element):
        """Return the ``(row, fingerprint)`` pair of ``element``."""
        digest = self.digest(element)
        return self.row_of(digest), self.fingerprint_of(digest)


def hash_row(family, element):
    """Row of ``element`` in ``[0, family.rows)``."""
    return family.row_of(family.digest(element))


def fingerprint(family, element):
    """Fingerprint of ``element`` in ``[0, 2**family.fingerprint_bits)``."""
    return family.fingerprint_of(family.digest(element))


class DuplicateFilter(abc.ABC):
    """Bounded memory approximate duplicate detector.

    Subclasses implement :meth:`detect` without touching state and
    :meth:`insert`; :meth:`stream` is their composition.
    """

    name = None
    variant = None

    @abc.abstractmethod
    def detect(self, element):
        """Answer whether ``element`` looks already seen."""

    @abc.abstractmethod
    def insert(self, element):
        """Record ``element`` in the filter."""

    def stream(self, element):
        """Answer for ``element`` and record it."""
        verdict = self.detect(element)
        self.insert(element)
        return verdict

    def stream_many(self, elements):
        """Stream every element of ``elements`` and collect the verdicts."""
        stream = self.stream
        return [stream(element) for element in elements]

    @property
    @abc.abstractmethod
    def memory_bits(self):
        """Bits used by the filter state."""

    @abc.abstractmethod
    def snapshot(self):
        """Serialize the complete filter state to bytes."""


class RandomFilter(DuplicateFilter):
    """Answers DUPLICATE with a fixed probability and remembers nothing.

    The answer is a keyed hash of the element and of the number of
    insertions so far, so :meth:`detect` stays free of side effects.
    """

    name = 'random'
    variant = 'random'

    def __init__(self, probability=0.5, seed=0):
        if not 0.0 <= probability <= 1.0:
            raise ConfigurationError('probability must lie in [0, 1]')
        self.probability = probability
        self.seed = int(seed) & MASK64
        self.epoch = 0
        self._threshold = int(probability * float(1 << 64))

    def detect(self, element):
        digest = xxhash.xxh64_intdigest(
            self.epoch.to_bytes(8, 'little') + element, self.seed)
        if digest < self._threshold:
            return Verdict.DUPLICATE
        return Verdict.UNSEEN

    def insert(self, element):
        self.epoch += 1

    @property
    def memory_bits(self):
        return 64

    def snapshot(self):
        return self.epoch.to_bytes(8, 'little')
