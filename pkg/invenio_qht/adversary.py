# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Black-box attacks on duplicate filters and the keyed countermeasure.

A filter with bounded memory forgets: flooding it with enough fresh
elements makes a previously inserted element look unseen again. The
functions here measure how many fresh elements that takes.
"""

import hashlib
import logging
import math
import struct
from dataclasses import dataclass
from fractions import Fraction

from cryptography.hazmat.primitives import padding
from cryptography.hazmat.primitives.ciphers import Cipher, algorithms, modes

from .config import (QHT_ATTACK_TRIALS, QHT_ESTIMATE_MAX_FLOOD,
                     QHT_ESTIMATE_TRIALS)
from .core import DuplicateFilter, Verdict, as_element, derive_seed
from .errors import ConfigurationError, ConvergenceError

logger = logging.getLogger(__name__)

SUCCESS_THRESHOLD = 1.0 - math.exp(-1.0)
"""Flood success rate at which a filter is considered to have forgotten."""

_ELEMENT = struct.Struct('<QQQ')


@dataclass(frozen=True)
class AttackConfig(object):
    """Flooding attack parameters.

    :param memory: estimated element capacity ``M`` of the target.
    :param flood_factor: ``h``; the attack inserts ``ceil(h * M)`` fresh
        elements between the two arrivals of the target element.
    :param trials: independent repetitions.
    :param seed: root seed of trial seeds and element namespaces.
    """

    memory: int
    flood_factor: Fraction = Fraction(1)
    trials: int = QHT_ATTACK_TRIALS
    seed: int = 0

    def __post_init__(self):
        if self.memory < 1:
            raise ConfigurationError('Memory estimate must be positive')
        if self.flood_factor < 0:
            raise ConfigurationError('Flood factor cannot be negative')
        if self.trials < 1:
            raise ConfigurationError('At least one trial is needed')

    @property
    def flood_length(self):
        return math.ceil(Fraction(self.flood_factor) * self.memory)


def attack_success_bound(rows, buckets, flood_length):
    """Probability that ``flood_length`` insertions evict one given cell.

    Each fresh element replaces the target's cell with probability at
    most ``1 / (N * k)``.
    """
    if rows < 1 or buckets < 1 or flood_length < 0:
        raise ConfigurationError('Need N, k >= 1 and a non-negative flood')
    return 1.0 - (1.0 - 1.0 / (rows * buckets)) ** flood_length


def _fresh(namespace, trial, index):
    return _ELEMENT.pack(namespace, trial, index)


def false_negative_attack(filter_factory, config):
    """Fraction of trials in which flooding hides a known element.

    :param filter_factory: callable building a fresh filter from a seed.
    :param config: an :class:`AttackConfig`.
    :return: empirical false negative probability of the target.

    Example:

        .. code-block:: python

            def factory(seed):
                return new_qht(4096 * 8 + 1, 8, seed=seed)

            false_negative_attack(factory, AttackConfig(4096, 4))
    """
    namespace = derive_seed(config.seed, 0)
    flood = config.flood_length
    forgotten = 0
    for trial in range(config.trials):
        target = filter_factory(derive_seed(config.seed, 1, trial))
        element = _fresh(namespace, trial, 0)
        target.stream(element)
        stream = target.stream
        for index in range(1, flood + 1):
            stream(_fresh(namespace, trial, index))
        if stream(element) is Verdict.UNSEEN:
            forgotten += 1
    rate = forgotten / config.trials
    logger.info('Flood of %d elements hid the target in %d/%d trials',
                flood, forgotten, config.trials)
    return rate


class _FloodSampler(object):

    def __init__(self, oracle, trials, seed):
        self.oracle = oracle
        self.trials = trials
        self.namespace = derive_seed(seed, 2)
        self.counter = 0

    def _next(self):
        self.counter += 1
        return _fresh(self.namespace, 0, self.counter)

    def success(self, flood):
        oracle = self.oracle
        forgotten = 0
        for _ in range(self.trials):
            element = self._next()
            oracle(element)
            for _ in range(flood):
                oracle(self._next())
            if oracle(element) is Verdict.UNSEEN:
                forgotten += 1
        rate = forgotten / self.trials
        logger.debug('Flood of %d elements: success %.3f', flood, rate)
        return rate


def estimate_memory(oracle, trials=QHT_ESTIMATE_TRIALS,
                    max_flood=QHT_ESTIMATE_MAX_FLOOD, seed=0):
    """Estimate the element capacity of a black-box stream oracle.

    Finds, by doubling then bisection, the shortest flood after which a
    known element is reported unseen with probability at least
    ``1 - 1/e``.

    :param oracle: callable mapping an element to a :class:`Verdict`,
        typically the ``stream`` method of a filter.
    :raises ConvergenceError: when the oracle already forgets without any
        flood, or when no flood up to ``max_flood`` crosses the threshold
        twice in a row.
    """
    sampler = _FloodSampler(oracle, trials, seed)
    if sampler.success(0) >= SUCCESS_THRESHOLD:
        raise ConvergenceError(
            'Oracle reports unseen elements without any flood')
    flood = 1
    previous = sampler.success(flood)
    while True:
        if 2 * flood > max_flood:
            raise ConvergenceError(
                'No flood up to {0} elements reached success {1:.3f}'.format(
                    max_flood, SUCCESS_THRESHOLD))
        current = sampler.success(2 * flood)
        if previous >= SUCCESS_THRESHOLD and current >= SUCCESS_THRESHOLD:
            break
        flood *= 2
        previous = current
    low, high = flood // 2, flood
    while high - low > max(1, low // 8):
        middle = (low + high) // 2
        if sampler.success(middle) >= SUCCESS_THRESHOLD:
            high = middle
        else:
            low = middle
    logger.info('Estimated capacity of %d elements after %d queries', high,
                sampler.counter)
    return high


def _cipher_key(secret):
    secret = as_element(secret)
    if len(secret) in (16, 24, 32):
        return secret
    return hashlib.blake2b(secret, digest_size=32).digest()


class KeyedFilter(DuplicateFilter):
    """Filter wrapper passing every element through a secret permutation.

    Elements are PKCS7 padded and encrypted with AES-CBC under a fixed
    IV, which is injective, so ground-truth duplicates are preserved while
    an attacker without the key cannot aim at chosen rows.
    """

    def __init__(self, inner, secret_key):
        self.inner = inner
        self.name = inner.name
        self.variant = inner.variant
        self._cipher = Cipher(algorithms.AES(_cipher_key(secret_key)),
                              modes.CBC(b'\0' * 16))

    def permute(self, element):
        """Image of ``element`` under the keyed permutation."""
        padder = padding.PKCS7(128).padder()
        data = padder.update(element) + padder.finalize()
        encryptor = self._cipher.encryptor()
        return encryptor.update(data) + encryptor.finalize()

    def detect(self, element):
        return self.inner.detect(self.permute(element))

    def insert(self, element):
        self.inner.insert(self.permute(element))

    def stream(self, element):
        return self.inner.stream(self.permute(element))

    @property
    def memory_bits(self):
        return self.inner.memory_bits

    def snapshot(self):
        return self.inner.snapshot()


def keyed_wrapper(inner, secret_key):
    """Wrap ``inner`` in a :class:`KeyedFilter`."""
    return KeyedFilter(inner, secret_key)
