# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Test the flooding attack, capacity estimation and keyed wrapper."""

import math
import unittest
from fractions import Fraction

from invenio_qht.adversary import (SUCCESS_THRESHOLD, AttackConfig,
                                   KeyedFilter, attack_success_bound,
                                   estimate_memory, false_negative_attack,
                                   keyed_wrapper)
from invenio_qht.bench.oracle import GroundTruthOracle
from invenio_qht.core import RandomFilter, Verdict
from invenio_qht.errors import ConfigurationError, ConvergenceError
from invenio_qht.filters import QhtParams, QuotientHashTable, new_qht
from invenio_qht.streamgen import gen_uniform


def qht_factory(capacity):
    """Factory of one-bucket QHTs holding ``capacity`` wide fingerprints."""
    params = QhtParams.from_rows(capacity, 1, 16)

    def factory(seed):
        return QuotientHashTable(params, seed=seed)

    return factory


class TestAttackConfig(unittest.TestCase):
    """Test the attack parameters."""

    def test_flood_length(self):
        """Test the flood is rounded up."""
        self.assertEqual(AttackConfig(5, Fraction(1, 2)).flood_length, 3)
        self.assertEqual(AttackConfig(4096, 4).flood_length, 16384)
        self.assertEqual(AttackConfig(4096, 0).flood_length, 0)

    def test_invalid(self):
        """Test impossible configurations."""
        self.assertRaises(ConfigurationError, AttackConfig, 0)
        self.assertRaises(ConfigurationError, AttackConfig, 10, -1)
        self.assertRaises(ConfigurationError, AttackConfig, 10, 1, 0)

    def test_bound(self):
        """Test the eviction probability approaches ``1 - exp(-h)``."""
        self.assertAlmostEqual(attack_success_bound(4096, 1, 4 * 4096),
                               1 - math.exp(-4), places=3)
        self.assertEqual(attack_success_bound(4096, 1, 0), 0.0)
        self.assertAlmostEqual(SUCCESS_THRESHOLD, 0.632, places=3)


class TestFalseNegativeAttack(unittest.TestCase):
    """Test flooding a QHT."""

    def test_no_flood(self):
        """Test an immediate replay is always detected."""
        config = AttackConfig(256, 0, trials=50)
        self.assertEqual(false_negative_attack(qht_factory(256), config),
                         0.0)

    def test_flood(self):
        """Test long floods make the target look unseen."""
        factory = qht_factory(256)
        self.assertTrue(false_negative_attack(
            factory, AttackConfig(256, 1, trials=200)) >= 0.5)
        self.assertTrue(false_negative_attack(
            factory, AttackConfig(256, 4, trials=200)) >= 0.95)

    def test_monotone(self):
        """Test success grows with the flood factor."""
        factory = qht_factory(128)
        rates = [false_negative_attack(factory, AttackConfig(128, h))
                 for h in (Fraction(1, 2), 1, 2, 4)]
        noise = 2 * math.sqrt(0.25 / 200)
        for lower, higher in zip(rates, rates[1:]):
            self.assertTrue(higher >= lower - noise)


class TestEstimateMemory(unittest.TestCase):
    """Test capacity estimation through saturation."""

    def test_capacity(self):
        """Test estimates stay within a factor of four of ``N * k``."""
        large = qht_factory(1024)(1)
        self.assertTrue(256 <= estimate_memory(large.stream, trials=64)
                        <= 4096)
        small = qht_factory(16)(1)
        self.assertTrue(4 <= estimate_memory(small.stream) <= 64)

    def test_element_independence(self):
        """Test disjoint query alphabets give similar estimates."""
        first = estimate_memory(qht_factory(256)(2).stream, seed=0)
        second = estimate_memory(qht_factory(256)(2).stream, seed=1)
        self.assertTrue(0.5 <= first / second <= 2)

    def test_random_filter(self):
        """Test a memoryless filter never converges."""
        coin = RandomFilter(0.5, seed=4)
        self.assertRaises(ConvergenceError, estimate_memory, coin.stream,
                          max_flood=256)

    def test_forgetful_oracle(self):
        """Test an oracle forgetting without any flood is rejected."""
        for probability in (0.0, 0.2):
            coin = RandomFilter(probability, seed=4)
            self.assertRaises(ConvergenceError, estimate_memory,
                              coin.stream, max_flood=256, trials=256)


class TestKeyedFilter(unittest.TestCase):
    """Test the keyed permutation wrapper."""

    def test_permutation(self):
        """Test the permutation is keyed, deterministic and injective."""
        keyed = KeyedFilter(new_qht(1024, 3), b'secret')
        other = KeyedFilter(new_qht(1024, 3), u'another secret')
        images = set()
        for value in range(1000):
            element = value.to_bytes(8, 'little')
            image = keyed.permute(element)
            self.assertEqual(image, keyed.permute(element))
            self.assertNotEqual(image, other.permute(element))
            self.assertEqual(len(image) % 16, 0)
            images.add(image)
        self.assertEqual(len(images), 1000)
        self.assertEqual(len(keyed.permute(b'')), 16)
        self.assertEqual(len(KeyedFilter(new_qht(1024, 3), b'k' * 32)
                             .permute(b'x')), 16)

    def test_contract(self):
        """Test the wrapper delegates to the wrapped filter."""
        inner = new_qht(1024, 3, seed=3)
        keyed = keyed_wrapper(inner, b'secret')
        self.assertEqual(keyed.name, 'qht')
        self.assertEqual(keyed.memory_bits, inner.memory_bits)
        self.assertIs(keyed.detect(b'a'), Verdict.UNSEEN)
        self.assertEqual(keyed.snapshot(), new_qht(1024, 3,
                                                   seed=3).snapshot())
        self.assertIs(keyed.stream(b'a'), Verdict.UNSEEN)
        self.assertIs(keyed.detect(b'a'), Verdict.DUPLICATE)
        self.assertIs(inner.detect(keyed.permute(b'a')), Verdict.DUPLICATE)
        self.assertEqual(keyed.snapshot(), inner.snapshot())

    def test_key_dependence(self):
        """Test two keys answer differently on the same stream."""
        stream = list(gen_uniform(4096, 5000, seed=1))
        first = keyed_wrapper(new_qht(768, 3, seed=1), b'one')
        second = keyed_wrapper(new_qht(768, 3, seed=1), b'two')
        self.assertNotEqual(first.stream_many(stream),
                            second.stream_many(stream))

    def test_statistics_unchanged(self):
        """Test wrapping keeps the false positive rate on uniform streams."""
        stream = list(gen_uniform(2 ** 16, 30000, seed=2))

        def false_positive_rate(built):
            oracle = GroundTruthOracle()
            unseen = positives = 0
            for element in stream:
                verdict = built.stream(element)
                if not oracle.classify(element):
                    unseen += 1
                    positives += verdict is Verdict.DUPLICATE
            return positives / unseen

        plain = false_positive_rate(new_qht(3072, 3, seed=5))
        keyed = false_positive_rate(
            keyed_wrapper(new_qht(3072, 3, seed=5), b'secret'))
        self.assertAlmostEqual(plain, keyed, delta=0.02)
