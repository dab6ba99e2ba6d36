# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Test hashing, elements and the filter contract."""

import math
import unittest

import numpy as np
from hypothesis import given
from hypothesis import strategies as st

from invenio_qht.core import (DuplicateFilter, EmptyCellPolicy, HashFamily,
                              RandomFilter, Verdict, as_element, derive_seed,
                              effective_fingerprint_space, fingerprint,
                              hash_row)
from invenio_qht.errors import ConfigurationError, FingerprintExhaustedError

from .settings import STANDARD_SETTINGS


class TestElements(unittest.TestCase):
    """Test element conversion and seed derivation."""

    def test_as_element(self):
        """Test bytes, text and integers become byte strings."""
        self.assertEqual(as_element(b'abc'), b'abc')
        self.assertEqual(as_element(bytearray(b'abc')), b'abc')
        self.assertEqual(as_element(u'caf\xe9'), b'caf\xc3\xa9')
        self.assertEqual(as_element(1), b'\x01' + b'\x00' * 7)

    def test_as_element_rejects_other_types(self):
        """Test floats and negative integers are refused."""
        self.assertRaises(TypeError, as_element, 1.5)
        self.assertRaises(TypeError, as_element, -1)

    def test_derive_seed(self):
        """Test derived seeds are deterministic and path dependent."""
        self.assertEqual(derive_seed(7, 1), derive_seed(7, 1))
        self.assertNotEqual(derive_seed(7, 1), derive_seed(7, 2))
        self.assertNotEqual(derive_seed(7, 1), derive_seed(8, 1))
        self.assertTrue(0 <= derive_seed(2 ** 70, 3) < 2 ** 64)


class TestEmptyCellPolicy(unittest.TestCase):
    """Test the empty cell policies."""

    def test_coerce(self):
        """Test names, members and the default are accepted."""
        self.assertIs(EmptyCellPolicy.coerce('ZERO'), EmptyCellPolicy.ZERO)
        self.assertIs(EmptyCellPolicy.coerce(EmptyCellPolicy.REMAP),
                      EmptyCellPolicy.REMAP)
        self.assertIs(EmptyCellPolicy.coerce(None), EmptyCellPolicy.REHASH)
        self.assertRaises(ConfigurationError, EmptyCellPolicy.coerce, 'nope')

    def test_effective_space(self):
        """Test zero is only a fingerprint under the zero policy."""
        self.assertEqual(effective_fingerprint_space(3, 'zero'), 8)
        self.assertEqual(effective_fingerprint_space(3, 'remap'), 7)
        self.assertEqual(effective_fingerprint_space(3, 'rehash'), 7)

    def test_zero_digest(self):
        """Test how each policy treats a digest with zero low bits."""
        zero = HashFamily(1, 8, 3, policy='zero')
        remap = HashFamily(1, 8, 3, policy='remap')
        rehash = HashFamily(1, 8, 3, policy='rehash')
        self.assertEqual(zero.fingerprint_of(0), 0)
        self.assertEqual(remap.fingerprint_of(0), 1)
        self.assertTrue(1 <= rehash.fingerprint_of(0) < 8)

    def test_rehash_exhaustion(self):
        """Test giving up once every derivation stays zero."""
        family = HashFamily(1, 8, 3, policy='rehash', max_rounds=1)
        self.assertRaises(FingerprintExhaustedError,
                          family.fingerprint_of, 0)


class TestHashFamily(unittest.TestCase):
    """Test row and fingerprint hashing."""

    def test_invalid_parameters(self):
        """Test row counts and widths are validated."""
        self.assertRaises(ConfigurationError, HashFamily, 0, 0, 3)
        self.assertRaises(ConfigurationError, HashFamily, 0, 2 ** 32 + 1, 3)
        self.assertRaises(ConfigurationError, HashFamily, 0, 8, 0)
        self.assertRaises(ConfigurationError, HashFamily, 0, 8, 33)

    def test_single_row(self):
        """Test a single-row table sends every element to row 0."""
        family = HashFamily(3, 1, 3)
        for value in range(100):
            self.assertEqual(hash_row(family, as_element(value)), 0)

    @STANDARD_SETTINGS
    @given(st.binary(max_size=64), st.integers(1, 2 ** 32),
           st.integers(1, 32), st.integers(0, 2 ** 64 - 1))
    def test_ranges(self, element, rows, bits, seed):
        """Test rows and fingerprints stay in range."""
        family = HashFamily(seed, rows, bits)
        self.assertTrue(0 <= hash_row(family, element) < rows)
        self.assertTrue(0 < fingerprint(family, element) < 2 ** bits)

    @STANDARD_SETTINGS
    @given(st.binary(max_size=32))
    def test_rehash_never_returns_zero(self, element):
        """Test one-bit fingerprints are always 1 under rehashing."""
        self.assertEqual(fingerprint(HashFamily(5, 4, 1), element), 1)

    def test_seed_dependence(self):
        """Test the same seed reproduces and another seed does not."""
        elements = [as_element(value) for value in range(64)]
        first = [HashFamily(1, 1024, 16).locate(e) for e in elements]
        again = [HashFamily(1, 1024, 16).locate(e) for e in elements]
        other = [HashFamily(2, 1024, 16).locate(e) for e in elements]
        self.assertEqual(first, again)
        self.assertNotEqual(first, other)

    def test_keyed_digest(self):
        """Test keyed hashing depends on the key."""
        plain = HashFamily(1, 1024, 16)
        keyed = HashFamily(1, 1024, 16, key=b'secret')
        other = HashFamily(1, 1024, 16, key=b'another')
        element = b'https://cds.cern.ch/record/1'
        self.assertTrue(keyed.keyed)
        self.assertEqual(keyed.digest(element),
                         HashFamily(1, 1024, 16, key=b'secret').digest(
                             element))
        self.assertNotEqual(keyed.digest(element), plain.digest(element))
        self.assertNotEqual(keyed.digest(element), other.digest(element))

    def test_spread(self):
        """Test rows and fingerprints are uniform over a million elements."""
        total, rows = 10 ** 6, 16
        family = HashFamily(11, rows, 3)
        digests = [family.digest(as_element(value))
                   for value in range(total)]
        by_row = np.bincount([family.row_of(d) for d in digests],
                             minlength=rows)
        spread = 4 * math.sqrt(total * (1 / rows) * (1 - 1 / rows))
        for count in by_row:
            self.assertTrue(abs(count - total / rows) <= spread)
        by_fingerprint = np.bincount(
            [family.fingerprint_of(d) for d in digests], minlength=8)
        self.assertEqual(by_fingerprint[0], 0)
        for count in by_fingerprint[1:]:
            self.assertTrue(abs(count / total - 1 / 7) <= 0.005)


class TestRandomFilter(unittest.TestCase):
    """Test the coin-flip filter."""

    def test_contract(self):
        """Test the abstract contract cannot be instantiated."""
        self.assertRaises(TypeError, DuplicateFilter)

    def test_detect_is_pure(self):
        """Test detect answers the same until something is inserted."""
        coin = RandomFilter(0.5, seed=3)
        answers = set(coin.detect(b'x') for _ in range(10))
        self.assertEqual(len(answers), 1)
        self.assertEqual(coin.snapshot(), RandomFilter(0.5, 3).snapshot())

    def test_probability(self):
        """Test the duplicate frequency matches the probability."""
        coin = RandomFilter(0.3, seed=11)
        verdicts = coin.stream_many(as_element(v) for v in range(20000))
        rate = verdicts.count(Verdict.DUPLICATE) / len(verdicts)
        self.assertAlmostEqual(rate, 0.3, delta=4 * (0.21 / 20000) ** 0.5)

    def test_extremes(self):
        """Test probabilities 0 and 1."""
        never = RandomFilter(0.0)
        always = RandomFilter(1.0)
        for value in range(100):
            element = as_element(value)
            self.assertIs(never.stream(element), Verdict.UNSEEN)
            self.assertIs(always.stream(element), Verdict.DUPLICATE)
        self.assertRaises(ConfigurationError, RandomFilter, 1.5)
