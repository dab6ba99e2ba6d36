# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Test the Streaming Quotient Filter."""

import unittest
from collections import Counter
from fractions import Fraction

from invenio_qht.core import Verdict, as_element
from invenio_qht.errors import ConfigurationError, SnapshotError
from invenio_qht.filters import (QhtParams, SqfParams,
                                 StreamingQuotientFilter, empty_code,
                                 from_snapshot, reachable_fingerprints,
                                 sqf_fingerprint)


class TestSqfParams(unittest.TestCase):
    """Test the SQF shape."""

    def test_shape(self):
        """Test widths, rows and memory of the usual configuration."""
        params = SqfParams(8, 2, 1, 4)
        self.assertEqual(params.weight_bits, 2)
        self.assertEqual(params.fingerprint_bits, 3)
        self.assertEqual(params.fingerprint_space, 4)
        self.assertEqual(params.rows, 256)
        self.assertEqual(params.memory_bits, 256 * 4 * 3)

    def test_from_memory(self):
        """Test the largest power of two row count fitting the budget."""
        self.assertEqual(SqfParams.from_memory(3072).quotient_bits, 10)
        self.assertEqual(SqfParams.from_memory(3071).quotient_bits, 9)
        self.assertEqual(SqfParams.from_memory(65536, 2, 1, 2)
                         .quotient_bits, 13)
        self.assertRaises(ConfigurationError, SqfParams.from_memory, 2)

    def test_invalid(self):
        """Test impossible shapes."""
        self.assertRaises(ConfigurationError, SqfParams, 4, 2, 3)
        self.assertRaises(ConfigurationError, SqfParams, 4, 2, 2)
        self.assertRaises(ConfigurationError, SqfParams, 4, 1, 1)
        self.assertRaises(ConfigurationError, SqfParams, 4, 0, 0)
        self.assertRaises(ConfigurationError, SqfParams, 40, 2, 1)
        self.assertRaises(ConfigurationError, SqfParams, 4, 2, 1, 0)


class TestFingerprints(unittest.TestCase):
    """Test the popcount compression."""

    def test_example(self):
        """Test the compressed form of a two-bit remainder."""
        self.assertEqual(sqf_fingerprint(SqfParams(8, 2, 1), 0b11), 0b110)
        self.assertEqual(sqf_fingerprint(SqfParams(8, 2, 1), 0b10), 0b001)

    def test_space_by_enumeration(self):
        """Test the number of distinct fingerprints for small remainders."""
        for remainder_bits in range(1, 9):
            for kept_bits in range(remainder_bits):
                params = SqfParams(0, remainder_bits, kept_bits)
                produced = set(sqf_fingerprint(params, remainder)
                               for remainder in range(1 << remainder_bits))
                expected = (1 << kept_bits) * (
                    remainder_bits - kept_bits + 1)
                self.assertEqual(len(produced), expected)
                self.assertEqual(params.fingerprint_space, expected)
                self.assertEqual(produced, reachable_fingerprints(params))

    def test_empty_code(self):
        """Test the empty cell code is never produced."""
        self.assertEqual(empty_code(SqfParams(8, 2, 1)), 2)
        self.assertIsNone(empty_code(SqfParams(8, 1, 0)))

    def test_fingerprints_are_reachable(self):
        """Test stored fingerprints come from the reachable set."""
        params = SqfParams(6, 3, 1, 2)
        sqf = StreamingQuotientFilter(params, seed=3)
        reachable = reachable_fingerprints(params)
        for value in range(1000):
            self.assertIn(sqf.fingerprint(as_element(value)), reachable)

    def test_full_code_space(self):
        """Test zero is re-derived when no code is free for empty cells."""
        sqf = StreamingQuotientFilter(SqfParams(4, 1, 0, 2), seed=3)
        self.assertEqual(sqf.empty, 0)
        for value in range(500):
            self.assertEqual(sqf.fingerprint(as_element(value)), 1)

    def test_non_uniform(self):
        """Test compressed fingerprints follow the popcount distribution."""
        params = SqfParams(4, 3, 1)
        sqf = StreamingQuotientFilter(params, seed=8)
        self.assertIsNotNone(sqf.empty)
        by_remainder = Counter(sqf_fingerprint(params, remainder)
                               for remainder in range(8))
        self.assertEqual(sorted(by_remainder.values()), [1, 1, 1, 1, 2, 2])
        drawn = Counter(sqf.fingerprint(as_element(value))
                        for value in range(10 ** 5))
        self.assertEqual(set(drawn), set(by_remainder))
        self.assertTrue(max(drawn.values()) / min(drawn.values()) > 1.5)


class TestStreamingQuotientFilter(unittest.TestCase):
    """Test streaming through the SQF."""

    def test_stream(self):
        """Test an element is unseen and then a duplicate."""
        sqf = StreamingQuotientFilter(SqfParams(8, 2, 1, 4), seed=1)
        self.assertEqual(sqf.load_factor(), 0.0)
        self.assertIs(sqf.stream(b'a'), Verdict.UNSEEN)
        self.assertIs(sqf.stream(b'a'), Verdict.DUPLICATE)
        self.assertEqual(sqf.memory_bits, 3072)

    def test_saturation(self):
        """Test a row holding every fingerprint answers duplicate."""
        sqf = StreamingQuotientFilter(SqfParams(0, 2, 1, 4), seed=1)
        for value in range(400):
            sqf.stream(as_element(value))
        self.assertEqual(sorted(sqf.row(0)), sorted(
            reachable_fingerprints(sqf.params)))
        self.assertIs(sqf.stream(b'fresh'), Verdict.DUPLICATE)

    def test_memory_ratio(self):
        """Test a QHT with the same rows and alphabet is a third smaller."""
        sqf = SqfParams(8, 2, 1, 4)
        qht = QhtParams.from_rows(sqf.rows, sqf.buckets, 2)
        self.assertEqual(qht.fingerprint_space, sqf.fingerprint_space)
        self.assertEqual(Fraction(qht.memory_bits, sqf.memory_bits),
                         Fraction(2, 3))

    def test_resume(self):
        """Test a restored filter continues like the original."""
        stream = [as_element(value * 13 % 900) for value in range(4000)]
        sqf = StreamingQuotientFilter(SqfParams(6, 2, 1, 2), seed=6)
        sqf.stream_many(stream[:2000])
        restored = from_snapshot(sqf.snapshot())
        self.assertIsInstance(restored, StreamingQuotientFilter)
        self.assertEqual(restored.params, sqf.params)
        self.assertEqual(restored.stream_many(stream[2000:]),
                         sqf.stream_many(stream[2000:]))
        self.assertEqual(restored.snapshot(), sqf.snapshot())

    def test_stream_is_detect_then_insert(self):
        """Test streaming matches a detect followed by an insert."""
        params = SqfParams(5, 2, 1, 2)
        streamed = StreamingQuotientFilter(params, seed=4)
        composed = StreamingQuotientFilter(params, seed=4)
        for value in range(3000):
            element = as_element(value * 7 % 500)
            verdict = composed.detect(element)
            composed.insert(element)
            self.assertIs(streamed.stream(element), verdict)
        self.assertEqual(streamed.snapshot(), composed.snapshot())

    def test_restore_other_variant(self):
        """Test QHT snapshots are refused."""
        from invenio_qht.filters import new_qht
        self.assertRaises(SnapshotError, StreamingQuotientFilter.from_snapshot,
                          new_qht(1024, 3).snapshot())
