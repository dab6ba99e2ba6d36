# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Test the Stable Bloom Filter and Cuckoo filter baselines."""

import unittest

from hypothesis import given
from hypothesis import strategies as st

from invenio_qht.analysis import sbf_fpr_bound
from invenio_qht.core import Verdict, as_element
from invenio_qht.errors import ConfigurationError, SnapshotError
from invenio_qht.filters import (CuckooFilter, CuckooParams, SbfParams,
                                 StableBloomFilter, from_snapshot)
from invenio_qht.table import encode_snapshot, pack_cells

from .settings import STANDARD_SETTINGS


class TestStableBloomFilter(unittest.TestCase):
    """Test the decaying Bloom filter."""

    def test_calibration(self):
        """Test the decrement count follows the target rate."""
        params = SbfParams.from_memory(200000)
        self.assertEqual(params.rows, 100000)
        self.assertEqual(params.max_value, 3)
        self.assertEqual(params.decrements, 7)
        self.assertEqual(
            SbfParams.from_memory(200000, target_fpr=0.02).decrements, 38)
        self.assertRaises(ConfigurationError, SbfParams.from_memory, 4)
        self.assertRaises(ConfigurationError, SbfParams, 2)
        self.assertRaises(ConfigurationError, SbfParams, 100, 9)

    def test_stream(self):
        """Test an element is unseen and then a duplicate."""
        sbf = StableBloomFilter(SbfParams(1000, 2, 2, 7), seed=1)
        self.assertIs(sbf.detect(b'a'), Verdict.UNSEEN)
        self.assertIs(sbf.stream(b'a'), Verdict.UNSEEN)
        self.assertIs(sbf.stream(b'a'), Verdict.DUPLICATE)
        self.assertEqual(sbf.memory_bits, 2000)

    def test_stable_point(self):
        """Test the measured false positive rate reaches the stable point."""
        params = SbfParams(10000, 2, 2, 7)
        sbf = StableBloomFilter(params, seed=2)
        for value in range(60000):
            sbf.stream(as_element(value))
        verdicts = sbf.stream_many(as_element(value)
                                   for value in range(60000, 100000))
        rate = verdicts.count(Verdict.DUPLICATE) / len(verdicts)
        self.assertAlmostEqual(rate, sbf_fpr_bound(2, 7, 3, 10000),
                               delta=0.03)

    def test_snapshot(self):
        """Test a restored filter continues like the original."""
        sbf = StableBloomFilter(SbfParams(4096, 2, 3, 5), seed=3)
        sbf.stream_many(as_element(value) for value in range(3000))
        restored = from_snapshot(sbf.snapshot())
        self.assertIsInstance(restored, StableBloomFilter)
        self.assertEqual(restored.params, sbf.params)
        self.assertEqual(restored.draws, sbf.draws)
        self.assertEqual(restored.snapshot(), sbf.snapshot())
        stream = [as_element(value) for value in range(2000, 8000)]
        self.assertEqual(restored.stream_many(stream),
                         sbf.stream_many(stream))
        self.assertEqual(restored.snapshot(), sbf.snapshot())

    def test_snapshot_between_batches(self):
        """Test resuming exactly where a batch of decay draws ended."""
        sbf = StableBloomFilter(SbfParams(512, 2, 2, 1), seed=4)
        sbf.stream_many(as_element(value) for value in range(4096))
        restored = from_snapshot(sbf.snapshot())
        stream = [as_element(value) for value in range(3000, 6000)]
        self.assertEqual(restored.stream_many(stream),
                         sbf.stream_many(stream))

    def test_snapshot_invalid(self):
        """Test a draw count that no insertion sequence produces."""
        data = encode_snapshot('sbf', (64, 2, 2, 3, 0, 7),
                               pack_cells([0] * 64, 2))
        self.assertRaises(SnapshotError, StableBloomFilter.from_snapshot,
                          data)

    def test_keyed_snapshot(self):
        """Test a keyed filter resumes when given its key back."""
        sbf = StableBloomFilter(SbfParams(2048, 2, 3, 4), seed=5,
                                hash_key=b'sbf secret')
        sbf.stream_many(as_element(value) for value in range(1000))
        restored = from_snapshot(sbf.snapshot(), hash_key=b'sbf secret')
        stream = [as_element(value) for value in range(500, 2500)]
        self.assertEqual(restored.stream_many(stream),
                         sbf.stream_many(stream))

    def test_cells_within_range(self):
        """Test counters stay between zero and their maximum."""
        params = SbfParams(1000, 3, 3, 4)
        sbf = StableBloomFilter(params, seed=6)
        for value in range(5000):
            sbf.stream(as_element(value % 1700))
            if value % 500 == 0:
                cells = list(sbf._cells)
                self.assertTrue(0 <= min(cells))
                self.assertTrue(max(cells) <= params.max_value)
        self.assertEqual(max(sbf._cells), params.max_value)

    def test_stream_is_detect_then_insert(self):
        """Test stream answers detect and leaves the state of insert."""
        params = SbfParams(512, 2, 3, 2)
        streamed = StableBloomFilter(params, seed=7)
        stepped = StableBloomFilter(params, seed=7)
        for value in range(3000):
            element = as_element(value * 7 % 1100)
            verdict = stepped.detect(element)
            stepped.insert(element)
            self.assertEqual(streamed.stream(element), verdict)
        self.assertEqual(streamed.snapshot(), stepped.snapshot())


class TestCuckooFilter(unittest.TestCase):
    """Test the Cuckoo filter."""

    def test_params(self):
        """Test power-of-two bucket counts."""
        params = CuckooParams.from_memory(65536)
        self.assertEqual(params.buckets, 16384)
        self.assertEqual(params.memory_bits, 16384 * 3)
        self.assertEqual(CuckooParams.from_memory(65536, 4, 8).buckets, 2048)
        self.assertRaises(ConfigurationError, CuckooParams, 12)
        self.assertRaises(ConfigurationError, CuckooParams, 16, 0)
        self.assertRaises(ConfigurationError, CuckooParams.from_memory, 2)

    def test_stream(self):
        """Test an element is unseen and then a duplicate."""
        cuckoo = CuckooFilter(CuckooParams(64, 2, 8), seed=1)
        self.assertIs(cuckoo.stream(b'a'), Verdict.UNSEEN)
        self.assertIs(cuckoo.stream(b'a'), Verdict.DUPLICATE)
        self.assertEqual(cuckoo.load_factor(), 1 / 128)

    @STANDARD_SETTINGS
    @given(st.integers(0, 2 ** 64 - 1), st.integers(1, 255),
           st.integers(0, 255))
    def test_alternate_is_an_involution(self, seed, fingerprint, bucket):
        """Test the alternate of the alternate bucket is the primary."""
        cuckoo = CuckooFilter(CuckooParams(256, 1, 8), seed=seed)
        other = cuckoo._alternate(bucket, fingerprint)
        self.assertEqual(cuckoo._alternate(other, fingerprint), bucket)

    def test_no_false_negatives_below_capacity(self):
        """Test every stored element stays detectable while none drop."""
        cuckoo = CuckooFilter(CuckooParams(1024, 4, 12), seed=4)
        elements = [as_element(value) for value in range(3000)]
        cuckoo.stream_many(elements)
        self.assertEqual(cuckoo.dropped, 0)
        for element in elements:
            self.assertIs(cuckoo.detect(element), Verdict.DUPLICATE)

    def test_saturation(self):
        """Test a full table drops fingerprints instead of failing."""
        cuckoo = CuckooFilter(CuckooParams(8, 1, 8, max_kicks=4), seed=5)
        cuckoo.stream_many(as_element(value) for value in range(500))
        self.assertEqual(cuckoo.load_factor(), 1.0)
        self.assertTrue(cuckoo.dropped > 0)

    def test_snapshot(self):
        """Test a restored filter continues like the original."""
        stream = [as_element(value * 11 % 3000) for value in range(6000)]
        cuckoo = CuckooFilter(CuckooParams(256, 2, 6, 16), seed=6)
        cuckoo.stream_many(stream[:3000])
        restored = from_snapshot(cuckoo.snapshot())
        self.assertIsInstance(restored, CuckooFilter)
        self.assertEqual(restored.draws, cuckoo.draws)
        self.assertEqual(restored.stream_many(stream[3000:]),
                         cuckoo.stream_many(stream[3000:]))
        self.assertEqual(restored.snapshot(), cuckoo.snapshot())
        self.assertRaises(SnapshotError, CuckooFilter.from_snapshot,
                          StableBloomFilter(SbfParams(64)).snapshot())

    def test_keyed_snapshot(self):
        """Test a keyed filter resumes when given its key back."""
        stream = [as_element(value * 13 % 2000) for value in range(4000)]
        cuckoo = CuckooFilter(CuckooParams(128, 2, 8, 16), seed=7,
                              hash_key=b'cuckoo secret')
        cuckoo.stream_many(stream[:2000])
        restored = from_snapshot(cuckoo.snapshot(),
                                 hash_key=b'cuckoo secret')
        self.assertEqual(restored.stream_many(stream[2000:]),
                         cuckoo.stream_many(stream[2000:]))

    def test_stream_is_detect_then_insert(self):
        """Test stream answers detect and leaves the state of insert."""
        params = CuckooParams(64, 2, 6, 8)
        streamed = CuckooFilter(params, seed=8)
        stepped = CuckooFilter(params, seed=8)
        for value in range(1500):
            element = as_element(value * 7 % 400)
            verdict = stepped.detect(element)
            stepped.insert(element)
            self.assertEqual(streamed.stream(element), verdict)
        self.assertEqual(streamed.snapshot(), stepped.snapshot())
