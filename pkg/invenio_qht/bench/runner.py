# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Benchmark execution: build filters, stream, count and time."""

import gc
import hashlib
import logging
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from itertools import islice

import numpy as np

from ..adversary import keyed_wrapper
from ..config import (QHT_BENCH_CUCKOO_KICKS, QHT_SBF_CELL_BITS,
                      QHT_SBF_HASHES, QHT_SBF_TARGET_FPR, QHT_TIMING_BATCH,
                      QHT_TIMING_REPEATS, QHT_TIMING_WARMUP)
from ..core import Verdict
from ..errors import ConfigurationError
from ..filters import (CuckooFilter, CuckooParams, QhtParams,
                       QuotientHashTable, SbfParams, SqfParams,
                       StableBloomFilter, StreamingQuotientFilter)
from .oracle import GroundTruthOracle
from .report import ErrorReport

logger = logging.getLogger(__name__)

FILTER_KINDS = ('qht', 'qhtd', 'qqhtd', 'sqf', 'sbf', 'cuckoo')

DUPLICATE = Verdict.DUPLICATE


@dataclass(frozen=True)
class FilterSpec(object):
    """Picklable recipe for a filter under a memory budget.

    ``k`` and ``sigma`` mean buckets per row and fingerprint bits for the
    QHT family, entries per bucket and fingerprint bits for Cuckoo, and
    buckets per row for SQF. SBF uses ``sbf_cell_bits`` and
    ``sbf_hashes`` instead.
    """

    kind: str
    memory_bits: int
    k: int = 1
    sigma: int = 3
    remainder_bits: int = 2
    kept_bits: int = 1
    layout: str = 'plain'
    empty_policy: str = None
    sbf_cell_bits: int = QHT_SBF_CELL_BITS
    sbf_hashes: int = QHT_SBF_HASHES
    sbf_target_fpr: float = QHT_SBF_TARGET_FPR
    cuckoo_max_kicks: int = QHT_BENCH_CUCKOO_KICKS
    secret_key: bytes = None

    def __post_init__(self):
        if self.kind not in FILTER_KINDS:
            raise ConfigurationError('Unknown filter {0!r}'.format(
                self.kind))
        if self.memory_bits < 1:
            raise ConfigurationError('memory_bits must be positive')

    @property
    def family(self):
        return 'qht' if self.kind in ('qht', 'qhtd', 'qqhtd') else self.kind

    def build(self, seed=0):
        """Instantiate the filter; raises on inconsistent parameters."""
        kind = self.kind
        if kind in ('qht', 'qhtd', 'qqhtd'):
            built = QuotientHashTable(
                QhtParams(self.memory_bits, self.sigma, self.k), seed=seed,
                variant=kind, empty_policy=self.empty_policy,
                layout=self.layout)
        elif kind == 'sqf':
            built = StreamingQuotientFilter(
                SqfParams.from_memory(self.memory_bits, self.remainder_bits,
                                      self.kept_bits, self.k), seed=seed)
        elif kind == 'sbf':
            built = StableBloomFilter(
                SbfParams.from_memory(self.memory_bits, self.sbf_cell_bits,
                                      self.sbf_hashes, self.sbf_target_fpr),
                seed=seed)
        else:
            built = CuckooFilter(
                CuckooParams.from_memory(self.memory_bits, self.k,
                                         self.sigma, self.cuckoo_max_kicks),
                seed=seed)
        if self.secret_key is not None:
            built = keyed_wrapper(built, self.secret_key)
        return built

    def validate(self):
        """Check the recipe by building a throwaway instance."""
        self.build(0)

    def describe(self):
        """Return ``(k, sigma, extra_params)`` as reported in CSV rows."""
        kind = self.kind
        if kind in ('qht', 'qhtd', 'qqhtd'):
            extra = 'layout={0};policy={1}'.format(
                self.layout, self.empty_policy or 'default')
            return self.k, self.sigma, extra
        if kind == 'sqf':
            params = SqfParams.from_memory(self.memory_bits,
                                           self.remainder_bits,
                                           self.kept_bits, self.k)
            extra = 'q={0};r={1};rprime={2}'.format(
                params.quotient_bits, params.remainder_bits, params.kept_bits)
            return self.k, params.fingerprint_bits, extra
        if kind == 'sbf':
            params = SbfParams.from_memory(self.memory_bits,
                                           self.sbf_cell_bits,
                                           self.sbf_hashes,
                                           self.sbf_target_fpr)
            extra = 'K={0};P={1};max={2}'.format(
                params.hashes, params.decrements, params.max_value)
            return params.hashes, params.cell_bits, extra
        params = CuckooParams.from_memory(self.memory_bits, self.k,
                                          self.sigma, self.cuckoo_max_kicks)
        extra = 'buckets={0};kicks={1}'.format(params.buckets,
                                               params.max_kicks)
        return params.entries, params.fingerprint_bits, extra


def state_digest(built):
    """Hex digest of a filter snapshot."""
    return hashlib.blake2b(built.snapshot(), digest_size=16).hexdigest()


def run_once(filter_spec, stream_spec, seed, batch=QHT_TIMING_BATCH):
    """Stream one run and count outcomes against the exact oracle.

    The filter and the stream both use ``seed``. Filter calls are timed
    in batches so oracle bookkeeping stays out of ``ns_per_op``.
    """
    built = filter_spec.build(seed)
    oracle = GroundTruthOracle()
    stream = built.stream
    elements = iter(stream_spec.elements(seed))
    counts = {'length': 0, 'unseen': 0, 'duplicates': 0,
              'false_positives': 0, 'false_negatives': 0}
    elapsed = 0
    while True:
        chunk = list(islice(elements, batch))
        if not chunk:
            break
        start = time.perf_counter_ns()
        verdicts = [stream(element) for element in chunk]
        elapsed += time.perf_counter_ns() - start
        for element, verdict in zip(chunk, verdicts):
            if oracle.classify(element):
                counts['duplicates'] += 1
                if verdict is not DUPLICATE:
                    counts['false_negatives'] += 1
            else:
                counts['unseen'] += 1
                if verdict is DUPLICATE:
                    counts['false_positives'] += 1
        counts['length'] += len(chunk)
    k, sigma, extra = filter_spec.describe()
    report = ErrorReport(
        filter=filter_spec.family, variant=filter_spec.kind,
        memory_bits=filter_spec.memory_bits, k=k, sigma=sigma,
        extra_params=extra, stream=stream_spec.label, seed=seed,
        ns_per_op=elapsed / counts['length'] if counts['length'] else None,
        state_digest=state_digest(built), **counts)
    logger.debug('%s on %s with seed %d: fpr=%.4f fnr=%.4f',
                 filter_spec.kind, stream_spec.label, seed, report.fpr,
                 report.fnr)
    return report


def _run_indexed(arguments):
    filter_spec, stream_spec, seed = arguments
    return run_once(filter_spec, stream_spec, seed)


def run_configurations(configurations, runs=1, seed=0, workers=1):
    """Average ``runs`` runs of each ``(filter_spec, stream_spec)`` pair.

    Run ``i`` of every configuration uses seed ``seed + i``. With several
    ``workers`` all runs of all configurations share one process pool.

    :return: averaged :class:`invenio_qht.bench.report.ErrorReport`
        objects in the order of ``configurations``.
    """
    if runs < 1:
        raise ConfigurationError('At least one run is needed')
    configurations = list(configurations)
    for filter_spec, _ in configurations:
        filter_spec.validate()
    jobs = [(filter_spec, stream_spec, seed + index)
            for filter_spec, stream_spec in configurations
            for index in range(runs)]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(_run_indexed, jobs))
    else:
        results = [_run_indexed(job) for job in jobs]
    reports = []
    for position, (filter_spec, stream_spec) in enumerate(configurations):
        report = ErrorReport.average(
            results[position * runs:(position + 1) * runs])
        logger.info('%s %d bits on %s: fpr=%.4f fnr=%.4f over %d runs',
                    filter_spec.kind, filter_spec.memory_bits,
                    stream_spec.label, report.fpr, report.fnr, runs)
        reports.append(report)
    return reports


def run_benchmark(filter_spec, stream_spec, runs=1, seed=0, workers=1):
    """Average ``runs`` independent runs using seeds ``seed + i``.

    :param workers: processes used to run independent runs concurrently.
    :return: an averaged :class:`invenio_qht.bench.report.ErrorReport`.
    """
    return run_configurations([(filter_spec, stream_spec)], runs, seed,
                              workers)[0]


def _time_calls(built, elements, batch, warmup):
    skip = int(len(elements) * warmup)
    stream = built.stream
    for element in elements[:skip]:
        stream(element)
    timed = elements[skip:]
    if not timed:
        return None
    collecting = gc.isenabled()
    gc.disable()
    try:
        elapsed = 0
        for offset in range(0, len(timed), batch):
            chunk = timed[offset:offset + batch]
            start = time.perf_counter_ns()
            for element in chunk:
                stream(element)
            elapsed += time.perf_counter_ns() - start
    finally:
        if collecting:
            gc.enable()
    return elapsed / len(timed)


def compare_timings(filter_specs, stream_spec, seed=0,
                    repeats=QHT_TIMING_REPEATS, batch=QHT_TIMING_BATCH,
                    warmup=QHT_TIMING_WARMUP):
    """Median nanoseconds per ``stream`` call of several filters.

    The stream is materialised once. Each repeat times a fresh instance
    of every filter in turn, with the garbage collector paused, so slow
    phases of the machine hit all filters alike. The leading ``warmup``
    fraction of calls is not timed. Entries are ``None`` for an empty
    stream.
    """
    if batch < 1 or repeats < 1 or not 0.0 <= warmup < 1.0:
        raise ConfigurationError(
            'Need batch >= 1, repeats >= 1 and warmup in [0, 1)')
    filter_specs = list(filter_specs)
    elements = list(stream_spec.elements(seed))
    samples = [[] for _ in filter_specs]
    for _ in range(repeats):
        for spec, timings in zip(filter_specs, samples):
            timings.append(_time_calls(spec.build(seed), elements, batch,
                                       warmup))
    medians = []
    for spec, timings in zip(filter_specs, samples):
        if timings[0] is None:
            medians.append(None)
            continue
        medians.append(float(np.median(timings)))
        logger.debug('%s: %s ns per call', spec.kind,
                     ', '.join('{0:.1f}'.format(value) for value in timings))
    return medians


def run_timing(filter_spec, stream_spec, seed=0, batch=QHT_TIMING_BATCH,
               warmup=QHT_TIMING_WARMUP, repeats=1):
    """Mean wall-clock nanoseconds per ``stream`` call of one filter.

    With several ``repeats`` the median of the repeated means is
    returned. Returns ``None`` for an empty stream.
    """
    return compare_timings([filter_spec], stream_spec, seed, repeats, batch,
                           warmup)[0]
