# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Desk-scale reproductions of the published error-rate tables."""

import logging
import math
from dataclasses import replace

from ..config import (QHT_BENCH_LENGTH, QHT_BENCH_MEMORIES, QHT_BENCH_RUNS,
                      QHT_TIMING_REPEATS)
from ..errors import ConfigurationError
from ..streamgen import StreamSpec
from .runner import FilterSpec, compare_timings, run_configurations

logger = logging.getLogger(__name__)

TABLES = ('tuning', 'saturation', 'comparison', 'timing')

SATURATION_RATIOS = (
    ('heavy', 150 * 10 ** 6 / 2 ** 24),
    ('light', 150 * 10 ** 6 / 2 ** 27),
)
"""Stream length over alphabet size of the two artificial streams.

Keeping the ratio fixed keeps the duplicate share of the full-size
streams (about 89% and 40%) at any length.
"""


def saturation_streams(length=QHT_BENCH_LENGTH):
    """Uniform streams shaped like the full-size saturation workloads."""
    return [StreamSpec('uniform', alphabet_size=max(1, round(length / ratio)),
                       length=length) for _, ratio in SATURATION_RATIOS]


def saturation_filters(memory_bits):
    """The four filters compared under saturation for one budget."""
    return [
        FilterSpec('sqf', memory_bits, k=1, remainder_bits=2, kept_bits=1),
        FilterSpec('qht', memory_bits, k=1, sigma=3),
        FilterSpec('cuckoo', memory_bits, k=1, sigma=3),
        FilterSpec('sbf', memory_bits),
    ]


def reproduce_tuning(memory_bits=65536, spaces=(4, 8, 16, 32, 64),
                     ratio=4, stream=None, runs=10, seed=0, workers=1):
    """QHT error for ``k = S / ratio`` at growing fingerprint spaces."""
    stream = stream or StreamSpec('uniform', alphabet_size=2 ** 20,
                                  length=10 ** 5)
    configurations = []
    for space in spaces:
        sigma = space.bit_length() - 1
        if space != 1 << sigma or space < ratio:
            raise ConfigurationError(
                'Space {0} is not a power of two above {1}'.format(
                    space, ratio))
        configurations.append(
            (FilterSpec('qht', memory_bits, k=space // ratio, sigma=sigma),
             stream))
    return run_configurations(configurations, runs, seed, workers)


def reproduce_saturation(memories=QHT_BENCH_MEMORIES, streams=None,
                         runs=QHT_BENCH_RUNS, seed=0, workers=1):
    """SQF, QHT, Cuckoo and SBF on saturating streams."""
    streams = streams or saturation_streams()
    configurations = [(spec, stream)
                      for memory_bits in memories
                      for stream in streams
                      for spec in saturation_filters(memory_bits)]
    return run_configurations(configurations, runs, seed, workers)


def reproduce_comparison(memory_bits=65536, shapes=((2, 8), (4, 16),
                                                    (8, 32), (16, 64)),
                         stream=None, runs=QHT_BENCH_RUNS, seed=0,
                         workers=1):
    """QHT against QQHTD for several ``(k, S)`` shapes."""
    stream = stream or StreamSpec('uniform', alphabet_size=2 ** 20,
                                  length=10 ** 5)
    configurations = []
    for k, space in shapes:
        sigma = int(math.log2(space))
        for kind in ('qht', 'qqhtd'):
            configurations.append(
                (FilterSpec(kind, memory_bits, k=k, sigma=sigma), stream))
    return run_configurations(configurations, runs, seed, workers)


def reproduce_timing(memory_bits=10 ** 6, stream=None, seed=0,
                     kinds=('sqf', 'qht', 'qhtd', 'qqhtd', 'cuckoo', 'sbf'),
                     repeats=QHT_TIMING_REPEATS):
    """Per-operation wall time of every filter on one stream.

    Error rates come from one run per filter; timings are the median of
    ``repeats`` interleaved timing passes and always run sequentially.
    """
    stream = stream or StreamSpec('uniform', alphabet_size=2 ** 24,
                                  length=10 ** 6)
    specs = [FilterSpec(kind, memory_bits) for kind in kinds]
    reports = run_configurations([(spec, stream) for spec in specs], 1, seed)
    timings = compare_timings(specs, stream, seed, repeats)
    for spec, timing in zip(specs, timings):
        logger.info('%s: %.1f ns per operation', spec.kind, timing or 0.0)
    return [replace(report, ns_per_op=timing)
            for report, timing in zip(reports, timings)]


def reproduce(table, **kwargs):
    """Dispatch to ``reproduce_<table>``."""
    if table not in TABLES:
        raise ConfigurationError('Unknown table {0!r}'.format(table))
    return _REPRODUCERS[table](**kwargs)


_REPRODUCERS = {
    'tuning': reproduce_tuning,
    'saturation': reproduce_saturation,
    'comparison': reproduce_comparison,
    'timing': reproduce_timing,
}
