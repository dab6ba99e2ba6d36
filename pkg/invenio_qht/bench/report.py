# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Error reports and their CSV representation."""

import csv
import logging
import math
from dataclasses import dataclass, field, replace

logger = logging.getLogger(__name__)

CSV_HEADER = ('filter', 'variant', 'memory_bits', 'k', 'sigma',
              'extra_params', 'stream', 'duplicate_pct', 'runs', 'fpr',
              'fnr', 'error_x100', 'ns_per_op', 'seed')

_INTEGER_COLUMNS = ('memory_bits', 'k', 'sigma', 'runs', 'seed')
_FLOAT_COLUMNS = ('duplicate_pct', 'fpr', 'fnr', 'error_x100')


def classify(truth_duplicate, verdict_duplicate):
    """Name the outcome of one arrival: ``tp``, ``tn``, ``fp`` or ``fn``."""
    if truth_duplicate:
        return 'tp' if verdict_duplicate else 'fn'
    return 'fp' if verdict_duplicate else 'tn'


@dataclass(frozen=True)
class ErrorReport(object):
    """Outcome counts and rates of one or more benchmark runs.

    ``fpr`` is measured over ground-truth unseen arrivals and ``fnr`` over
    ground-truth duplicates; a class absent from the stream has rate 0.
    Averaged reports carry the mean of the per-run rates in ``mean_fpr``
    and ``mean_fnr``; their counts are mean counts.
    """

    filter: str
    variant: str
    memory_bits: int
    k: int
    sigma: int
    extra_params: str
    stream: str
    seed: int
    length: float = 0
    unseen: float = 0
    duplicates: float = 0
    false_positives: float = 0
    false_negatives: float = 0
    runs: int = 1
    ns_per_op: float = None
    mean_fpr: float = None
    mean_fnr: float = None
    state_digest: str = field(default=None, compare=False)

    @property
    def fpr(self):
        if self.mean_fpr is not None:
            return self.mean_fpr
        return self.false_positives / self.unseen if self.unseen else 0.0

    @property
    def fnr(self):
        if self.mean_fnr is not None:
            return self.mean_fnr
        if not self.duplicates:
            return 0.0
        return self.false_negatives / self.duplicates

    @property
    def error_x100(self):
        return 100.0 * (self.fpr + self.fnr)

    @property
    def duplicate_pct(self):
        return 100.0 * self.duplicates / self.length if self.length else 0.0

    def sort_key(self):
        return (self.filter, self.variant, self.memory_bits, self.k,
                self.sigma, self.extra_params, self.stream, self.seed)

    def as_row(self):
        """Typed values of the CSV columns."""
        return {
            'filter': self.filter,
            'variant': self.variant,
            'memory_bits': self.memory_bits,
            'k': self.k,
            'sigma': self.sigma,
            'extra_params': self.extra_params,
            'stream': self.stream,
            'duplicate_pct': self.duplicate_pct,
            'runs': self.runs,
            'fpr': self.fpr,
            'fnr': self.fnr,
            'error_x100': self.error_x100,
            'ns_per_op': self.ns_per_op,
            'seed': self.seed,
        }

    @classmethod
    def average(cls, reports):
        """Mean of several runs of the same configuration.

        Rates are the arithmetic mean of the per-run rates, weighting
        already averaged reports by their run count. Counts are averaged
        too and only feed the metadata columns.
        """
        reports = list(reports)
        if not reports:
            raise ValueError('Nothing to average')
        count = len(reports)
        timings = [report.ns_per_op for report in reports
                   if report.ns_per_op is not None]

        def mean(name):
            return math.fsum(getattr(report, name)
                             for report in reports) / count

        runs = sum(report.runs for report in reports)

        def mean_rate(name):
            return math.fsum(getattr(report, name) * report.runs
                             for report in reports) / runs

        return replace(
            reports[0],
            length=mean('length'),
            unseen=mean('unseen'),
            duplicates=mean('duplicates'),
            false_positives=mean('false_positives'),
            false_negatives=mean('false_negatives'),
            runs=runs,
            mean_fpr=mean_rate('fpr'),
            mean_fnr=mean_rate('fnr'),
            ns_per_op=math.fsum(timings) / len(timings) if timings else None,
            state_digest=None)


def _format(value):
    if value is None:
        return ''
    if isinstance(value, float):
        return repr(value)
    return str(value)


def emit_csv(reports, path):
    """Write ``reports`` sorted by configuration to ``path``."""
    reports = sorted(reports, key=ErrorReport.sort_key)
    with open(path, 'w', newline='') as stream:
        writer = csv.writer(stream, lineterminator='\n')
        writer.writerow(CSV_HEADER)
        for report in reports:
            row = report.as_row()
            writer.writerow([_format(row[column]) for column in CSV_HEADER])
    logger.info('Wrote %d rows to %s', len(reports), path)
    return len(reports)


def read_csv(path):
    """Parse a file written by :func:`emit_csv` into typed rows."""
    with open(path, newline='') as stream:
        reader = csv.DictReader(stream)
        if tuple(reader.fieldnames or ()) != CSV_HEADER:
            raise ValueError('{0} is not a benchmark CSV'.format(path))
        rows = []
        for raw in reader:
            row = dict(raw)
            for column in _INTEGER_COLUMNS:
                row[column] = int(row[column])
            for column in _FLOAT_COLUMNS:
                row[column] = float(row[column])
            row['ns_per_op'] = float(row['ns_per_op']) \
                if row['ns_per_op'] else None
            rows.append(row)
    return rows
