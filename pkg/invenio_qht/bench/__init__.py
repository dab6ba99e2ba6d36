# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Benchmark harness measuring filters against exact ground truth."""

from .oracle import GroundTruthOracle
from .report import CSV_HEADER, ErrorReport, classify, emit_csv, read_csv
from .runner import (FILTER_KINDS, FilterSpec, compare_timings,
                     run_benchmark, run_configurations, run_once,
                     run_timing, state_digest)
from .tables import (TABLES, reproduce, reproduce_comparison,
                     reproduce_saturation, reproduce_timing,
                     reproduce_tuning, saturation_filters,
                     saturation_streams)

__all__ = ('CSV_HEADER', 'ErrorReport', 'FILTER_KINDS', 'FilterSpec',
           'GroundTruthOracle', 'TABLES', 'classify', 'compare_timings',
           'emit_csv', 'read_csv', 'reproduce', 'reproduce_comparison',
           'reproduce_saturation', 'reproduce_timing', 'reproduce_tuning',
           'run_benchmark', 'run_configurations', 'run_once', 'run_timing',
           'saturation_filters', 'saturation_streams', 'state_digest')
