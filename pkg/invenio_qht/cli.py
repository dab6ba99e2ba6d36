# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Command line interface: ``qht bench|analyze|attack|reproduce``."""

import argparse
import json
import logging
import sys
from fractions import Fraction

from . import analysis
from .adversary import AttackConfig, estimate_memory, false_negative_attack
from .bench import (FILTER_KINDS, TABLES, FilterSpec, emit_csv, reproduce,
                    run_benchmark)
from .config import (QHT_ATTACK_TRIALS, QHT_BENCH_RUNS,
                     QHT_ESTIMATE_MAX_FLOOD, QHT_ESTIMATE_TRIALS,
                     QHT_SBF_TARGET_FPR)
from .errors import ConfigurationError, QhtError, StreamFormatError
from .streamgen import StreamSpec

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIGURATION = 2
EXIT_IO = 3

_ANALYZE_PARAMETERS = (
    ('N', int), ('k', int), ('S', int), ('U', int), ('m', int), ('n', int),
    ('i', int), ('r', int), ('rprime', int), ('memory_bits', int),
    ('target_fpr', Fraction), ('K', int), ('P', int), ('max', int),
    ('m_rows', int),
)


def _add_filter_arguments(parser):
    parser.add_argument(
        '--filter', choices=FILTER_KINDS, default='qht',
        help='Filter under test.'
    )
    parser.add_argument(
        '--memory-bits', type=int, default=65536,
        help='Memory budget of the filter in bits.'
    )
    parser.add_argument(
        '--k', type=int, default=1,
        help='Buckets per row (entries per bucket for cuckoo).'
    )
    parser.add_argument(
        '--sigma', type=int, default=3,
        help='Fingerprint bits.'
    )
    parser.add_argument(
        '--r', type=int, default=2, dest='remainder_bits',
        help='SQF remainder bits.'
    )
    parser.add_argument(
        '--rprime', type=int, default=1, dest='kept_bits',
        help='SQF remainder bits kept verbatim in the fingerprint.'
    )
    parser.add_argument(
        '--semisort', action='store_true',
        help='Store QHT rows as semi-sorted ranks.'
    )
    parser.add_argument(
        '--empty-policy', choices=('zero', 'remap', 'rehash'), default=None,
        help='Treatment of zero fingerprints in the QHT family.'
    )
    parser.add_argument(
        '--sbf-target-fpr', type=float, default=QHT_SBF_TARGET_FPR,
        help='Stable point FPR the SBF decrement count is calibrated to.'
    )
    parser.add_argument(
        '--secret-key', default=None,
        help='Pass elements through a keyed permutation first.'
    )


def _add_stream_arguments(parser):
    parser.add_argument(
        '--stream', default='uniform',
        help='"uniform", "locality" or "file:PATH".'
    )
    parser.add_argument(
        '--alphabet-bits', type=int, default=20,
        help='log2 of the alphabet size of uniform streams.'
    )
    parser.add_argument(
        '--length', type=int, default=10 ** 5,
        help='Number of generated elements.'
    )


def _filter_spec(args):
    return FilterSpec(
        args.filter, args.memory_bits, k=args.k, sigma=args.sigma,
        remainder_bits=args.remainder_bits, kept_bits=args.kept_bits,
        layout='semisorted' if args.semisort else 'plain',
        empty_policy=args.empty_policy, sbf_target_fpr=args.sbf_target_fpr,
        secret_key=args.secret_key.encode('utf-8')
        if args.secret_key else None)


def _summary(report):
    return ('{0} {1} bits on {2}: '
            'fpr={3:.4f} fnr={4:.4f} error={5:.2f}').format(
        report.variant, report.memory_bits, report.stream, report.fpr,
        report.fnr, report.error_x100)


def command_bench(args):
    """Run one benchmark configuration and write its CSV row."""
    spec = _filter_spec(args)
    stream = StreamSpec.parse(args.stream, args.alphabet_bits, args.length)
    report = run_benchmark(spec, stream, args.runs, args.seed, args.workers)
    emit_csv([report], args.out)
    print(_summary(report))
    return EXIT_OK


def command_analyze(args):
    """Evaluate one formula."""
    params = dict((name, getattr(args, name))
                  for name, _ in _ANALYZE_PARAMETERS
                  if getattr(args, name) is not None)
    result = analysis.evaluate(args.op, **params)
    if args.json:
        payload = dict(params, op=args.op, result=result)
        if 'target_fpr' in payload:
            payload['target_fpr'] = str(payload['target_fpr'])
        print(json.dumps(payload, sort_keys=True))
    else:
        print('{0} = {1}'.format(args.op, result))
    return EXIT_OK


def _capacity(spec, built):
    params = getattr(built, 'params', None)
    if spec.family in ('qht', 'sqf'):
        return params.rows * params.buckets
    if spec.kind == 'cuckoo':
        return params.buckets * params.entries
    return max(1, spec.memory_bits // spec.sigma)


def command_attack(args):
    """Flood a filter, or estimate its capacity from outside."""
    spec = _filter_spec(args)
    built = spec.build(args.seed)
    if args.mode == 'estimate':
        estimate = estimate_memory(built.stream, args.trials,
                                   args.max_flood, args.seed)
        payload = {'mode': 'estimate', 'filter': spec.kind,
                   'memory_bits': spec.memory_bits, 'estimate': estimate,
                   'capacity': _capacity(spec, built)}
    else:
        memory = args.memory or _capacity(spec, built)
        config = AttackConfig(memory, args.h, args.trials, args.seed)
        success = false_negative_attack(spec.build, config)
        payload = {'mode': 'fn', 'filter': spec.kind, 'memory': memory,
                   'h': str(args.h), 'flood': config.flood_length,
                   'trials': args.trials, 'success': success}
    print(json.dumps(payload, sort_keys=True))
    return EXIT_OK


def command_reproduce(args):
    """Regenerate one of the error-rate tables as CSV."""
    kwargs = {'seed': args.seed}
    if args.table != 'timing':
        kwargs['workers'] = args.workers
        kwargs['runs'] = args.runs
    if args.stream is not None:
        stream = StreamSpec.parse(args.stream, args.alphabet_bits,
                                  args.length)
        if args.table == 'saturation':
            kwargs['streams'] = [stream]
        else:
            kwargs['stream'] = stream
    reports = reproduce(args.table, **kwargs)
    emit_csv(reports, args.out)
    for report in sorted(reports, key=lambda report: report.sort_key()):
        print(_summary(report))
    return EXIT_OK


def build_parser():
    """Create the argument parser of the ``qht`` command."""
    parser = argparse.ArgumentParser(
        prog='qht',
        description='Duplicate detection filters and their error analysis.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    parser.add_argument(
        '-v', '--verbose', action='count', default=0,
        help='Log progress; repeat for debug output.'
    )
    commands = parser.add_subparsers(dest='command')
    commands.required = True

    bench = commands.add_parser(
        'bench', help='Measure FPR and FNR of one filter.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    _add_filter_arguments(bench)
    _add_stream_arguments(bench)
    bench.add_argument('--runs', type=int, default=QHT_BENCH_RUNS,
                       help='Independent runs to average.')
    bench.add_argument('--seed', type=int, default=0,
                       help='Seed of the first run.')
    bench.add_argument('--workers', type=int, default=1,
                       help='Processes running independent runs.')
    bench.add_argument('--out', required=True, help='CSV output path.')
    bench.set_defaults(handler=command_bench)

    analyze = commands.add_parser(
        'analyze', help='Evaluate an error-rate formula.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    analyze.add_argument('--op', required=True,
                         choices=sorted(analysis.OPERATIONS))
    for name, kind in _ANALYZE_PARAMETERS:
        analyze.add_argument('--' + name.replace('_', '-'), dest=name,
                             type=kind, default=None)
    analyze.add_argument('--json', action='store_true',
                         help='Print inputs and result as JSON.')
    analyze.set_defaults(handler=command_analyze)

    attack = commands.add_parser(
        'attack', help='Run a flooding attack on a filter.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    _add_filter_arguments(attack)
    attack.add_argument('--mode', choices=('fn', 'estimate'), default='fn')
    attack.add_argument('--h', type=Fraction, default=Fraction(1),
                        help='Flood length as a multiple of the memory.')
    attack.add_argument('--memory', type=int, default=None,
                        help='Element capacity; defaults to the cell count.')
    attack.add_argument('--trials', type=int, default=None,
                        help='Trials per attack or per estimation step.')
    attack.add_argument('--max-flood', type=int,
                        default=QHT_ESTIMATE_MAX_FLOOD)
    attack.add_argument('--seed', type=int, default=0)
    attack.set_defaults(handler=command_attack)

    reproduce_parser = commands.add_parser(
        'reproduce', help='Regenerate a published error-rate table.',
        formatter_class=argparse.ArgumentDefaultsHelpFormatter
    )
    reproduce_parser.add_argument('--table', choices=TABLES, required=True)
    reproduce_parser.add_argument('--out', required=True)
    reproduce_parser.add_argument('--runs', type=int, default=QHT_BENCH_RUNS)
    reproduce_parser.add_argument('--seed', type=int, default=0)
    reproduce_parser.add_argument('--workers', type=int, default=1)
    reproduce_parser.add_argument(
        '--stream', default=None,
        help='Replace the default workload, e.g. "file:corpus.txt".'
    )
    reproduce_parser.add_argument('--alphabet-bits', type=int, default=20)
    reproduce_parser.add_argument('--length', type=int, default=10 ** 5)
    reproduce_parser.set_defaults(handler=command_reproduce)
    return parser


def _configure_logging(verbosity):
    level = logging.WARNING
    if verbosity == 1:
        level = logging.INFO
    elif verbosity > 1:
        level = logging.DEBUG
    logging.basicConfig(
        level=level, format='%(asctime)s %(levelname)s %(name)s: %(message)s')


def main(argv=None):
    """Entry point of the ``qht`` console script; returns the exit code."""
    args = build_parser().parse_args(argv)
    _configure_logging(args.verbose)
    if getattr(args, 'trials', 0) is None:
        args.trials = QHT_ESTIMATE_TRIALS if args.mode == 'estimate' \
            else QHT_ATTACK_TRIALS
    try:
        return args.handler(args)
    except (OSError, StreamFormatError) as error:
        print('ERROR: {0}'.format(error), file=sys.stderr)
        return EXIT_IO
    except (ConfigurationError, ValueError) as error:
        print('ERROR: {0}'.format(error), file=sys.stderr)
        return EXIT_CONFIGURATION
    except QhtError as error:
        print('ERROR: {0}'.format(error), file=sys.stderr)
        return EXIT_FAILURE


if __name__ == '__main__':
    sys.exit(main())
