# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Closed-form error model of QHT and companion formulas.

All rates are for one row-organised table of ``N`` rows, ``k`` buckets per
row and ``S`` distinct fingerprints, fed with elements drawn uniformly
from an alphabet of ``U`` values (``U=None`` stands for an unbounded
alphabet). Powers ``(1 - x) ** m`` are evaluated as ``exp(m * log1p(-x))``
to stay accurate for very large ``m``.
"""

import logging
import math
from collections import namedtuple
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import stats

from .core import EmptyCellPolicy
from .errors import ConfigurationError

logger = logging.getLogger(__name__)

SINGULAR_TOLERANCE = 1e-9

Tuning = namedtuple('Tuning', ['k', 'space', 'sigma', 'rows'])


def _power(base_complement, exponent):
    """``(1 - base_complement) ** exponent`` with ``0 ** 0 == 1``."""
    if exponent == 0:
        return 1.0
    if base_complement >= 1.0:
        return 0.0
    return math.exp(exponent * math.log1p(-base_complement))


def _ceil_log2(value):
    return (value - 1).bit_length()


@dataclass(frozen=True)
class RateInputs(object):
    """Table shape and alphabet size entering every formula.

    :param rows: ``N``, number of rows.
    :param buckets: ``k``, cells per row.
    :param space: ``S``, distinct fingerprints a cell can hold.
    :param universe: ``U``, alphabet size or ``None`` when unbounded.
    """

    rows: int
    buckets: int
    space: int
    universe: int = None

    def __post_init__(self):
        if self.rows < 1:
            raise ConfigurationError('N must be positive')
        if self.space < 2:
            raise ConfigurationError('S must be at least 2')
        if not 1 <= self.buckets <= self.space:
            raise ConfigurationError('k must lie in [1, S]')
        if self.universe is not None and self.universe < 1:
            raise ConfigurationError('U must be positive')

    @property
    def p_false_duplicate(self):
        """Probability that a fresh fingerprint matches a full row."""
        return self.buckets / self.space

    @property
    def p_same_row_evict(self):
        """Probability that an arrival lands in the row and evicts."""
        return (self.space - self.buckets) / (
            self.buckets * (self.rows * self.space - 1))

    @property
    def p_not_evict(self):
        """Probability that an arrival leaves a given cell untouched."""
        return 1.0 - 1.0 / (self.rows * self.buckets)

    @property
    def a(self):
        return self.p_same_row_evict

    @property
    def b(self):
        return self.p_false_duplicate

    @property
    def c(self):
        return self.p_not_evict


def fp_m(inputs, m):
    """False positive probability after ``m`` earlier distinct elements.

    Example:

        .. code-block:: python

            >>> fp_m(RateInputs(16, 2, 4), 0)
            0.0
    """
    if m < 0:
        raise ConfigurationError('m must be non-negative')
    return inputs.b * (1.0 - _power(1.0 - inputs.c, m))


def _row_chain(k, space, policy):
    """Transition matrix and hit vector of one row's occupancy."""
    transition = np.zeros((k + 1, k + 1))
    hits = np.zeros(k + 1)
    if policy is EmptyCellPolicy.ZERO:
        # State is the number of cells still holding the initial zero.
        for zeros in range(k + 1):
            distinct = (k - zeros) + (1 if zeros else 0)
            hits[zeros] = distinct / space
            miss = 1.0 - hits[zeros]
            drop = miss * zeros / k
            transition[zeros, zeros] = 1.0 - drop
            if zeros:
                transition[zeros, zeros - 1] = drop
        start = k
    else:
        # State is the number of filled cells.
        for filled in range(k + 1):
            hits[filled] = filled / space
            grow = 0.0 if filled == k else 1.0 - hits[filled]
            transition[filled, filled] = 1.0 - grow
            if grow:
                transition[filled, filled + 1] = grow
        start = 0
    initial = np.zeros(k + 1)
    initial[start] = 1.0
    return initial, transition, hits


def fp_m_exact(inputs, m, policy=None):
    """Exact row-occupancy false positive probability after ``m`` elements.

    The closed form of :func:`fp_m` treats rows as either empty or full;
    this model tracks how many cells are filled, weighting each row load
    by its binomial probability.

    :param policy: ``zero`` models rows starting with ``k`` zero
        fingerprints; other policies model initially empty rows.
    """
    if m < 0:
        raise ConfigurationError('m must be non-negative')
    policy = EmptyCellPolicy.coerce(policy)
    state, transition, hits = _row_chain(inputs.buckets, inputs.space,
                                         policy)
    loads = stats.binom(m, 1.0 / inputs.rows).pmf(np.arange(m + 1))
    total = 0.0
    for weight in loads:
        total += weight * float(state @ hits)
        state = state @ transition
    return total


def fpr_n(inputs, n):
    """Mean of :func:`fp_m` over ``m = 1 .. n``; tends to ``k / S``."""
    if n < 1:
        raise ConfigurationError('n must be positive')
    b, c = inputs.b, inputs.c
    if c == 0.0:
        return b
    return b * (1.0 - c * (1.0 - _power(1.0 - c, n)) / (n * (1.0 - c)))


def fpr_n_sum(inputs, n):
    """Reference summation of :func:`fp_m` behind :func:`fpr_n`."""
    if n < 1:
        raise ConfigurationError('n must be positive')
    return math.fsum(fp_m(inputs, m) for m in range(1, n + 1)) / n


def _fn_after(inputs, gap):
    a, b, c = inputs.a, inputs.b, inputs.c
    first = (1.0 - b) * (1.0 - _power(a, gap))
    denominator = 1.0 - a - c
    if abs(denominator) < SINGULAR_TOLERANCE:
        second = a * b * gap * _power(a, gap - 1) if gap else 0.0
    else:
        second = a * b * (_power(a, gap) - _power(1.0 - c, gap)) / denominator
    return first + second


def fn_im(inputs, i, m):
    """False negative probability for element ``i`` re-checked after ``m``.

    Only the ``m - i`` insertions following ``i`` can evict its
    fingerprint, so ``fn_im(inputs, m, m) == 0``.
    """
    if not 1 <= i <= m:
        raise ConfigurationError('Need 1 <= i <= m')
    return _fn_after(inputs, m - i)


def fn_im_sum(inputs, i, m):
    """Term by term sum over the eviction step behind :func:`fn_im`.

    The fingerprint of ``i`` is first evicted at step ``j`` with
    probability ``a * (1 - a)**(j - i - 1)``; the re-check is then a false
    negative unless the remaining ``m - j`` insertions produce a false
    positive.
    """
    if not 1 <= i <= m:
        raise ConfigurationError('Need 1 <= i <= m')
    a = inputs.a
    return math.fsum(a * _power(a, j - i - 1) * (1.0 - fp_m(inputs, m - j))
                     for j in range(i + 1, m + 1))


def fnr_infinity(inputs):
    """Saturated false negative rate of a uniform stream over ``U``.

    Averages :func:`fn_im` over geometric re-arrival gaps of success
    ``1 / U``; tends to ``1 - k / S`` when ``U`` grows.
    """
    b = inputs.b
    universe = inputs.universe
    if universe is None:
        return 1.0 - b
    if universe == 1:
        return 0.0
    a, c = inputs.a, inputs.c
    weight = universe - 1
    evicted = universe - weight * (1.0 - a)
    stale = universe - weight * c
    first = (1.0 - b) * (1.0 - 1.0 / evicted)
    if abs(1.0 - a - c) < SINGULAR_TOLERANCE:
        return first + a * b * weight / (evicted * stale)
    second = a * b * (1.0 / evicted - 1.0 / stale) / (1.0 - a - c)
    return first + second


def fnr_infinity_sum(inputs, limit=None):
    """Truncated geometric average of :func:`fn_im` behind
    :func:`fnr_infinity`."""
    universe = inputs.universe
    if universe is None:
        raise ConfigurationError('The sum needs a finite U')
    p = 1.0 / universe
    if limit is None:
        limit = max(1000, int(60 * universe))
    return math.fsum(p * _power(p, gap) * _fn_after(inputs, gap)
                     for gap in range(limit))


def fnr_n(inputs, arrivals):
    """Mean false negative rate over the duplicate arrivals of a stream.

    :param arrivals: ``(i, m)`` pairs, the previous occurrence position and
        the number of elements seen before the re-check.
    """
    arrivals = list(arrivals)
    if not arrivals:
        return 0.0
    return math.fsum(fn_im(inputs, i, m) for i, m in arrivals) / len(
        arrivals)


def qhtd_fpr_infinity(space, k):
    """Saturated false positive rate of QHTD, ``1 - (1 - 1/S)**k``."""
    if space < 2 or not 1 <= k <= space:
        raise ConfigurationError('Need S >= 2 and 1 <= k <= S')
    return 1.0 - _power(1.0 / space, k)


def qhtd_fnr_infinity(space, k):
    """Saturated false negative rate of QHTD, ``(1 - 1/S)**k``."""
    return 1.0 - qhtd_fpr_infinity(space, k)



def tune(memory_bits, target_fpr):
    """Smallest ``(k, S)`` with ``k / S`` equal to ``target_fpr``.

    :param target_fpr: a rational in ``(0, 1]`` such as ``Fraction(1, 4)``
        or ``'3/8'``.
    :return: a :class:`Tuning` tuple.
    """
    target = Fraction(target_fpr)
    if not 0 < target <= 1:
        raise ConfigurationError('Target FPR must lie in (0, 1]')
    denominator = target.denominator
    if denominator & (denominator - 1):
        raise ConfigurationError(
            'Target FPR {0} has no power-of-two denominator'.format(target))
    sigma = max(1, denominator.bit_length() - 1)
    if sigma > 16:
        raise ConfigurationError('Target FPR needs more than 16 bits')
    space = 1 << sigma
    k = int(target * space)
    if memory_bits <= sigma * k:
        raise ConfigurationError(
            '{0} bits cannot hold one row of {1} buckets'.format(
                memory_bits, k))
    return Tuning(k, space, sigma, memory_bits // (sigma * k))


def memory_ratio(remainder_bits, kept_bits):
    """Ratio of compressed to uncompressed SQF fingerprint width.

    Example:

        .. code-block:: python

            >>> memory_ratio(2, 1)
            Fraction(2, 3)
    """
    if not 0 <= kept_bits < remainder_bits:
        raise ConfigurationError('Need 0 <= r\' < r')
    compressed = kept_bits + _ceil_log2(remainder_bits - kept_bits + 1)
    return Fraction(compressed, kept_bits + _ceil_log2(remainder_bits + 1))


def sqf_sigma_and_space(remainder_bits, kept_bits):
    """Fingerprint width and distinct fingerprints of an SQF."""
    if not 0 <= kept_bits < remainder_bits:
        raise ConfigurationError('Need 0 <= r\' < r')
    sigma = kept_bits + _ceil_log2(remainder_bits + 1)
    return sigma, (1 << kept_bits) * (remainder_bits - kept_bits + 1)


def sqf_rates_approx(remainder_bits, kept_bits, k):
    """Asymptotic SQF error rates from a central binomial approximation."""
    sqf_sigma_and_space(remainder_bits, kept_bits)
    fpr = k / ((1 << kept_bits) * math.sqrt(math.pi * remainder_bits))
    return fpr, 1.0 - fpr


def sqf_rates_exact(remainder_bits, kept_bits, k):
    """Saturated SQF error rates ``(k / S, 1 - k / S)``."""
    _, space = sqf_sigma_and_space(remainder_bits, kept_bits)
    fpr = min(1.0, k / space)
    return fpr, 1.0 - fpr


def sbf_fpr_bound(hashes, decrements, max_value, rows):
    """Stable point false positive rate of a Stable Bloom Filter.

    :param hashes: ``K`` hashed cells per element.
    :param decrements: ``P`` random cells decremented per insertion.
    :param max_value: ``Max``, the value hashed cells are set to.
    :param rows: ``m``, number of cells.
    """
    if hashes < 1 or decrements < 1 or max_value < 1:
        raise ConfigurationError('K, P and Max must be positive')
    if rows <= hashes * decrements:
        raise ConfigurationError('m must exceed K * P')
    stay = 1.0 / (1.0 + 1.0 / (decrements * (1.0 / hashes - 1.0 / rows)))
    return (1.0 - stay ** max_value) ** hashes


def sbf_decrements_for(hashes, max_value, rows, target_fpr, limit=4096):
    """Decrement count whose stable point rate is closest to the target."""
    if not 0.0 < target_fpr < 1.0:
        raise ConfigurationError('Target FPR must lie in (0, 1)')
    best = None
    for decrements in range(1, limit + 1):
        if rows <= hashes * decrements:
            break
        gap = abs(sbf_fpr_bound(hashes, decrements, max_value, rows)
                  - target_fpr)
        if best is None or gap < best[0]:
            best = (gap, decrements)
    if best is None:
        raise ConfigurationError('{0} cells are too few'.format(rows))
    return best[1]


def catalan_ratio(n):
    """``C(2n, n) / 4**n`` computed exactly, used to check the SQF model."""
    return Fraction(math.comb(2 * n, n), 4 ** n)


OPERATIONS = {
    'fp_m': (fp_m, ('m',)),
    'fp_m_exact': (fp_m_exact, ('m',)),
    'fpr_n': (fpr_n, ('n',)),
    'fn_im': (fn_im, ('i', 'm')),
    'fnr_inf': (fnr_infinity, ()),
    'qhtd_fpr': (qhtd_fpr_infinity, ('S', 'k')),
    'tune': (tune, ('memory_bits', 'target_fpr')),
    'ratio': (memory_ratio, ('r', 'rprime')),
    'sqf_approx': (sqf_rates_approx, ('r', 'rprime', 'k')),
    'sqf_exact': (sqf_rates_exact, ('r', 'rprime', 'k')),
    'sqf_sigma': (sqf_sigma_and_space, ('r', 'rprime')),
    'sbf_bound': (sbf_fpr_bound, ('K', 'P', 'max', 'm_rows')),
}
"""Operations reachable through :func:`evaluate`."""

_RATE_OPERATIONS = ('fp_m', 'fp_m_exact', 'fpr_n', 'fn_im', 'fnr_inf')


def evaluate(operation, **params):
    """Evaluate a named formula from flat keyword parameters.

    Rate operations take ``N``, ``k``, ``S`` and optionally ``U`` besides
    their own parameters.

    :return: a JSON-ready value.
    """
    try:
        function, names = OPERATIONS[operation]
    except KeyError:
        raise ConfigurationError('Unknown operation {0!r}'.format(operation))
    missing = [name for name in names if params.get(name) is None]
    if missing:
        raise ConfigurationError('{0} needs {1}'.format(
            operation, ', '.join(missing)))
    arguments = [params[name] for name in names]
    if operation in _RATE_OPERATIONS:
        for name in ('N', 'k', 'S'):
            if params.get(name) is None:
                raise ConfigurationError('{0} needs {1}'.format(
                    operation, name))
        inputs = RateInputs(params['N'], params['k'], params['S'],
                            params.get('U'))
        arguments.insert(0, inputs)
    result = function(*arguments)
    logger.debug('%s(%s) = %r', operation, params, result)
    if isinstance(result, Tuning):
        return result._asdict()
    if isinstance(result, Fraction):
        return str(result)
    if isinstance(result, tuple):
        return list(result)
    return result
