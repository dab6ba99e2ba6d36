# -*- coding: utf-8 -*-
#
# This file is part of Invenio.
# Copyright (C) 2016 CERN.
#
# Invenio is free software; you can redistribute it and/or modify it
# under the terms of the GNU General Public License as published by the
# Free Software Foundation; either version 2 of the License, or (at your
# option) any later version. See the LICENSE file for more details.

"""Semi-sorted row encoding.

A row of ``k`` cells over an alphabet of ``S`` symbols is treated as a
multiset and stored as its rank among all ``C(S + k - 1, k)`` multisets.
Ranks follow the colexicographic order of the sorted row after mapping
each sorted value ``v_i`` to ``v_i + i``, so the all-zero row has rank 0.
"""

import math

from .errors import ConfigurationError, RankError


def count_states(space, k):
    """Number of distinct multisets of ``k`` symbols out of ``space``.

    Example:

        .. code-block:: python

            >>> count_states(16, 4)
            3876
    """
    if space < 1 or k < 1:
        raise ConfigurationError('space and k must be positive')
    return math.comb(space + k - 1, k)


def rank_width(space, k):
    """Bits needed to store any rank of :func:`count_states`."""
    return max(1, (count_states(space, k) - 1).bit_length())


def encode_row(row, space):
    """Rank of the multiset held by ``row``.

    :param row: cell values, in any order.
    :param space: alphabet size; every value must lie in ``[0, space)``.
    """
    values = sorted(row)
    if not values:
        raise ConfigurationError('Cannot rank an empty row')
    if values[0] < 0 or values[-1] >= space:
        raise RankError('Row value outside [0, {0})'.format(space))
    return sum(math.comb(value + index, index + 1)
               for index, value in enumerate(values))


def decode_row(rank, space, k):
    """Sorted row whose rank is ``rank``."""
    total = count_states(space, k)
    if not 0 <= rank < total:
        raise RankError('Rank {0} outside [0, {1})'.format(rank, total))
    combination = [0] * k
    remaining = k
    top = space + k - 1
    while remaining:
        top -= 1
        offset = math.comb(top, remaining)
        if rank >= offset:
            rank -= offset
            remaining -= 1
            combination[remaining] = top
    return [value - index for index, value in enumerate(combination)]
