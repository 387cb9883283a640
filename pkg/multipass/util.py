"""
Various general utilities used in the multipass codebase.
"""
from __future__ import absolute_import, division, unicode_literals

import numbers

import numpy as np

from .errors import DomainError


def isinfinite(value):
    """
    Whether a focal length denotes a flat mirror.
    """
    return value is None or (isinstance(value, numbers.Number) and np.isinf(value))


def sine_sum(m, theta):
    """
    Returns sum_{i=1..m} sin(i theta) in closed form. Accepts scalar or
    array m; m <= 0 gives zero.
    """
    m = np.asarray(m, dtype=float)
    half = np.sin(theta / 2.)
    if half == 0:
        return np.zeros_like(m)[()]
    total = np.sin(m * theta / 2.) * np.sin((m + 1) * theta / 2.) / half
    return np.where(m > 0, total, 0.)[()]


def fold_interval(z, lo, hi):
    """
    Folds positions back into [lo, hi] as if reflected at both ends.
    Folding a free Gaussian displacement this way gives the reflecting
    boundary propagator exactly (method of images).
    """
    width = hi - lo
    z = np.mod(np.asarray(z, dtype=float) - lo, 2 * width)
    return lo + np.where(z > width, 2 * width - z, z)


def merge_intervals(intervals, lo=None, hi=None):
    """
    Sorts intervals, merges the overlapping ones and checks that they
    lie inside [lo, hi] when bounds are given.
    """
    checked = []
    for start, end in intervals:
        start, end = float(start), float(end)
        if end < start:
            raise DomainError('Interval (%s, %s) is inverted.' % (start, end))
        if lo is not None and start < lo - 1e-12 or hi is not None and end > hi + 1e-12:
            raise DomainError('Interval (%s, %s) lies outside the segment '
                              '[%s, %s].' % (start, end, lo, hi))
        checked.append((start, end))
    merged = []
    for start, end in sorted(checked):
        if merged and start <= merged[-1][1]:
            merged[-1] = (merged[-1][0], max(end, merged[-1][1]))
        else:
            merged.append((start, end))
    return merged


def complement_intervals(lo, hi, exclusions, breaks=()):
    """
    Returns the sub-intervals of [lo, hi] left after removing the
    exclusions, additionally split at the supplied break points.
    """
    pieces, start = [], lo
    for ex_lo, ex_hi in merge_intervals(exclusions, lo, hi):
        if ex_lo > start:
            pieces.append((start, ex_lo))
        start = max(start, ex_hi)
    if start < hi:
        pieces.append((start, hi))
    split = []
    for a, b in pieces:
        cuts = sorted(z for z in breaks if a < z < b)
        for c in cuts:
            split.append((a, c))
            a = c
        split.append((a, b))
    return split


def in_intervals(z, intervals):
    """
    Boolean mask of positions falling inside any of the intervals.
    """
    z = np.asarray(z, dtype=float)
    mask = np.zeros(z.shape, dtype=bool)
    for lo, hi in intervals:
        mask |= (z >= lo) & (z <= hi)
    return mask


def logspace_grid(start, stop, num):
    """
    Logarithmically spaced grid including both end points.
    """
    if not 0 < start < stop:
        raise DomainError('Grid bounds must satisfy 0 < start < stop, '
                          'got (%s, %s).' % (start, stop))
    return np.logspace(np.log10(start), np.log10(stop), int(num))
