"""
Monte Carlo estimate of the diffusion correlation, independent of the
quadrature and of its neglect of the axial separation.

Atoms are drawn with z uniform over the allowed length of all passes
and a transverse position r1 ~ N(0, (2 k B(z))^-1), i.e. with density
proportional to I(r1, z) / P_w(z) where P_w is the transverse power.
Weighting each draw by P_w(z) then gives

    Int I^2 d^3r            ~ E[P_w(z) I(r1)]
    Int I(r1) G I(r2)       ~ E[P_w(z) I(r2)],  r2 = r1 + N(0, 2 D tau),

with r2 folded back into the pass at its ends (reflecting mirrors) and
I(r2) = 0 inside an exclusion. Each delay uses its own Philox stream
spawned from the seed, so estimates do not depend on evaluation order.
"""
from __future__ import absolute_import, division, unicode_literals

from collections import namedtuple

import numpy as np

from ..errors import DomainError
from ..util import fold_interval, in_intervals


#: Ratio estimate of C_d per delay and its standard error.
MonteCarloEstimate = namedtuple('MonteCarloEstimate', 'tau value stderr')

_CHUNK = 200000


def _intensity(segment, terms, x, y):
    bxx, bxy, byy = terms[:3]
    quad = bxx * x**2 + 2 * bxy * x * y + byy * y**2
    return segment.peak_intensity(None, terms) * np.exp(-segment.wavenumber * quad)


def _draw(rng, segments, allowed, lengths, n, sigma):
    pick = np.searchsorted(np.cumsum(lengths), rng.random(n) * lengths.sum(), side='right')
    pick = np.minimum(pick, len(lengths) - 1)
    sums = np.zeros(5)
    for i in np.unique(pick):
        seg_index, lo, hi = allowed[i]
        segment = segments[seg_index]
        m = int(np.sum(pick == i))
        z = lo + (hi - lo) * rng.random(m)
        terms = segment.width_terms(z)
        bxx, bxy, byy = terms[:3]
        k2 = 2 * segment.wavenumber
        l11 = np.sqrt(k2 * bxx)
        l21 = k2 * bxy / l11
        l22 = np.sqrt(k2 * byy - l21**2)
        e = rng.standard_normal((3, m))
        y = e[1] / l22
        x = (e[0] - l21 * y) / l11
        weight = segment.transverse_power(z, terms)
        first = weight * _intensity(segment, terms, x, y)
        step = sigma * rng.standard_normal((3, m))
        z2 = fold_interval(z + step[2], segment.z_lo, segment.z_hi)
        terms2 = segment.width_terms(z2)
        second = weight * _intensity(segment, terms2, x + step[0], y + step[1])
        if segment.exclusions:
            second = np.where(in_intervals(z2, segment.exclusions), 0., second)
        sums += [first.sum(), second.sum(), (first**2).sum(), (second**2).sum(),
                 (first * second).sum()]
    return sums


def cd_monte_carlo(segments, D, tau, n_samples=10**6, seed=0):
    """
    Estimates C_d(tau) for pass segments with D in cm^2/s, returning a
    MonteCarloEstimate with one value and standard error per delay.
    """
    if n_samples < 10**4:
        raise DomainError('The Monte Carlo oracle needs at least 1e4 samples, '
                          'got %d.' % n_samples)
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau < 0):
        raise DomainError('Delays must be non-negative.')
    allowed = [(i, lo, hi) for i, s in enumerate(segments) for lo, hi in s.allowed_intervals()]
    if not allowed:
        raise DomainError('The segments leave no allowed region to sample.')
    lengths = np.array([hi - lo for _, lo, hi in allowed])
    D = D * 100.
    streams = np.random.SeedSequence(seed).spawn(len(tau))
    values, errors = np.empty(len(tau)), np.empty(len(tau))
    for j, (t, stream) in enumerate(zip(tau, streams)):
        rng = np.random.Generator(np.random.Philox(stream))
        sigma = np.sqrt(2 * D * t)
        sums, done = np.zeros(5), 0
        while done < n_samples:
            m = min(_CHUNK, n_samples - done)
            sums += _draw(rng, segments, allowed, lengths, m, sigma)
            done += m
        mx, my, mxx, myy, mxy = sums / n_samples
        ratio = my / mx
        var = max(myy - 2 * ratio * mxy + ratio**2 * mxx, 0.)
        values[j] = ratio
        errors[j] = np.sqrt(var / n_samples) / mx
    return MonteCarloEstimate(tau, values, errors)
