"""
Full spin-noise correlation and its power spectral density.
"""
from __future__ import absolute_import, division, unicode_literals

from collections import namedtuple

import numpy as np

from scipy.integrate import trapezoid

from ..config import config
from ..errors import DomainError
from ..io.state import state


#: Peak-normalized spectrum; truncated flags a correlation that had not
#: decayed by the end of its delay grid.
Spectrum = namedtuple('Spectrum', 'freqs psd truncated')

# Upper bound on the size of the cosine kernel evaluated at once
_KERNEL_SIZE = 2**22


def full_correlation(tau, cd, dynamics):
    """
    C(tau) = C_d(tau) cos(omega_L tau) exp(-tau / T_2).
    """
    tau = np.asarray(tau, dtype=float)
    cd = np.asarray(cd, dtype=float)
    if tau.shape != cd.shape:
        raise ValueError('Delay and correlation grids differ in shape: %s vs %s.'
                         % (tau.shape, cd.shape))
    return cd * np.cos(dynamics.omega_l * tau) * np.exp(-tau / dynamics.t2)


def resample_correlation(tau, cd, dynamics, n=None, dt=None):
    """
    Evaluates C(tau) on a uniform grid from 0 to the last delay. C_d is
    interpolated linearly in log(tau) (and linearly in tau towards
    C_d(0) = 1 below the first delay); precession and relaxation are
    applied analytically so the grid only has to resolve them.
    """
    tau = np.asarray(tau, dtype=float)
    cd = np.asarray(cd, dtype=float)
    if not np.all(np.diff(tau) > 0) or tau[0] <= 0:
        raise DomainError('Delays must be positive and increasing.')
    t_max = tau[-1]
    if n is None:
        if dt is None:
            dt = tau[0]
            if dynamics.larmor_hz > 0:
                dt = min(dt, 1. / (40 * dynamics.larmor_hz))
        n = int(np.ceil(t_max / dt)) + 1
    t = np.linspace(0, t_max, int(n))
    below = t < tau[0]
    values = np.empty_like(t)
    values[below] = 1 + (cd[0] - 1) * t[below] / tau[0]
    values[~below] = np.interp(np.log(t[~below]), np.log(tau), cd)
    return t, full_correlation(t, values, dynamics)


def psd(tau, c, freqs, truncation_level=None):
    """
    Peak-normalized power spectral density

        S(f) = Int_0^inf 2 C(tau) cos(2 pi f tau) dtau / max_f S

    by the trapezoidal rule on the delay grid, extended to tau = 0 with
    the first value when the grid starts later.
    """
    tau = np.asarray(tau, dtype=float)
    c = np.asarray(c, dtype=float)
    freqs = np.asarray(freqs, dtype=float)
    level = config.truncation_level if truncation_level is None else truncation_level
    truncated = bool(abs(c[-1]) > level)
    if truncated:
        state.warn(None, 'C(tau) = %.3g at the end of the delay grid (%g s) exceeds %g; '
                   'the spectrum is truncated.', c[-1], tau[-1], level)
    if tau[0] > 0:
        tau = np.concatenate([[0.], tau])
        c = np.concatenate([c[:1], c])
    chunk = max(1, _KERNEL_SIZE // len(tau))
    spectrum = np.empty(len(freqs))
    for start in range(0, len(freqs), chunk):
        f = freqs[start:start + chunk, None]
        spectrum[start:start + chunk] = trapezoid(2 * c * np.cos(2 * np.pi * f * tau), tau, axis=-1)
    peak = spectrum.max()
    if not peak > 0:
        raise DomainError('The spectrum has no positive peak on the frequency grid.')
    return Spectrum(freqs, spectrum / peak, truncated)


def linewidth(freqs, spectrum):
    """
    Half width at half maximum (Hz) of a peak-normalized spectrum,
    measured on the high-frequency side of the peak by linear
    interpolation. Returns inf when the spectrum never halves.
    """
    freqs = np.asarray(freqs, dtype=float)
    spectrum = np.asarray(spectrum, dtype=float)
    peak = int(np.argmax(spectrum))
    half = spectrum[peak] / 2.
    after = np.nonzero(spectrum[peak:] < half)[0]
    if not len(after):
        return np.inf
    j = peak + after[0]
    f0, f1, s0, s1 = freqs[j - 1], freqs[j], spectrum[j - 1], spectrum[j]
    return float(f0 + (s0 - half) * (f1 - f0) / (s0 - s1) - freqs[peak])
