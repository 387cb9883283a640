from __future__ import absolute_import, division, unicode_literals

import csv

import numpy as np
import pytest

slow = pytest.mark.slow


def gaussian_cd(tau, D, waist):
    """
    C_d of a beam of constant waist (mm) with D in cm^2/s:
    1 / (1 + 4 D tau / w^2).
    """
    return 1. / (1 + 4 * D * 100. * np.asarray(tau) / waist**2)


def lorentzian_psd(freqs, larmor_hz, t2):
    """One-sided spectrum of exp(-tau/T2) cos(2 pi f_L tau), peak normalized."""
    w = 2 * np.pi * np.asarray(freqs)
    wl = 2 * np.pi * larmor_hz
    s = t2 / (1 + ((w - wl) * t2)**2) + t2 / (1 + ((w + wl) * t2)**2)
    return s / s.max()


def read_csv(path):
    with open(str(path), encoding='utf-8') as f:
        rows = list(csv.reader(f))
    return rows[0], rows[1:]
