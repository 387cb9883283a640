"""
Diffusion correlation C_d(tau) of the spin noise seen by a multipass
probe beam, the overlap of the beam intensity with itself after the
atoms diffused for a time tau,

    C_d(tau) = sum_n Int I(r1) I(r2) G(r1 - r2, tau) d^3r1 d^3r2
               / sum_n Int I(r)^2 d^3r,

summed over passes without cross-pass terms and normalized to one at
config.tau_norm.
"""
from __future__ import absolute_import, division, unicode_literals

from collections import namedtuple

import numpy as np

from numpy.polynomial.hermite import hermgauss
from scipy.integrate import quad_vec

from ..config import config
from ..errors import DomainError, QuadratureError
from ..io.state import state
from ..util import fold_interval, in_intervals, logspace_grid
from .atoms import diffusion_constant
from .spectrum import full_correlation, linewidth, psd, resample_correlation


#: Outcome of the correlation pipeline; warnings lists the messages
#: recorded while computing it.
CorrelationResult = namedtuple('CorrelationResult', 'tau cd c freqs psd linewidth warnings')


def default_tau_grid(num=200, start=1e-6, stop=2e-2):
    """200 logarithmically spaced delays between 1 us and 20 ms."""
    return logspace_grid(start, stop, num)


def green(dr, tau, D):
    """
    Free diffusion propagator in 1/cm^3,

        G(dr, tau) = (4 pi D tau)^(-3/2) exp(-|dr|^2 / (4 D tau)),

    for displacements dr in mm (last axis of length 3), tau in s and D
    in cm^2/s.
    """
    if not tau > 0:
        raise DomainError('The diffusion propagator needs tau > 0, got %s s.' % tau)
    r2 = np.sum(np.asarray(dr, dtype=float)**2, axis=-1) / 100.
    return (4 * np.pi * D * tau)**-1.5 * np.exp(-r2 / (4 * D * tau))


def _tau_array(tau):
    tau = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(tau < 0):
        raise DomainError('Delays must be non-negative, got %s.' % tau[tau < 0])
    return tau


def _stigmatic_integrand(segment, beta):
    k = segment.wavenumber

    def integrand(z):
        terms = segment.width_terms(z)
        b = terms[0]
        g = segment.peak_intensity(z, terms)**2 * np.pi / (2 * k * b)
        return np.append(g / (1 + beta * b), g)
    return integrand


def _local_integrand(segment, beta):
    k = segment.wavenumber

    def integrand(z):
        terms = segment.width_terms(z)
        bxx, bxy, byy, det = terms[:4]
        g = segment.peak_intensity(z, terms)**2 * np.pi / (2 * k * np.sqrt(det))
        overlap = 1. / np.sqrt(1 + beta * (bxx + byy) + beta**2 * det)
        return np.append(g * overlap, g)
    return integrand


def _diffusive_integrand(segment, tau, D):
    k = segment.wavenumber
    nodes, weights = hermgauss(config.hermite_nodes)
    weights = weights / np.sqrt(np.pi)
    shifts = np.sqrt(4 * D * tau)[:, None] * nodes[None, :]
    c = (4 * D * tau)[:, None]

    def integrand(z):
        terms = segment.width_terms(z)
        bxx, bxy, byy, det = terms[:4]
        p1 = segment.peak_intensity(z, terms)
        g = p1**2 * np.pi / (2 * k * np.sqrt(det))
        z2 = fold_interval(z + shifts, segment.z_lo, segment.z_hi)
        t2 = segment.width_terms(z2)
        p2 = segment.peak_intensity(z2, t2)
        a11, a12, a22 = k * bxx, k * bxy, k * byy
        b11, b12, b22 = k * t2[0], k * t2[1], k * t2[2]
        m11 = a11 + b11 + c * (a11 * b11 + a12 * b12)
        m12 = a12 + b12 + c * (a11 * b12 + a12 * b22)
        m21 = a12 + b12 + c * (a12 * b11 + a22 * b12)
        m22 = a22 + b22 + c * (a12 * b12 + a22 * b22)
        kernel = p1 * p2 * np.pi / np.sqrt(m11 * m22 - m12 * m21)
        if segment.exclusions:
            kernel = np.where(in_intervals(z2, segment.exclusions), 0., kernel)
        return np.append(kernel @ weights, g)
    return integrand


def _integrate(segment, integrand, tau):
    """
    Integrates a vector integrand [numerators..., denominator] over the
    allowed domain of a segment.
    """
    grid = np.linspace(segment.z_lo, segment.z_hi, 33)
    grid = grid[~in_intervals(grid, segment.exclusions)] if segment.exclusions else grid
    scale = max(integrand(z)[-1] for z in grid) if len(grid) else 1.
    total = 0.
    for lo, hi in segment.allowed_intervals():
        points = [z for z in segment.focus_points() if lo < z < hi]
        if config.quad_intervals > 1:
            points = sorted(set(points) | set(np.linspace(lo, hi, config.quad_intervals + 1)[1:-1]))
        result, _, info = quad_vec(lambda z: integrand(z) / scale, lo, hi,
                                   epsrel=config.quad_rtol, epsabs=config.quad_atol,
                                   points=points or None, full_output=True)
        if not info.success:
            raise QuadratureError('pass %d did not converge for tau in [%g, %g] s: %s'
                                  % (segment.index, tau.min(), tau.max(), info.message))
        total = total + result
    return total * scale


def _correlation(segments, tau, make_integrand):
    tau = _tau_array(tau)
    taus = np.concatenate([[config.tau_norm], tau])
    num, den = np.zeros(len(taus)), 0.
    for segment in segments:
        result = _integrate(segment, make_integrand(segment, taus), taus)
        num += result[:-1]
        den += result[-1]
    if not den > 0:
        raise DomainError('The beam deposits no intensity outside the exclusions.')
    cd = num / den
    return cd[1:] / cd[0]


def cd_stigmatic(segments, D, tau):
    """
    Diffusion correlation of round beams. The axial separation of the
    two atoms is neglected (z1 = z2), which reduces the transverse
    overlap of each pass to

        Int g(z) / (1 + 2 k D tau b(z)) dz,  g = P(z)^2 pi / (2 k b(z))

    with b = -Im(1/q). D is in cm^2/s and tau (scalar or array) in s.
    """
    for segment in segments:
        if not segment.stigmatic:
            raise ValueError('pass %d is astigmatic; use cd_astigmatic.' % segment.index)
    D = D * 100.

    def make(segment, taus):
        return _stigmatic_integrand(segment, 2 * segment.wavenumber * D * taus)
    cd = _correlation(segments, tau, make)
    return cd if np.ndim(tau) else float(cd[0])


def cd_astigmatic(segments, D, tau, axial='local'):
    """
    Diffusion correlation of general astigmatic beams described by
    their 2x2 width matrices B(z).

    With axial='local' the axial separation is neglected as in
    cd_stigmatic and the transverse overlap is
    det(I + 2 k D tau B)^(-1/2); for round beams this is exactly the
    stigmatic result. With axial='diffusive' the axial displacement is
    integrated with the one-dimensional propagator folded at the pass
    ends (reflecting mirrors), using Gauss-Hermite nodes inside the
    adaptive quadrature over z1.
    """
    D = D * 100.
    if axial == 'local':
        def make(segment, taus):
            return _local_integrand(segment, 2 * segment.wavenumber * D * taus)
    elif axial == 'diffusive':
        def make(segment, taus):
            return _diffusive_integrand(segment, taus, D)
    else:
        raise ValueError("axial must be 'local' or 'diffusive', got %r." % axial)
    cd = _correlation(segments, tau, make)
    return cd if np.ndim(tau) else float(cd[0])


def correlation(segments, gas, dynamics, tau=None, freqs=None, mode='stigmatic',
                axial='local'):
    """
    Runs the full spin-noise pipeline on a set of pass segments: C_d on
    the delay grid, the full correlation including Larmor precession
    and T_2 decay, and the peak-normalized power spectrum.
    """
    tau = default_tau_grid() if tau is None else _tau_array(tau)
    D = diffusion_constant(gas)
    before = len(state.warnings)
    if mode == 'stigmatic':
        cd = cd_stigmatic(segments, D, tau)
    elif mode == 'astigmatic':
        cd = cd_astigmatic(segments, D, tau, axial=axial)
    else:
        raise ValueError("mode must be 'stigmatic' or 'astigmatic', got %r." % mode)
    c = full_correlation(tau, cd, dynamics)
    if freqs is None:
        freqs = np.linspace(0, dynamics.larmor_hz + 10e3, 1001)
    freqs = np.asarray(freqs, dtype=float)
    if abs(c[-1]) > config.truncation_level:
        state.warn(None, 'C(tau) = %.3g at the end of the delay grid (%g s) exceeds %g; '
                   'the spectrum is truncated.', c[-1], tau[-1], config.truncation_level)
    t_uniform, c_uniform = resample_correlation(tau, cd, dynamics)
    spectrum = psd(t_uniform, c_uniform, freqs, truncation_level=np.inf)
    width = linewidth(freqs, spectrum.psd)
    state.log(None, 'C_d(%g s) = %.4g, linewidth %.4g Hz', tau[-1], cd[-1], width)
    return CorrelationResult(tau, cd, c, freqs, spectrum.psd, width, state.warnings[before:])
