"""
Atomic and buffer-gas properties entering the spin-noise model: the
diffusion constant, the hyperfine spin variances, the dispersive
Lorentzian of the probe and the spin dynamics in the bias field.
"""
from __future__ import absolute_import, division, unicode_literals

from fractions import Fraction

import numpy as np
import param

from ..errors import DomainError


# Prefactor constants of the Faraday rotation angle. They set only the
# absolute rotation amplitude, which cancels in every normalized
# correlation and spectrum computed here.
SPEED_OF_LIGHT = 2.99792458e10  # cm/s
ELECTRON_RADIUS = 2.8179403262e-13  # cm
OSCILLATOR_STRENGTH = {'D1': 0.34231, 'D2': 0.69577}  # 87Rb


class GasSpec(param.Parameterized):
    """
    Buffer gas conditions setting the diffusion constant
    D = D_0 (p_0 / p) (T / T_0)^(3/2).
    """

    temperature = param.Number(default=393.15, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Cell temperature in K.""")

    pressure = param.Number(default=70.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Buffer gas pressure in Torr.""")

    d0 = param.Number(default=0.159, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Reference diffusion constant in cm^2/s.""")

    t0 = param.Number(default=333.15, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Temperature in K at which d0 applies.""")

    p0 = param.Number(default=760.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Pressure in Torr at which d0 applies.""")


class AtomSpec(param.Parameterized):
    """
    Alkali species probed off resonance (87Rb on the D1 line by default).
    """

    nuclear_spin = param.Number(default=1.5, bounds=(0.5, None), doc="""
        Nuclear spin I.""")

    f_values = param.List(default=[1.0, 2.0], doc="""
        Ground-state hyperfine levels F = I -/+ 1/2.""")

    density = param.Number(default=1e13, bounds=(0, None), doc="""
        Vapour density n_v in 1/cm^3.""")

    resonances = param.Dict(default={1.0: 377.111735e12, 2.0: 377.104900e12}, doc="""
        Optical resonance frequency nu_F in Hz from each hyperfine level.""")

    linewidth = param.Number(default=1.0e9, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Pressure-broadened half width Gamma in Hz.""")

    probe = param.Number(default=377.0e12, bounds=(0, None), doc="""
        Probe frequency nu in Hz.""")


class SpinDynamics(param.Parameterized):
    """
    Larmor precession and transverse relaxation of the spins.
    """

    omega_l = param.Number(default=0.0, doc="""
        Larmor angular frequency in rad/s.""")

    t2 = param.Number(default=1.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Transverse relaxation time in s; may be infinite.""")

    @property
    def larmor_hz(self):
        return self.omega_l / (2 * np.pi)


#---------------------------------------------------------------------
# Public API
#---------------------------------------------------------------------

def diffusion_constant(gas):
    """
    Diffusion constant in cm^2/s of the alkali atoms in the buffer gas.
    """
    return gas.d0 * (gas.p0 / gas.pressure) * (gas.temperature / gas.t0)**1.5


def _half_integer(value, name):
    frac = Fraction(value).limit_denominator(2)
    if abs(float(frac) - value) > 1e-12 or frac.denominator not in (1, 2) or frac < 0:
        raise DomainError('%s must be a non-negative integer or half-integer, got %s.'
                          % (name, value))
    return frac


def sz2_variance(I, F):
    """
    Variance of the spin projection of an atom in hyperfine level F:

        <s_z^2>_F = (2F + 1) / (2 (2I + 1)) * 1 / (2I + 1)^2 * F (F + 1) / 3
    """
    I, F = _half_integer(I, 'I'), _half_integer(F, 'F')
    if I == 0 or F not in (I - Fraction(1, 2), I + Fraction(1, 2)):
        raise DomainError('Hyperfine level F=%s is not I +/- 1/2 for I=%s.' % (F, I))
    value = (2 * F + 1) / (2 * (2 * I + 1)) / (2 * I + 1)**2 * F * (F + 1) / 3
    return float(value)


def lorentzian_im(nu, nu_f, gamma):
    """
    Dispersive part (nu - nu_F) / ((nu - nu_F)^2 + Gamma^2) of the
    pressure-broadened line, in 1/Hz.
    """
    if not gamma > 0:
        raise DomainError('Linewidth must be positive, got %s Hz.' % gamma)
    detuning = np.asarray(nu, dtype=float) - nu_f
    return (detuning / (detuning**2 + gamma**2))[()]


def faraday_weight(atom):
    """
    Relative contribution <s_z^2>_F Im(L(nu - nu_F))^2 of each hyperfine
    level to the rotation-noise variance, keyed by F. The common
    prefactor (c r_e f_osc n_v)^2 is omitted.
    """
    weights = {}
    for F in atom.f_values:
        nu_f = atom.resonances[F]
        weights[F] = sz2_variance(atom.nuclear_spin, F) * lorentzian_im(atom.probe, nu_f, atom.linewidth)**2
    return weights


def sensitivity_scaling(n_v, volume, t2, gamma_pr, od0, gamma):
    """
    Relative spin-projection and photon-shot noise limited magnetic
    sensitivities,

        dB_spn ~ (1/gamma) sqrt(1 / (n_v V T_2))
        dB_psn ~ (1/gamma) (1/T_2) / sqrt(n_v V Gamma_pr OD_0)

    in units where all inputs equal to one give (1, 1).
    """
    values = dict(n_v=n_v, volume=volume, t2=t2, gamma_pr=gamma_pr, od0=od0, gamma=gamma)
    for name, value in values.items():
        if not value > 0:
            raise DomainError('%s must be positive, got %s.' % (name, value))
    spn = np.sqrt(1. / (n_v * volume * t2)) / gamma
    psn = 1. / (gamma * t2 * np.sqrt(n_v * volume * gamma_pr * od0))
    return float(spn), float(psn)
