from __future__ import absolute_import, division, unicode_literals

import numpy as np
import pytest

from multipass.errors import DomainError
from multipass.noise import (
    AtomSpec, GasSpec, SpinDynamics, diffusion_constant, faraday_weight,
    lorentzian_im, sensitivity_scaling, sz2_variance
)


def test_diffusion_constant_at_operating_point():
    assert diffusion_constant(GasSpec()) == pytest.approx(2.21, abs=0.01)


def test_diffusion_constant_at_reference_point():
    gas = GasSpec(temperature=333.15, pressure=760.)
    assert diffusion_constant(gas) == pytest.approx(0.159)


def test_diffusion_constant_scales_inversely_with_pressure():
    low, high = GasSpec(pressure=35.), GasSpec(pressure=70.)
    assert diffusion_constant(low) == pytest.approx(2 * diffusion_constant(high))


@pytest.mark.parametrize('F,expected', [(2, 0.078125), (1, 0.015625)])
def test_sz2_variance_rb87(F, expected):
    assert sz2_variance(1.5, F) == pytest.approx(expected)


def test_sz2_variance_rejects_invalid_levels():
    with pytest.raises(DomainError):
        sz2_variance(1.5, 3)
    with pytest.raises(DomainError):
        sz2_variance(1.3, 1)
    with pytest.raises(DomainError):
        sz2_variance(0, 0.5)


def test_lorentzian_im_one_linewidth_off():
    gamma = 1e9
    assert lorentzian_im(377e12 + gamma, 377e12, gamma) == pytest.approx(1 / (2 * gamma))
    assert lorentzian_im(377e12, 377e12, gamma) == 0


def test_lorentzian_im_needs_positive_linewidth():
    with pytest.raises(DomainError):
        lorentzian_im(1., 1., 0.)


def test_faraday_weight_per_level():
    weights = faraday_weight(AtomSpec())
    assert set(weights) == {1.0, 2.0}
    assert all(w > 0 for w in weights.values())


def test_sensitivity_scaling():
    assert sensitivity_scaling(1, 1, 1, 1, 1, 1) == pytest.approx((1., 1.))
    spn, psn = sensitivity_scaling(1, 1, 4, 1, 1, 1)
    assert spn == pytest.approx(0.5)
    assert psn == pytest.approx(0.25)
    with pytest.raises(DomainError):
        sensitivity_scaling(1, 0, 1, 1, 1, 1)


def test_spin_dynamics_larmor_hz():
    assert SpinDynamics(omega_l=2 * np.pi * 1000).larmor_hz == pytest.approx(1000.)
