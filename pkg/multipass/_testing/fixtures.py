"""
A module containing testing utilities and fixtures.
"""
from __future__ import absolute_import, division, unicode_literals

import numpy as np
import pytest

from multipass.config import config
from multipass.geometry import (
    CylindricalCellConfig, RecirculatingCellConfig, SinglePassConfig
)
from multipass.io.state import state
from multipass.noise import GasSpec, build_pass_segments, diffusion_constant
from multipass.optics import BeamSpec


@pytest.fixture(autouse=True)
def clean_state():
    state.reset()
    yield
    state.reset()


@pytest.fixture
def fig1_cell():
    return RecirculatingCellConfig(
        f2=1000., d=29.8, tilt=np.radians(0.04), tilt_prime=np.radians(-0.04),
        x0=8.11, y0=0., x0p=np.radians(-0.26), y0p=np.radians(2.21),
        beam=BeamSpec(waist=1.))


@pytest.fixture
def fig2d_cell():
    return RecirculatingCellConfig(
        f2=1000., d=86.46, tilt=np.radians(0.02), tilt_prime=np.radians(-0.02),
        x0=11., y0=0., x0p=0., y0p=np.radians(1.2), beam=BeamSpec(waist=1.))


@pytest.fixture
def twisted_cell():
    return CylindricalCellConfig(f=50., twist=np.radians(50), d=30., round_trips=21)


@pytest.fixture
def collimated_pass():
    """Single pass whose 1 mm beam barely changes over the cell."""
    return SinglePassConfig(d=45., focus_waist=1.)


@pytest.fixture
def focused_pass():
    return SinglePassConfig(d=45., focus_waist=0.05)


@pytest.fixture
def collimated_segments(collimated_pass):
    return build_pass_segments(None, collimated_pass)


@pytest.fixture
def diffusion():
    """D in cm^2/s at 120 C and 70 Torr."""
    return diffusion_constant(GasSpec())


@pytest.fixture
def strict_extent():
    with config.set(strict_extent=True):
        yield
