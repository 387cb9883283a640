from __future__ import absolute_import, division, unicode_literals

import numpy as np
import pytest

from multipass._testing.util import gaussian_cd, slow
from multipass.config import config
from multipass.errors import DomainError
from multipass.geometry import CylindricalCellConfig, RecirculatingCellConfig
from multipass.io.recipe import RunConfig, build_cell, recipe_path
from multipass.noise import (
    GasSpec, SpinDynamics, apply_barrier, barrier_around_focus,
    build_pass_segments, cd_astigmatic, cd_stigmatic, correlation,
    default_tau_grid, green
)
from multipass.optics import BeamSpec


def test_default_tau_grid():
    tau = default_tau_grid()
    assert len(tau) == 200
    assert tau[0] == pytest.approx(1e-6)
    assert tau[-1] == pytest.approx(2e-2)


def test_green_normalization():
    # integrates to one over all displacements
    D, tau = 2., 1e-3
    sigma = np.sqrt(2 * D * tau) * 10.
    x = np.linspace(-8 * sigma, 8 * sigma, 81)
    dx = x[1] - x[0]
    X, Y, Z = np.meshgrid(x, x, x, indexing='ij')
    total = green(np.stack([X, Y, Z], axis=-1), tau, D).sum() * (dx / 10.)**3
    assert total == pytest.approx(1., rel=1e-3)
    with pytest.raises(DomainError):
        green([0., 0., 0.], 0., D)


def test_cd_is_one_at_zero_delay(collimated_segments, diffusion):
    assert cd_stigmatic(collimated_segments, diffusion, 1e-9) == pytest.approx(1., abs=1e-9)


def test_cd_decreases_with_delay(focused_pass, diffusion):
    segments = build_pass_segments(None, focused_pass)
    cd = cd_stigmatic(segments, diffusion, default_tau_grid(20))
    assert np.all(np.diff(cd) < 0)
    assert 0 < cd[-1] < cd[0] <= 1


def test_negative_delay_rejected(collimated_segments, diffusion):
    with pytest.raises(DomainError):
        cd_stigmatic(collimated_segments, diffusion, [-1e-3])


def test_collimated_beam_closed_form(collimated_segments, diffusion):
    tau = np.array([1e-5, 1e-4, 1e-3, 1e-2])
    cd = cd_stigmatic(collimated_segments, diffusion, tau)
    assert cd == pytest.approx(gaussian_cd(tau, diffusion, 1.), rel=1e-3)


def test_collimated_beam_value(collimated_segments, diffusion):
    assert cd_stigmatic(collimated_segments, diffusion, 1e-3) == pytest.approx(0.530443, rel=1e-3)


def test_stigmatic_equals_local_astigmatic_for_round_beams(focused_pass, diffusion):
    segments = build_pass_segments(None, focused_pass)
    tau = [1e-5, 1e-4, 1e-3]
    assert cd_astigmatic(segments, diffusion, tau) == pytest.approx(
        cd_stigmatic(segments, diffusion, tau), rel=1e-6)


def test_diffusive_matches_local_for_collimated_beam(collimated_segments, diffusion):
    tau = [1e-4, 1e-3]
    local = cd_astigmatic(collimated_segments, diffusion, tau)
    diffusive = cd_astigmatic(collimated_segments, diffusion, tau, axial='diffusive')
    assert diffusive == pytest.approx(local, rel=2e-3)


def test_cd_stigmatic_rejects_astigmatic_segments(twisted_cell, diffusion):
    segments = build_pass_segments(None, twisted_cell, mode='astigmatic')
    with pytest.raises(ValueError):
        cd_stigmatic(segments, diffusion, 1e-3)


def test_unknown_axial_model(collimated_segments, diffusion):
    with pytest.raises(ValueError):
        cd_astigmatic(collimated_segments, diffusion, 1e-3, axial='exact')


def _recirc_cd(f2, tau, diffusion, passes=50, waist=1.):
    cell = RecirculatingCellConfig(d=30., f2=f2, passes=passes, beam=BeamSpec(waist=waist))
    return cd_stigmatic(build_pass_segments(None, cell), diffusion, tau)


def test_longer_focal_length_decays_slower(diffusion):
    tau = default_tau_grid(20)
    short = _recirc_cd(1000., tau, diffusion)
    long_ = _recirc_cd(10000., tau, diffusion)
    assert np.all(long_ >= short - 1e-9)


@pytest.mark.parametrize('literal', [False, True])
def test_wider_entry_beam_decays_slower_in_twisted_cell(twisted_cell, diffusion, literal):
    values = []
    for waist in (1., 2., 5.):
        cell = twisted_cell.clone(waist_xi=waist, waist_eta=waist)
        segments = build_pass_segments(None, cell, mode='astigmatic', literal=literal)
        values.append(cd_astigmatic(segments, diffusion, 5e-4))
    assert values[0] < values[1] < values[2]


def _fig5_cd(tau, diffusion, literal):
    recirc = RecirculatingCellConfig(d=30., f2=5000., passes=42, beam=BeamSpec(waist=0.95))
    cyl = CylindricalCellConfig(f=50., twist=np.radians(48), d=30., round_trips=42,
                                waist_xi=0.95, waist_eta=0.95)
    return [cd_astigmatic(build_pass_segments(None, cell, mode='astigmatic', literal=literal),
                          diffusion, tau) for cell in (recirc, cyl)]


def test_recirculating_beats_cylindrical(diffusion):
    cd_recirc, cd_cyl = _fig5_cd(default_tau_grid(30), diffusion, literal=False)
    assert np.all(cd_recirc >= cd_cyl)


def test_literal_segments_reverse_fig5_at_long_delays(diffusion):
    # unnormalized passes keep the ordering only below about 1 ms
    cd_recirc, cd_cyl = _fig5_cd([1e-5, 1e-4, 5e-4, 1e-2], diffusion, literal=True)
    assert np.all(cd_recirc[:3] > cd_cyl[:3])
    assert cd_recirc[3] < cd_cyl[3]


def test_barrier_raises_correlation(focused_pass, diffusion):
    segments = build_pass_segments(None, focused_pass)
    values = []
    for width in (1., 2., 4.):
        barred = apply_barrier(segments, [barrier_around_focus(segments[0], width)])
        values.append(cd_stigmatic(barred, diffusion, 1e-3))
    open_ = cd_stigmatic(segments, diffusion, 1e-3)
    assert values[2] >= values[1] >= values[0] > open_


def test_fig3b_barrier_gains_grow_with_width(diffusion):
    cell = build_cell(RunConfig.from_file(recipe_path('fig3b')).resolve())
    assert cell.focus_waist == pytest.approx(0.307163, abs=1e-6)
    segments = build_pass_segments(None, cell)
    values = [cd_stigmatic(segments, diffusion, 1e-3)]
    for width in (1., 2., 4.):
        barred = apply_barrier(segments, [barrier_around_focus(segments[0], width)])
        values.append(cd_stigmatic(barred, diffusion, 1e-3))
    gains = np.diff(np.ravel(values))
    assert np.all(gains > 0)
    # the beam is nearly uniform across the cell, so a wider block gains more
    assert gains[2] > gains[1]


def test_correlation_pipeline(collimated_segments):
    dynamics = SpinDynamics(omega_l=2 * np.pi * 1000., t2=0.01)
    result = correlation(collimated_segments, GasSpec(), dynamics)
    assert result.cd.shape == (200,)
    assert result.c.shape == (200,)
    assert result.freqs[-1] == pytest.approx(11000.)
    assert result.psd.max() == pytest.approx(1.)
    assert result.freqs[np.argmax(result.psd)] == pytest.approx(1000., abs=30.)
    assert np.isfinite(result.linewidth)
    assert any('truncated' in w for w in result.warnings)


def test_correlation_unknown_mode(collimated_segments):
    with pytest.raises(ValueError):
        correlation(collimated_segments, GasSpec(), SpinDynamics(), mode='vector')


@slow
def test_longer_focal_length_narrows_line(diffusion):
    widths = []
    for f2 in (1000., 10000.):
        cell = RecirculatingCellConfig(d=30., f2=f2, passes=50, beam=BeamSpec(waist=1.))
        result = correlation(build_pass_segments(None, cell), GasSpec(), SpinDynamics(t2=1.))
        widths.append(result.linewidth)
    assert widths[1] < widths[0]


def test_halving_the_quadrature_step_is_stable(focused_pass, diffusion):
    segments = build_pass_segments(None, focused_pass)
    tau = default_tau_grid(12)
    coarse = cd_stigmatic(segments, diffusion, tau)
    for n in (2, 4):
        with config.set(quad_intervals=n):
            fine = cd_stigmatic(segments, diffusion, tau)
        assert not np.array_equal(fine, coarse)
        assert np.max(np.abs(fine - coarse)) < 1e-4


def test_more_hermite_nodes_are_stable(focused_pass, diffusion):
    segments = build_pass_segments(None, focused_pass)
    tau = [1e-5, 1e-4]
    coarse = cd_astigmatic(segments, diffusion, tau, axial='diffusive')
    with config.set(hermite_nodes=48):
        fine = cd_astigmatic(segments, diffusion, tau, axial='diffusive')
    assert not np.array_equal(fine, coarse)
    assert np.max(np.abs(fine - coarse)) < 1e-4
