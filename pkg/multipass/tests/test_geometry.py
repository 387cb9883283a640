from __future__ import absolute_import, division, unicode_literals

import numpy as np
import pytest

from multipass.errors import (
    DomainError, InvalidGeometryError, NoExitError, UnstableCavityError
)
from multipass.geometry import (
    CylindricalCellConfig, RecirculatingCellConfig, SinglePassConfig,
    beam_radius_sequence, center_offset, circulation_index,
    closed_form_reflections, cylindrical_round_trip, geometric_reflections,
    lissajous_angles, mirror_changes, plateaus, reflection_sweep, spot_table,
    spot_x, spot_x_sequence, spot_y, stability_summary, tilt_offset_delta_n,
    total_reflections
)
from multipass.io.state import state
from multipass.optics import BeamSpec, stability_angle


def test_fig1_reflection_count(fig1_cell):
    assert geometric_reflections(fig1_cell) == 78
    assert total_reflections(fig1_cell) == 78


def test_fig1_closed_form_disagreement_is_recorded(fig1_cell):
    assert closed_form_reflections(fig1_cell) == 77
    total_reflections(fig1_cell)
    assert any('disagree' in w for w in state.warnings)


def test_total_reflections_closed_form_mode(fig1_cell):
    assert total_reflections(fig1_cell, mode='closed_form') == 77
    with pytest.raises(ValueError):
        total_reflections(fig1_cell, mode='ray')


def test_fig2d_circulation_structure(fig2d_cell):
    theta = fig2d_cell.theta
    assert theta == pytest.approx(0.418892, abs=1e-5)
    summary = stability_summary(fig2d_cell)
    # 2 pi / theta falls a hair short of 15; the pattern still closes on the 15th
    assert summary['circulation_period'] == pytest.approx(15, abs=1e-3)
    assert summary['circulation_period'] < 15
    assert summary['reflections_per_circulation'] == 15
    assert summary['reflections_per_half_circulation'] == 7


def test_fig2d_center_offset(fig2d_cell):
    summary = stability_summary(fig2d_cell)
    assert summary['delta_x_mm'] == pytest.approx(0.6754, abs=1e-3)
    assert summary['delta_n_mm'] == pytest.approx(2 * summary['delta_x_mm'])


def test_fig2d_reflection_counts(fig2d_cell):
    summary = stability_summary(fig2d_cell)
    assert summary['n_reflections_geometric'] == 135
    assert summary['n_reflections_closed_form'] == 135


def test_center_offset_is_half_delta_n():
    for n in (3, 7, 12):
        assert center_offset(1e-3, 50., 1000., n) == pytest.approx(
            tilt_offset_delta_n(n, 1e-3, 50., 1000.) / 2)


def test_center_offset_linear_in_tilt():
    assert center_offset(2e-4, 86.46, 1000.) == pytest.approx(2 * center_offset(1e-4, 86.46, 1000.))


def test_spot_x_closed_form_matches_iteration(fig1_cell):
    xs = spot_x_sequence(fig1_cell, 78)
    closed = [spot_x(n, fig1_cell) for n in range(78)]
    assert np.allclose(xs, closed, atol=1e-9)


def test_spot_x_linear_in_tilt(fig1_cell):
    flat = fig1_cell.clone(tilt=0., tilt_prime=0.)
    single = fig1_cell
    double = fig1_cell.clone(tilt=2 * fig1_cell.tilt, tilt_prime=2 * fig1_cell.tilt_prime)
    for n in (5, 20, 60):
        base = spot_x(n, flat)
        assert spot_x(n, double) - base == pytest.approx(2 * (spot_x(n, single) - base))


def test_first_spot_is_entry(fig1_cell):
    assert spot_x(0, fig1_cell) == pytest.approx(8.11)
    assert spot_y(0, fig1_cell) == pytest.approx(0)


def test_ellipse_closes_for_rational_angle():
    d = 1000. * (1 - np.cos(2 * np.pi / 10))
    cell = RecirculatingCellConfig(d=d, f2=1000., tilt=0., tilt_prime=0.,
                                   x0=5., y0=2., x0p=1e-3, y0p=2e-3)
    assert cell.theta == pytest.approx(2 * np.pi / 10)
    assert spot_x(10, cell) == pytest.approx(5.)
    assert spot_y(10, cell) == pytest.approx(2.)


def test_untilted_cell_never_exits(fig1_cell):
    with pytest.raises(NoExitError):
        geometric_reflections(fig1_cell.clone(tilt=0., tilt_prime=0.))


def test_unstable_cell_rejected():
    with pytest.raises(UnstableCavityError):
        RecirculatingCellConfig(d=2500., f2=1000.).validate()


def test_flat_far_mirror_rejected():
    with pytest.raises(InvalidGeometryError):
        RecirculatingCellConfig(f2=np.inf).validate()


def test_tilt_prime_defaults_to_opposite_tilt():
    cell = RecirculatingCellConfig(tilt=1e-3)
    assert cell.tilt_m1p == -1e-3


def test_circulation_index():
    theta = 0.4
    assert circulation_index(0, theta).mirror == 'M1'
    assert circulation_index(8, theta).mirror == "M1'"
    assert int(circulation_index(16, theta)) == 2
    with pytest.raises(DomainError):
        circulation_index(1, np.pi)


def test_mirror_changes_alternate(fig2d_cell):
    changes = mirror_changes(fig2d_cell, 30)
    assert changes[0] == (0, fig2d_cell.tilt)
    assert [n for n, _ in changes] == [0, 8, 15, 23]
    assert changes[1][1] == pytest.approx(fig2d_cell.tilt_m1p - fig2d_cell.tilt)
    assert changes[2][1] == pytest.approx(fig2d_cell.tilt - fig2d_cell.tilt_m1p)


def test_explicit_tilt_sequence_continues_alternating(fig2d_cell):
    cell = fig2d_cell.clone(tilt_sequence=[1e-4, -3e-4])
    steps = [step for _, step in mirror_changes(cell, 40)]
    assert steps[:4] == pytest.approx([1e-4, -3e-4, 3e-4, -3e-4])


def test_reflection_sweep_marks_failures(fig1_cell):
    grid = reflection_sweep(fig1_cell, [29.8, 2500.], [fig1_cell.y0p])
    assert grid.counts[0, 0] == 78
    assert grid.counts[1, 0] == -1


def test_sweep_plateau_spans_y0p_range(fig1_cell):
    y0p = np.radians(np.linspace(1., 3., 5))
    grid = reflection_sweep(fig1_cell, [29.8], y0p)
    found = plateaus(grid)
    assert len(found) == 1
    assert found[0].count == 78
    assert found[0].y0p_lo == pytest.approx(y0p[0])
    assert found[0].y0p_hi == pytest.approx(y0p[-1])


def test_beam_radius_sequence_starts_at_waist(fig1_cell):
    radii = beam_radius_sequence(fig1_cell, 10)
    assert radii.shape == (11, 2)
    assert radii[0] == pytest.approx([1., 1.])
    assert np.allclose(radii[:, 0], radii[:, 1])


def test_beam_radius_sequence_is_periodic_for_eigenmode():
    cell = RecirculatingCellConfig(d=30., f2=1000.)
    # q = i sqrt(-B/C) reproduces itself after every round trip
    z_r = np.sqrt((2 * 30. - 30.**2 / 1000.) * 1000.)
    waist = np.sqrt(cell.beam.wavelength * z_r / np.pi)
    cell = cell.clone(beam=BeamSpec(waist=waist))
    radii = beam_radius_sequence(cell, 5)
    assert np.allclose(radii, radii[0], rtol=1e-6)


@pytest.mark.parametrize('d', [30., 86.46])
def test_beam_radius_period_follows_theta(d):
    # w_n oscillates with 2 n theta, wider separations give shorter periods
    cell = RecirculatingCellConfig(d=d, f2=1000., beam=BeamSpec(waist=1.))
    w = beam_radius_sequence(cell, 1023)[:, 0]
    spectrum = np.abs(np.fft.rfft(w - w.mean()))
    period = len(w) / (np.argmax(spectrum[1:]) + 1)
    assert period == pytest.approx(np.pi / cell.theta, rel=0.05)


def test_spot_table_recirculating(fig1_cell):
    spots = spot_table(fig1_cell)
    assert len(spots) == 78
    assert spots[0].n == 0
    assert spots[0].mirror == 'M1'
    assert spots[0].x == pytest.approx(8.11)
    assert spots[0].w_xi == pytest.approx(1.)
    assert spots[-1].x < -fig1_cell.x0
    assert {s.mirror for s in spots} == {'M1', "M1'"}


def test_cylindrical_right_angle_decouples_by_rotation():
    split = cylindrical_round_trip(CylindricalCellConfig(twist=np.pi / 2))
    assert split.method == 'rotation'
    assert np.allclose(split.reconstruct(), split.matrix)
    assert split.m_xi.det == pytest.approx(1)


def test_cylindrical_twisted_uses_eigenbasis(twisted_cell):
    split = cylindrical_round_trip(twisted_cell)
    assert split.method == 'eigenbasis'
    assert np.allclose(split.reconstruct(), split.matrix, atol=1e-8)


@pytest.mark.parametrize('twist,angles', [(50, (0.7044, 1.4582)), (48, (0.6784, 1.4686))])
def test_lissajous_angles(twist, angles):
    cell = CylindricalCellConfig(f=50., d=30., twist=np.radians(twist))
    assert sorted(lissajous_angles(cell)) == pytest.approx(list(angles), abs=1e-3)


def test_cylindrical_blocks_are_stable(twisted_cell):
    split = cylindrical_round_trip(twisted_cell)
    for block in (split.m_xi, split.m_eta):
        assert 0 < stability_angle(block) < np.pi


def test_cylindrical_twist_range():
    with pytest.raises(InvalidGeometryError):
        CylindricalCellConfig(twist=0.).validate()
    with pytest.raises(InvalidGeometryError):
        CylindricalCellConfig(twist=2.).validate()


def test_spot_table_cylindrical(twisted_cell):
    spots = spot_table(twisted_cell)
    assert len(spots) == 2 * 21
    assert [s.mirror for s in spots[:4]] == ['M2', 'M1', 'M2', 'M1']
    assert spots[0].n == 1
    assert spots[0].x == pytest.approx(30 * twisted_cell.x0p)


def test_spot_table_rejects_single_pass():
    with pytest.raises(TypeError):
        spot_table(SinglePassConfig())


def test_single_pass_from_lens():
    cell = SinglePassConfig.from_lens(1., 1300., 45.)
    assert cell.focus_waist == pytest.approx(0.307163, abs=1e-6)
    assert cell.stigmatic


def test_single_pass_focus_outside_cell():
    with pytest.raises(InvalidGeometryError):
        SinglePassConfig(d=45., focus_z=30.).validate()
