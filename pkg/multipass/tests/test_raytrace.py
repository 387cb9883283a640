from __future__ import absolute_import, division, unicode_literals

import numpy as np
import pytest

from multipass._testing.util import slow
from multipass.errors import InvalidGeometryError
from multipass.geometry import spot_table
from multipass.io.state import state
from multipass.raytrace import (
    Ray3, Surface3, chief_ray, compare_to_analytic, launch_ray, recirculating_surfaces,
    reflect, sample_beam_rays, trace_cell
)


def _trace(cell, n_rays=1, seed=0, follow_chief=False):
    rays = sample_beam_rays(cell.beam, (cell.x0, cell.y0, cell.x0p, cell.y0p), n_rays, seed=seed)
    return trace_cell(recirculating_surfaces(cell), rays, max_hits=2000, exit_x=-cell.x0,
                      follow_chief=follow_chief)


def test_ray_direction_is_normalized():
    ray = Ray3((0, 0, 0), (0, 3, 4))
    assert np.linalg.norm(ray.direction) == pytest.approx(1)
    with pytest.raises(InvalidGeometryError):
        Ray3((0, 0, 0), (0, 0, 0))


def test_launch_ray_crosses_entry_point():
    ray = launch_ray(2., -1., 0.01, 0.02)
    assert ray.at_z(0) == pytest.approx([2., -1., 0.])


def test_plane_intersection_distance():
    plane = Surface3(kind='plane')
    s = plane.intersect(np.array([[0., 0., 5.]]), np.array([[0., 0., -1.]]))
    assert s[0] == pytest.approx(5.)


def test_plane_region_rejects_other_half():
    upper = Surface3(kind='plane', region='upper')
    s = upper.intersect(np.array([[0., -1., 5.]]), np.array([[0., 0., -1.]]))
    assert np.isinf(s[0])


def test_plane_ignores_rays_from_behind():
    plane = Surface3(kind='plane')
    s = plane.intersect(np.array([[0., 0., -5.]]), np.array([[0., 0., 1.]]))
    assert np.isinf(s[0])


def test_split_halves_take_every_ray_once(fig1_cell):
    upper, lower, _ = recirculating_surfaces(fig1_cell)
    # lines crossing z = 0 just either side of the seam, where the tilted
    # halves sit at different heights
    ys = np.array([-1e-3, -1e-6, 0., 1e-6, 1e-3])
    origins = np.column_stack([np.full(5, -7.7), ys + 0.02, np.ones(5)])
    dirs = np.tile([0., -0.02, -1.], (5, 1))
    hits_upper = np.isfinite(upper.intersect(origins, dirs))
    hits_lower = np.isfinite(lower.intersect(origins, dirs))
    assert (hits_upper ^ hits_lower).all()
    assert list(hits_upper) == [False, False, True, True, True]


def test_sphere_cap_intersection():
    cap = Surface3(kind='sphere', vertex=(0., 0., 30.), normal=(0., 0., -1.), radius=2000.)
    origins = np.array([[0., 0., 0.], [5., 0., 0.]])
    dirs = np.array([[0., 0., 1.], [0., 0., 1.]])
    s = cap.intersect(origins, dirs)
    assert s[0] == pytest.approx(30.)
    hit = origins[1] + s[1] * dirs[1]
    assert cap.residual(hit)[0] == pytest.approx(0, abs=1e-9)
    assert s[1] < 30.


def test_curved_surface_needs_radius():
    with pytest.raises(InvalidGeometryError):
        Surface3(kind='sphere')


def test_reflect_flips_normal_component():
    out = reflect(np.array([[0.6, 0., -0.8]]), np.array([[0., 0., 1.]]))
    assert out[0] == pytest.approx([0.6, 0., 0.8])


def test_chief_ray_matches_fig1_count(fig1_cell):
    trace = trace_cell(recirculating_surfaces(fig1_cell), [chief_ray(fig1_cell)],
                       max_hits=2000, exit_x=-fig1_cell.x0)
    assert trace.n_reflections == 78
    assert trace.exited[0]


def test_chief_ray_enters_on_m1(fig1_cell, fig2d_cell):
    for cell in (fig1_cell, fig2d_cell):
        name, point = _trace(cell).hits(0)[0]
        assert name == 'M1'
        assert point[:2] == pytest.approx([cell.x0, cell.y0], abs=1e-3)


def test_chief_ray_matches_fig1_spots(fig1_cell):
    report = compare_to_analytic(_trace(fig1_cell), spot_table(fig1_cell))
    assert report.count_match
    assert report.mean_error_mm < 0.05


def test_chief_ray_matches_fig2d_count(fig2d_cell):
    assert _trace(fig2d_cell).n_reflections == 135


def test_fig2d_spots_agree_up_to_the_seam(fig2d_cell):
    trace, spots = _trace(fig2d_cell), spot_table(fig2d_cell)
    report = compare_to_analytic(trace, spots[:15])
    assert report.mean_error_mm < 0.01
    # the 16th spot falls within a few microns of y = 0, so either half
    # may take it
    assert abs(trace.reflections[0, 15, 1]) < 0.01
    assert abs(spots[15].y) < 0.01


def test_sample_beam_rays_deterministic(fig1_cell):
    entry = (fig1_cell.x0, fig1_cell.y0, fig1_cell.x0p, fig1_cell.y0p)
    first = sample_beam_rays(fig1_cell.beam, entry, 20, seed=3)
    second = sample_beam_rays(fig1_cell.beam, entry, 20, seed=3)
    assert all(np.array_equal(a.origin, b.origin) for a, b in zip(first, second))
    assert first[0].at_z(0) == pytest.approx([fig1_cell.x0, fig1_cell.y0, 0.])


def test_sample_beam_rays_requires_a_ray(fig1_cell):
    with pytest.raises(ValueError):
        sample_beam_rays(fig1_cell.beam, (0, 0, 0, 0), 0)


def test_trace_rows_cover_every_hit(fig1_cell):
    trace = _trace(fig1_cell)
    rows = list(trace.rows())
    assert rows[0][:3] == (0, 0, 'M1')
    assert len(rows) == int((trace.surface_ids[:, 0] >= 0).sum())


def test_bundle_containment(fig1_cell):
    # rays straying across y = 0 pick up the opposite tilt kick
    report = compare_to_analytic(_trace(fig1_cell, n_rays=500), spot_table(fig1_cell))
    assert 0.57 <= report.containment_fraction <= 0.71


@slow
def test_bundle_containment_converges(fig1_cell):
    report = compare_to_analytic(_trace(fig1_cell, n_rays=10000), spot_table(fig1_cell))
    assert 0.62 <= report.containment_fraction <= 0.66


def test_follow_chief_containment(fig1_cell):
    trace = _trace(fig1_cell, n_rays=500, follow_chief=True)
    report = compare_to_analytic(trace, spot_table(fig1_cell))
    assert 0.8 <= report.containment_fraction <= 0.93


def test_follow_chief_keeps_chief_path(fig1_cell):
    alone = _trace(fig1_cell)
    bundle = _trace(fig1_cell, n_rays=50, follow_chief=True)
    n = alone.n_reflections
    assert bundle.n_reflections == n
    np.testing.assert_allclose(bundle.reflections[0, :n], alone.reflections[0, :n])


def test_count_mismatch_is_reported_not_raised(fig1_cell):
    report = compare_to_analytic(_trace(fig1_cell), spot_table(fig1_cell)[:70])
    assert not report.count_match
    assert report.n_reflections_analytic == 70
    assert any('Ray trace counts' in w for w in state.warnings)



def test_tilted_plane_adds_twice_its_tilt():
    tilt = np.radians(0.04)
    plane = Surface3(kind='plane', normal=(np.sin(tilt), 0., np.cos(tilt)))
    origins, dirs = np.array([[3., 0., 5.]]), np.array([[0., 0., -1.]])
    hit = origins + plane.intersect(origins, dirs)[:, None] * dirs
    out = reflect(dirs, plane.normals(hit))
    assert out[0, 0] / out[0, 2] == pytest.approx(2 * tilt, abs=1e-8)


def test_sphere_round_trip_matches_abcd():
    d, f2 = 29.8, 1000.
    surfaces = [Surface3(name='M1', kind='plane'),
                Surface3(name='M2', kind='sphere', vertex=(0., 0., d), normal=(0., 0., -1.),
                         radius=2 * f2)]
    trace = trace_cell(surfaces, [launch_ray(1., 0.5, 0., 0.)], max_hits=3)
    assert [name for name, _ in trace.hits(0)] == ['M1', 'M2', 'M1']
    assert trace.reflections[0, 1, :2] == pytest.approx((1 - d / f2) * np.array([1., 0.5]), abs=1e-6)


def test_trace_is_invariant_to_ray_order(fig1_cell):
    entry = (fig1_cell.x0, fig1_cell.y0, fig1_cell.x0p, fig1_cell.y0p)
    rays = sample_beam_rays(fig1_cell.beam, entry, 40, seed=2)
    surfaces = recirculating_surfaces(fig1_cell)
    forward = trace_cell(surfaces, rays, max_hits=2000, exit_x=-fig1_cell.x0)
    shuffled = trace_cell(surfaces, rays[:1] + rays[:0:-1], max_hits=2000, exit_x=-fig1_cell.x0)
    np.testing.assert_allclose(shuffled.centroids(), forward.centroids(), rtol=0, atol=1e-12)
    np.testing.assert_array_equal(shuffled.counts[1:], forward.counts[:0:-1])


def test_trace_is_invariant_to_surface_order(fig1_cell):
    surfaces = recirculating_surfaces(fig1_cell)
    rays = [chief_ray(fig1_cell)]
    forward = trace_cell(surfaces, rays, max_hits=2000, exit_x=-fig1_cell.x0)
    backward = trace_cell(surfaces[::-1], rays, max_hits=2000, exit_x=-fig1_cell.x0)
    assert [n for n, _ in backward.hits(0)] == [n for n, _ in forward.hits(0)]
    np.testing.assert_allclose(backward.reflections, forward.reflections, rtol=0, atol=1e-12)


def test_sampler_moments(fig1_cell):
    beam = fig1_cell.beam
    rays = sample_beam_rays(beam, (0., 0., 0., 0.), 10**5, seed=11)[1:]
    points = np.array([r.at_z(0) for r in rays])
    slopes = np.array([r.direction[:2] / -r.direction[2] for r in rays])
    assert points[:, :2].std(axis=0) == pytest.approx([beam.waist / 2.] * 2, rel=0.02)
    sigma_p = beam.wavelength / (2 * np.pi * beam.waist)
    assert slopes.std(axis=0) == pytest.approx([sigma_p] * 2, rel=0.02)
