"""
Geometric ray tracer for multipass cells. Mirrors are exact planes,
spherical caps and cylinders, rays reflect specularly, and bundles of
rays sampled from the Gaussian beam moments give spot centroids to
compare with the analytic spot table.
"""
from __future__ import absolute_import, division, unicode_literals

import math

from collections import namedtuple

import numpy as np
import param

from .errors import InvalidGeometryError
from .io.state import state

# Minimum path length between two hits in mm
_PATH_TOL = 1e-12

# Rays crossing the vertex plane this close below y = 0 still belong to the
# upper half of a split mirror
_SPLIT_TOL = 1e-9


#---------------------------------------------------------------------
# Value types
#---------------------------------------------------------------------

class Ray3(namedtuple('Ray3', 'origin direction')):
    """
    Ray with an origin (mm) and a unit direction.
    """

    __slots__ = ()

    def __new__(cls, origin, direction):
        origin = np.asarray(origin, dtype=float)
        direction = np.asarray(direction, dtype=float)
        norm = np.linalg.norm(direction)
        if norm == 0:
            raise InvalidGeometryError('Ray direction must be non-zero.')
        return super(Ray3, cls).__new__(cls, origin, direction / norm)

    def at_z(self, z):
        """Point where the ray crosses the plane at axial position z."""
        s = (z - self.origin[2]) / self.direction[2]
        return self.origin + s * self.direction


def launch_ray(x, y, xp, yp, standoff=1.0):
    """
    Ray that reflects off the entry mirror plane z = 0 at (x, y) and
    leaves it with slopes (xp, yp) when the mirror is untilted. It
    starts `standoff` mm in front of the plane.
    """
    return Ray3((x - standoff * xp, y - standoff * yp, standoff), (xp, yp, -1.))


class Surface3(param.Parameterized):
    """
    Mirror surface of a cell. Planes are given by a vertex and a unit
    normal; spheres and cylinders by their vertex, the unit normal at
    the vertex (pointing towards the centre of curvature) and the
    radius of curvature. Cylinders curve along the transverse azimuth.
    """

    kind = param.ObjectSelector(default='plane', objects=['plane', 'sphere', 'cylinder'])

    vertex = param.NumericTuple(default=(0., 0., 0.), length=3, doc="Vertex in mm.")

    normal = param.NumericTuple(default=(0., 0., 1.), length=3, doc="Unit normal at the vertex.")

    radius = param.Number(default=np.inf, doc="""
        Radius of curvature in mm (R = 2 f for mirrors).""")

    azimuth = param.Number(default=0.0, doc="""
        Azimuth in rad of the curved direction of a cylinder.""")

    half_aperture = param.Number(default=np.inf, bounds=(0, None), doc="""
        Largest distance in mm of a valid hit from the vertex axis.""")

    region = param.ObjectSelector(default=None, objects=[None, 'upper', 'lower'], doc="""
        Restricts hits to rays crossing the plane z = vertex z at y >= 0
        ('upper') or y < 0 ('lower'). The halves of a split mirror
        tilted about different axes sit at different heights off the
        seam, so judging by the crossing rather than by the hit point
        gives every ray exactly one half.""")

    def __init__(self, **params):
        super(Surface3, self).__init__(**params)
        if self.kind != 'plane' and not (np.isfinite(self.radius) and self.radius != 0):
            raise InvalidGeometryError('%s %s needs a finite, non-zero radius of '
                                       'curvature.' % (self.kind.capitalize(), self.name))
        self._n = np.asarray(self.normal, dtype=float)
        self._n = self._n / np.linalg.norm(self._n)
        self._v = np.asarray(self.vertex, dtype=float)
        self._c = self._v + self.radius * self._n if self.kind != 'plane' else None
        self._a = np.array([-np.sin(self.azimuth), np.cos(self.azimuth), 0.])

    def _seam_y(self, origins, directions):
        """y where each ray line crosses the plane z = vertex z."""
        dz = directions[:, 2]
        with np.errstate(divide='ignore', invalid='ignore'):
            s = (self._v[2] - origins[:, 2]) / dz
        return np.where(dz != 0, origins[:, 1] + s * directions[:, 1], origins[:, 1])

    def _accept(self, points, seam_y=None):
        rel = points - self._v
        off_axis = rel - (rel @ self._n)[:, None] * self._n
        ok = np.linalg.norm(off_axis, axis=1) <= self.half_aperture
        if seam_y is None:
            return ok
        if self.region == 'upper':
            ok &= seam_y >= -_SPLIT_TOL
        elif self.region == 'lower':
            ok &= seam_y < -_SPLIT_TOL
        return ok

    def intersect(self, origins, directions, regions=True):
        """
        Path lengths to the nearest valid hit of each ray, inf for rays
        that miss. With regions=False the half-plane restriction is
        ignored. Planes reflect only rays arriving against their normal.
        """
        seam_y = self._seam_y(origins, directions) if regions and self.region else None
        if self.kind == 'plane':
            denom = directions @ self._n
            with np.errstate(divide='ignore', invalid='ignore'):
                s = ((self._v - origins) @ self._n) / denom
            candidates = [np.where(denom < 0, s, np.inf)]
        else:
            rel, dirs = origins - self._c, directions
            if self.kind == 'cylinder':
                rel = rel - (rel @ self._a)[:, None] * self._a
                dirs = dirs - (dirs @ self._a)[:, None] * self._a
            a = np.einsum('ij,ij->i', dirs, dirs)
            b = np.einsum('ij,ij->i', dirs, rel)
            c = np.einsum('ij,ij->i', rel, rel) - self.radius**2
            disc = b**2 - a * c
            root = np.sqrt(np.where(disc >= 0, disc, np.nan))
            with np.errstate(divide='ignore', invalid='ignore'):
                candidates = [(-b - root) / a, (-b + root) / a]
        best = np.full(len(origins), np.inf)
        for s in candidates:
            s = np.where(np.isfinite(s) & (s > _PATH_TOL), s, np.inf)
            points = origins + np.where(np.isfinite(s), s, 0)[:, None] * directions
            valid = np.isfinite(s) & self._accept(points, seam_y)
            if self.kind != 'plane':
                # only the cap on the vertex side of the centre
                valid &= (points - self._c) @ self._n < 0
            best = np.where(valid & (s < best), s, best)
        return best

    def normals(self, points):
        if self.kind == 'plane':
            return np.broadcast_to(self._n, points.shape)
        rel = points - self._c
        if self.kind == 'cylinder':
            rel = rel - (rel @ self._a)[:, None] * self._a
        return rel / np.linalg.norm(rel, axis=1)[:, None]

    def residual(self, points):
        """Distance of points from the surface (mm)."""
        points = np.atleast_2d(points)
        if self.kind == 'plane':
            return np.abs((points - self._v) @ self._n)
        rel = points - self._c
        if self.kind == 'cylinder':
            rel = rel - (rel @ self._a)[:, None] * self._a
        return np.abs(np.linalg.norm(rel, axis=1) - abs(self.radius))


def reflect(directions, normals):
    """Specular reflection d - 2 (d . n) n."""
    dots = np.einsum('ij,ij->i', directions, normals)
    return directions - 2 * dots[:, None] * normals


class TraceResult(namedtuple('TraceResult', 'names surface_ids points reflections counts exited escaped')):
    """
    Hits of a traced ray bundle.

    surface_ids and points hold, per step and ray, the index of the
    surface hit (-1 once the ray stopped) and the hit point. reflections
    holds the hits on the counting surfaces per ray, NaN past the last
    one, counts the number of such hits, exited whether the ray met the
    exit criterion and escaped whether it left the cell otherwise.
    """

    __slots__ = ()

    @property
    def n_rays(self):
        return len(self.counts)

    @property
    def n_reflections(self):
        """Number of counted reflections of the chief ray."""
        return int(self.counts[0])

    def hits(self, ray):
        """Ordered (surface name, point) pairs of one ray."""
        ids = self.surface_ids[:, ray]
        return [(self.names[i], self.points[j, ray]) for j, i in enumerate(ids) if i >= 0]

    def centroids(self):
        """
        Mean hit position per counted reflection over the rays that
        reached it, summed with compensated summation so the result
        does not depend on ray order.
        """
        out = np.full((self.reflections.shape[1], 3), np.nan)
        for j in range(self.reflections.shape[1]):
            pts = self.reflections[:, j]
            pts = pts[~np.isnan(pts[:, 0])]
            if len(pts):
                out[j] = [math.fsum(pts[:, i]) / len(pts) for i in range(3)]
        return out

    def spreads(self):
        """RMS transverse distance of the hits from their centroid."""
        cents = self.centroids()
        out = np.full(len(cents), np.nan)
        for j, c in enumerate(cents):
            pts = self.reflections[:, j]
            pts = pts[~np.isnan(pts[:, 0])]
            if len(pts):
                out[j] = math.sqrt(math.fsum(((pts[:, :2] - c[:2])**2).sum(axis=1)) / len(pts))
        return out

    def rows(self):
        """Export rows (ray_id, hit_index, surface, x_mm, y_mm, z_mm)."""
        for ray in range(self.n_rays):
            for j, (name, p) in enumerate(self.hits(ray)):
                yield (ray, j, name, p[0], p[1], p[2])


class TraceReport(namedtuple('TraceReport', 'n_reflections n_reflections_analytic count_match '
                             'mean_error_mm max_error_mm containment_fraction containment')):
    """
    Comparison of traced spot centroids with an analytic spot table.
    """

    __slots__ = ()

    def as_dict(self):
        return {'n_reflections': self.n_reflections,
                'n_reflections_analytic': self.n_reflections_analytic,
                'count_match': self.count_match,
                'mean_error_mm': self.mean_error_mm,
                'max_error_mm': self.max_error_mm,
                'containment_fraction': self.containment_fraction}


#---------------------------------------------------------------------
# Public API
#---------------------------------------------------------------------

def sample_beam_rays(beam, entry, n_rays, seed=0):
    """
    Samples rays of a Gaussian beam launched at its waist on the entry
    mirror. The first ray is the chief ray given by entry = (x0, y0,
    x0', y0'); the others add independent Gaussian offsets with
    standard deviation w0/2 in position and lambda/(2 pi w0) in slope
    along each axis.
    """
    if n_rays < 1:
        raise ValueError('At least one ray is required, got %d.' % n_rays)
    x0, y0, x0p, y0p = entry
    rng = np.random.Generator(np.random.Philox(seed))
    sigma = beam.waist / 2.
    sigma_p = beam.wavelength / (2 * np.pi * beam.waist)
    jitter = np.zeros((n_rays, 4))
    jitter[1:, :2] = rng.normal(0, sigma, (n_rays - 1, 2))
    jitter[1:, 2:] = rng.normal(0, sigma_p, (n_rays - 1, 2))
    return [launch_ray(x0 + dx, y0 + dy, x0p + dxp, y0p + dyp)
            for dx, dy, dxp, dyp in jitter]


def recirculating_surfaces(cfg, half_aperture=np.inf):
    """
    M1 and M1' (the upper and lower halves of the entry plane z = 0,
    rotated about the y axis by tilt and tilt_prime) and the spherical
    cap M2 of radius 2 f2 at z = d.
    """
    cfg.validate()
    return [
        Surface3(name='M1', kind='plane', region='upper',
                 normal=(np.sin(cfg.tilt), 0., np.cos(cfg.tilt))),
        Surface3(name="M1'", kind='plane', region='lower',
                 normal=(np.sin(cfg.tilt_m1p), 0., np.cos(cfg.tilt_m1p))),
        Surface3(name='M2', kind='sphere', vertex=(0., 0., cfg.d), normal=(0., 0., -1.),
                 radius=2 * cfg.f2, half_aperture=half_aperture),
    ]


def chief_ray(cfg):
    """Launch ray through the entry position and slopes of a cell."""
    return launch_ray(cfg.x0, cfg.y0, cfg.x0p, cfg.y0p)


def trace_cell(surfaces, rays, max_hits=1000, counting=('M1', "M1'"), exit_x=None,
               follow_chief=False):
    """
    Traces rays through a set of surfaces. Each step moves every live
    ray to its nearest valid hit and reflects it. Hits on the counting
    surfaces are numbered as reflections; a ray stops after a counted
    reflection (other than the first) with x < exit_x, when it misses
    every surface (escaped) or after max_hits hits (escaped).

    By default each ray meets the half of a split mirror its own path
    selects. follow_chief is a diagnostic: the n-th counted reflection
    of every ray then lands on the counting surface the chief ray (the
    first) met at its n-th counted reflection, which separates spot
    spreading from rays changing halves. Reflections past the chief
    ray's last one fall back to the surface regions.
    """
    names = [s.name for s in surfaces]
    counting_ids = [i for i, name in enumerate(names) if name in counting]
    sequence = None
    if follow_chief and len(rays) > 1:
        chief = trace_cell(surfaces, rays[:1], max_hits, counting, exit_x)
        ids = chief.surface_ids[:, 0]
        sequence = ids[np.isin(ids, counting_ids)]
    origins = np.array([r.origin for r in rays], dtype=float)
    dirs = np.array([r.direction for r in rays], dtype=float)
    n = len(rays)
    live = np.ones(n, dtype=bool)
    exited = np.zeros(n, dtype=bool)
    counts = np.zeros(n, dtype=int)
    surface_ids, points, reflections = [], [], []
    last = np.full(n, -1)
    for _ in range(int(max_hits)):
        if not live.any():
            break
        paths = np.stack([s.intersect(origins, dirs) for s in surfaces])
        if sequence is not None and len(sequence):
            assigned = np.where(counts < len(sequence),
                                sequence[np.minimum(counts, len(sequence) - 1)], -1)
            follow = assigned >= 0
            for i in counting_ids:
                relaxed = surfaces[i].intersect(origins, dirs, regions=False)
                paths[i, follow] = np.where((assigned == i)[follow], relaxed[follow], np.inf)
        # a ray never hits the surface it just left
        paths[last[last >= 0], np.nonzero(last >= 0)[0]] = np.inf
        which = np.argmin(paths, axis=0)
        nearest = paths[which, np.arange(n)]
        live &= np.isfinite(nearest)
        hit = np.where(live[:, None], origins + np.where(live, nearest, 0)[:, None] * dirs, np.nan)
        ids = np.where(live, which, -1)
        normals = np.zeros_like(dirs)
        for i, surface in enumerate(surfaces):
            mask = ids == i
            if mask.any():
                normals[mask] = surface.normals(hit[mask])
        dirs = np.where(live[:, None], reflect(dirs, normals), dirs)
        origins = np.where(live[:, None], hit, origins)
        surface_ids.append(ids)
        last = ids
        points.append(hit)
        counted = live & np.isin(ids, counting_ids)
        row = np.full((n, 3), np.nan)
        row[counted] = hit[counted]
        if counted.any():
            reflections.append((counts.copy(), row))
        if exit_x is not None:
            done = counted & (counts >= 1) & (hit[:, 0] < exit_x)
            exited |= done
            live &= ~done
        counts += counted
    escaped = ~exited
    n_refl = counts.max() if n else 0
    table = np.full((n, n_refl, 3), np.nan)
    for index, row in reflections:
        ok = ~np.isnan(row[:, 0])
        table[np.nonzero(ok)[0], index[ok]] = row[ok]
    if escaped.any():
        state.log(None, '%d of %d rays left the cell without meeting the exit criterion.',
                  int(escaped.sum()), n)
    return TraceResult(names, np.array(surface_ids).reshape(-1, n), np.array(points).reshape(-1, n, 3),
                       table, counts, exited, escaped)


def compare_to_analytic(trace, spots):
    """
    Compares traced centroids with analytic spot positions over the
    reflections both share, and counts the rays falling inside the
    analytic 1/e^2 beam ellipse of each spot. A count mismatch is
    reported (and logged), not raised.
    """
    n_trace, n_spots = trace.n_reflections, len(spots)
    count = min(n_trace, n_spots, trace.reflections.shape[1])
    if n_trace != n_spots:
        state.warn(None, 'Ray trace counts %d reflections, the analytic model %d.',
                   n_trace, n_spots)
    cents = trace.centroids()[:count]
    analytic = np.array([[s.x, s.y] for s in spots[:count]]).reshape(-1, 2)
    errors = np.hypot(*(cents[:, :2] - analytic).T) if count else np.array([])
    containment = np.full(count, np.nan)
    inside_total, seen_total = 0, 0
    for j, spot in enumerate(spots[:count]):
        pts = trace.reflections[:, j, :2]
        pts = pts[~np.isnan(pts[:, 0])]
        inside = np.sum(((pts[:, 0] - spot.x) / spot.w_xi)**2 + ((pts[:, 1] - spot.y) / spot.w_eta)**2 <= 1)
        containment[j] = inside / len(pts) if len(pts) else np.nan
        inside_total += inside
        seen_total += len(pts)
    return TraceReport(n_trace, n_spots, n_trace == n_spots,
                       float(math.fsum(errors) / count) if count else np.nan,
                       float(errors.max()) if count else np.nan,
                       float(inside_total / seen_total) if seen_total else np.nan,
                       containment)
