"""
Cell geometry: spot positions, tilt-induced offsets, circulation
bookkeeping and reflection counts of the recirculating cell, the 4x4
round trip of the twisted cylindrical cell and the single-pass
reference cell.

Spots are indexed from the entry reflection n = 0 on the entry mirror
plane. The recirculating cell is unfolded so that every round trip
starts just after a reflection on M1 or M1', travels d to the far mirror
M2 and d back. M1 (upper half, y > 0 at entry) and M1' (lower half) are
flat and rotated about the y axis by tilt and tilt_prime; a rotation by
theta kicks the reflected slope by 2 theta.
"""
from __future__ import absolute_import, division, unicode_literals

from collections import namedtuple

import numpy as np
import param

from scipy import optimize

from .config import config
from .errors import (
    DecouplingError, DomainError, InvalidGeometryError, NoExitError,
    UnstableCavityError
)
from .io.state import state
from .optics import (
    BeamSpec, TransferMatrix2, beam_matrix, compose_round_trip,
    cylindrical_mirror4, focused_waist, mirror4, mirror_astigmatic_focals, principal_parts,
    propagate_beam_matrix, propagation4, rotation4, stability_angle
)
from .util import sine_sum


#---------------------------------------------------------------------
# Value types
#---------------------------------------------------------------------

class CirculationIndex(namedtuple('CirculationIndex', 'k')):
    """
    Number of half circulations k = floor(n theta / pi) completed at
    reflection n. Even k reflect on M1, odd k on M1'.
    """

    __slots__ = ()

    @property
    def mirror(self):
        return 'M1' if self.k % 2 == 0 else "M1'"

    def __int__(self):
        return self.k


#: One reflection of the beam: index, mirror label, spot position (mm),
#: principal beam radii (mm), principal beam parameters and the full
#: complex beam matrix.
SpotRecord = namedtuple('SpotRecord', 'n mirror x y w_xi w_eta q_xi q_eta Q')

#: Reflection counts over a grid of mirror separations (rows) and entry
#: slopes y0' (columns); -1 marks configurations without a valid count.
SweepGrid = namedtuple('SweepGrid', 'd y0p counts')

#: Longest run of constant reflection count along y0' at separation d.
Plateau = namedtuple('Plateau', 'd y0p_lo y0p_hi count')


class RoundTrip4(namedtuple('RoundTrip4', 'm_xi m_eta azimuth basis matrix method')):
    """
    Decoupled 4x4 round trip: two 2x2 unit-determinant blocks acting in
    the basis whose columns are given by `basis` (layout x, y, x', y'),
    so that matrix = basis . blocks . basis^-1. method is 'rotation'
    when a transverse rotation by azimuth splits the round trip into
    physical axes and 'eigenbasis' when the split uses the real
    eigenbasis of the round trip.
    """

    __slots__ = ()

    def reconstruct(self):
        return self.basis @ block_diag4(self.m_xi, self.m_eta) @ np.linalg.inv(self.basis)


class _CellConfig(param.Parameterized):

    beam = param.ClassSelector(class_=BeamSpec, default=BeamSpec(), instantiate=True, doc="""
        Probe beam entering the cell.""")

    def clone(self, **overrides):
        params = {k: v for k, v in self.param.values().items() if k != 'name'}
        params.update(overrides)
        return type(self)(**params)

    def round_trip4(self):
        """
        4x4 round trip starting just after the entry mirror.
        """
        prop = propagation4(self.d)
        return self.near_mirror4() @ prop @ self.far_mirror4() @ prop

    def beam_matrices(self, count):
        """
        Complex beam matrices at the start of the first `count` round
        trips, i.e. just after each reflection on the entry mirror.
        """
        near, far, prop = self.near_mirror4(), self.far_mirror4(), propagation4(self.d)
        Q, out = self.initial_beam_matrix(), []
        for _ in range(int(count)):
            out.append(Q)
            Q = propagate_beam_matrix(propagate_beam_matrix(Q, prop), far)
            Q = propagate_beam_matrix(propagate_beam_matrix(Q, prop), near)
        return out


class RecirculatingCellConfig(_CellConfig):
    """
    Recirculating cell: a flat entry mirror split into two halves M1 and
    M1' rotated in opposite directions about the y axis, facing a
    spherical mirror M2 of focal length f2 at distance d.
    """

    f2 = param.Number(default=1000.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Focal length of the far mirror M2 in mm.""")

    d = param.Number(default=29.8, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Mirror separation in mm.""")

    tilt = param.Number(default=np.radians(0.04), doc="""
        Rotation theta_x of M1 about the y axis in rad.""")

    tilt_prime = param.Number(default=None, allow_None=True, doc="""
        Rotation theta_x' of M1' in rad; defaults to -tilt (opposite
        rotation).""")

    tilt_sequence = param.List(default=None, allow_None=True, doc="""
        Explicit tilt changes theta_j at successive mirror changes,
        starting with the entry reflection. Past its end the sequence
        continues by alternating the sign of its last entry.""")

    x0 = param.Number(default=8.11, doc="Entry position x_0 in mm.")

    y0 = param.Number(default=0.0, doc="Entry position y_0 in mm.")

    x0p = param.Number(default=np.radians(-0.26), doc="Entry slope x_0' in rad.")

    y0p = param.Number(default=np.radians(2.21), doc="Entry slope y_0' in rad.")

    incidence = param.Number(default=0.0, doc="""
        Angle of incidence on M2 in rad. When non-zero the M2 reflection
        focuses with f2 cos(phi) along x and f2 / cos(phi) along y.""")

    passes = param.Integer(default=None, allow_None=True, bounds=(1, None), doc="""
        Number of round trips followed by the spin-noise model; defaults
        to the total number of reflections.""")

    def validate(self):
        if not np.isfinite(self.f2):
            raise InvalidGeometryError('The far mirror of a recirculating cell '
                                       'must be curved, got f2=%s mm.' % self.f2)
        if not self.d < 2 * self.f2:
            raise UnstableCavityError('Cell with d=%s mm and f2=%s mm is unstable; '
                                      'require 0 < d < 2 f2.' % (self.d, self.f2))
        if not abs(self.incidence) < np.pi / 2:
            raise InvalidGeometryError('Incidence on M2 must satisfy |phi| < pi/2, '
                                       'got %s rad.' % self.incidence)
        return self

    @property
    def tilt_m1p(self):
        return -self.tilt if self.tilt_prime is None else self.tilt_prime

    @property
    def arm(self):
        """sqrt(2 d f2 - d^2), the slope-to-position lever of the cell in mm."""
        return float(np.sqrt(2 * self.d * self.f2 - self.d**2))

    @property
    def theta(self):
        return stability_angle(compose_round_trip(np.inf, self.f2, self.d))

    @property
    def phase(self):
        """Phase beta of y_n = Y sin(n theta + beta)."""
        return float(np.arctan2(self.y0, self.arm * self.y0p))

    def near_mirror4(self):
        return np.eye(4)

    def far_mirror4(self):
        return mirror4(*mirror_astigmatic_focals(self.f2, self.incidence))

    def initial_beam_matrix(self):
        q0 = self.beam.q0
        return beam_matrix(q0, q0)


class CylindricalCellConfig(_CellConfig):
    """
    Cylindrical cell: two cylindrical mirrors of equal focal length whose
    curved axes are twisted by a relative angle, with the beam entering
    through the centre of M1.
    """

    f = param.Number(default=50.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Focal length of both cylindrical mirrors in mm.""")

    twist = param.Number(default=np.radians(50), doc="""
        Twist angle theta_t between the curved axes in rad.""")

    d = param.Number(default=30.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Mirror separation in mm.""")

    round_trips = param.Integer(default=78, bounds=(1, None), doc="""
        Number of round trips followed.""")

    waist_xi = param.Number(default=1.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Entry waist along the xi axis in mm.""")

    waist_eta = param.Number(default=1.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Entry waist along the eta axis in mm.""")

    x0 = param.Number(default=0.0, doc="Entry position x_0 in mm.")

    y0 = param.Number(default=0.0, doc="Entry position y_0 in mm.")

    x0p = param.Number(default=0.05, doc="Entry slope x_0' in rad.")

    y0p = param.Number(default=0.03, doc="Entry slope y_0' in rad.")

    @property
    def passes(self):
        return self.round_trips

    def validate(self):
        if not 0 < self.twist <= np.pi / 2:
            raise InvalidGeometryError('Twist angle must satisfy 0 < theta_t <= pi/2, '
                                       'got %s rad.' % self.twist)
        return self

    def near_mirror4(self):
        return cylindrical_mirror4(self.f, 0.0)

    def far_mirror4(self):
        return cylindrical_mirror4(self.f, self.twist)

    def initial_beam_matrix(self):
        lam, z = self.beam.wavelength, self.beam.z
        return beam_matrix(complex(z, np.pi * self.waist_xi**2 / lam),
                           complex(z, np.pi * self.waist_eta**2 / lam))


class SinglePassConfig(param.Parameterized):
    """
    Single straight pass through a cell of length d with the beam waist
    placed at focus_z, measured from the cell centre. Astigmatic beams
    give a separate waist and focus position for the eta axis.
    """

    d = param.Number(default=45.0, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Cell length in mm; the pass spans [-d/2, d/2].""")

    focus_waist = param.Number(default=0.05, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Waist radius at the focus in mm.""")

    focus_z = param.Number(default=0.0, doc="Focus position in mm.")

    waist_eta = param.Number(default=None, allow_None=True, bounds=(0, None),
                             inclusive_bounds=(False, True), doc="""
        Waist along the eta axis in mm for astigmatic beams.""")

    focus_z_eta = param.Number(default=None, allow_None=True, doc="""
        Focus position of the eta axis in mm.""")

    beam = param.ClassSelector(class_=BeamSpec, default=BeamSpec(), instantiate=True, doc="""
        Probe beam; only its wavelength is used.""")

    passes = 1

    @classmethod
    def from_lens(cls, w_in, focal, d, wavelength=780e-6, **params):
        """
        Single pass focused by a lens of focal length `focal` acting on a
        collimated beam of waist w_in.
        """
        return cls(d=d, focus_waist=focused_waist(w_in, focal, wavelength),
                   beam=BeamSpec(wavelength=wavelength, waist=w_in), **params)

    @property
    def stigmatic(self):
        return self.waist_eta is None and self.focus_z_eta is None

    def validate(self):
        for z in (self.focus_z, self.focus_z_eta):
            if z is not None and not -self.d / 2. <= z <= self.d / 2.:
                raise InvalidGeometryError('Focus at z=%s mm lies outside the cell '
                                           '[-%s, %s] mm.' % (z, self.d / 2., self.d / 2.))
        return self

    def entry_beam_matrix(self):
        """Beam matrix at the entry face z = -d/2."""
        lam = self.beam.wavelength
        w_eta = self.focus_waist if self.waist_eta is None else self.waist_eta
        z_eta = self.focus_z if self.focus_z_eta is None else self.focus_z_eta
        q_xi = complex(-self.d / 2. - self.focus_z, np.pi * self.focus_waist**2 / lam)
        q_eta = complex(-self.d / 2. - z_eta, np.pi * w_eta**2 / lam)
        return beam_matrix(q_xi, q_eta)


#---------------------------------------------------------------------
# Recirculating cell
#---------------------------------------------------------------------

def _cell_angle(d, f2):
    return stability_angle(compose_round_trip(np.inf, f2, d))


def spot_y(n, cfg):
    """
    y position of spot n: y_n = y_0 cos(n theta) + sqrt(2 d f2 - d^2) y_0' sin(n theta).
    """
    theta = cfg.validate().theta
    return float(cfg.y0 * np.cos(n * theta) + cfg.arm * cfg.y0p * np.sin(n * theta))


def tilt_offset_delta_n(n, theta_x, d, f2):
    """
    Offset of the n-th spot after a half turn about the optical centre
    produced by a mirror rotated by theta_x:
    Delta_n = 2 theta_x sqrt(2 d f2 - d^2) sum_{i=1..n} sin(i theta).
    """
    theta = _cell_angle(d, f2)
    return float(2 * theta_x * np.sqrt(2 * d * f2 - d**2) * sine_sum(n, theta))


def center_offset(theta_x, d, f2, n=None):
    """
    Offset Delta_x of the optical centre produced by a mirror rotated by
    theta_x, evaluated over the n reflections of one half circulation
    (floor(pi / theta) by default). Equals Delta_n / 2 for the same n.
    """
    theta = _cell_angle(d, f2)
    if n is None:
        n = int(np.floor(np.pi / theta))
    return float(theta_x * np.sqrt(2 * d * f2 - d**2) * sine_sum(n, theta))


def circulation_index(n, theta, phase=0.0):
    """
    Returns the CirculationIndex k = floor((n theta + phase) / pi).
    """
    if not 0 < theta < np.pi:
        raise DomainError('Stability angle must lie in (0, pi), got %s rad.' % theta)
    return CirculationIndex(int(np.floor((n * theta + phase) / np.pi)))


def mirror_changes(cfg, n):
    """
    Returns the (n_j, theta_j) pairs of mirror changes occurring before
    reflection n, starting with the entry reflection n_0 = 0. theta_j is
    the change in mirror tilt seen by the beam at reflection n_j, i.e.
    theta_x, theta_x' - theta_x, theta_x - theta_x', ... unless an
    explicit tilt sequence is configured.
    """
    theta, phase = cfg.theta, cfg.phase
    tilts = (cfg.tilt, cfg.tilt_m1p)
    explicit = list(cfg.tilt_sequence or [])
    changes, previous = [], None
    for i in range(int(n)):
        parity = circulation_index(i, theta, phase).k % 2
        if parity == previous:
            continue
        j = len(changes)
        if j < len(explicit):
            step = explicit[j]
        elif explicit:
            step = explicit[-1] * (-1) ** (j - len(explicit) + 1)
        else:
            step = tilts[parity] - (0 if previous is None else tilts[previous])
        changes.append((i, step))
        previous = parity
    return changes


def spot_x(n, cfg):
    """
    x position of spot n on the entry mirror plane:
    x_n = x_0 cos(n theta) + sqrt(2 d f2 - d^2) x_0' sin(n theta)
          + 2 sqrt(2 d f2 - d^2) sum_j theta_j sum_{i=1..m_j} sin(i theta)
    with m_j = n - n_j.
    """
    theta = cfg.validate().theta
    arm = cfg.arm
    x = cfg.x0 * np.cos(n * theta) + arm * cfg.x0p * np.sin(n * theta)
    for n_j, theta_j in mirror_changes(cfg, n):
        x += 2 * arm * theta_j * sine_sum(n - n_j, theta)
    return float(x)


def _tilt_per_reflection(cfg, count):
    changes = dict(mirror_changes(cfg, count))
    tilts, current = np.zeros(count), 0.
    for i in range(count):
        current += changes.get(i, 0.)
        tilts[i] = current
    return tilts


def spot_x_sequence(cfg, count):
    """
    x positions of spots 0..count-1 obtained by iterating the round
    trip with a slope kick of twice the mirror tilt at every reflection.
    """
    cfg.validate()
    m = compose_round_trip(np.inf, cfg.f2, cfg.d)
    tilts = _tilt_per_reflection(cfg, count)
    x, slope, out = cfg.x0, cfg.x0p, np.empty(count)
    for i in range(count):
        out[i] = x
        x, slope = m.apply(x, slope + 2 * tilts[i])
    return out


def _is_tilted(cfg):
    if cfg.tilt_sequence:
        return any(cfg.tilt_sequence)
    return cfg.tilt != 0 or cfg.tilt_m1p != 0


def geometric_reflections(cfg):
    """
    Counts the reflections on the entry mirror plane up to and including
    the first spot (after the entry) with x_n < -x_0.
    """
    cfg.validate()
    if not _is_tilted(cfg):
        raise NoExitError('Untilted mirrors never let the beam recirculate '
                          'out of the cell.')
    limit = config.max_reflections
    xs = spot_x_sequence(cfg, limit)
    exits = np.nonzero(xs[1:] < -cfg.x0)[0]
    if not len(exits):
        raise NoExitError('No spot reached x < -x0 = %s mm within %d reflections.'
                          % (-cfg.x0, limit))
    return int(exits[0]) + 2


def closed_form_reflections(cfg):
    """
    Closed-form count n_R = (2 pi / theta) ceil(x_0 / (2 Delta)) with
    Delta the optical-centre offset of one half circulation.
    """
    cfg.validate()
    if not cfg.x0 > 0:
        raise InvalidGeometryError('Entry position x0 must be positive, got %s mm.' % cfg.x0)
    delta = abs(center_offset(cfg.tilt, cfg.d, cfg.f2))
    if delta == 0:
        raise NoExitError('Untilted mirrors never let the beam recirculate '
                          'out of the cell.')
    return int(round(2 * np.pi / cfg.theta * np.ceil(cfg.x0 / (2 * delta))))


def total_reflections(cfg, mode='geometric'):
    """
    Total number of reflections on the entry mirror before the beam
    exits. The geometric count is authoritative; the closed form is
    computed alongside and a disagreement is logged.
    """
    counters = {'geometric': geometric_reflections,
                'closed_form': closed_form_reflections}
    if mode not in counters:
        raise ValueError('Reflection count mode must be one of %s, got %r.'
                         % (sorted(counters), mode))
    count = counters[mode](cfg)
    other = 'closed_form' if mode == 'geometric' else 'geometric'
    try:
        alternative = counters[other](cfg)
    except NoExitError:
        alternative = None
    if alternative is not None and alternative != count:
        state.warn(cfg, 'Reflection counts disagree: %s gives %d, %s gives %d.',
                   mode, count, other, alternative)
    return count


def stability_summary(cfg):
    """
    Derived quantities of a recirculating cell as a plain dictionary.
    """
    theta = cfg.validate().theta
    half = int(np.floor(np.pi / theta))
    summary = {
        'theta_rad': theta,
        'reflections_per_circulation': int(round(2 * np.pi / theta)),
        'circulation_period': 2 * np.pi / theta,
        'reflections_per_half_circulation': half,
        'delta_n_mm': tilt_offset_delta_n(half, cfg.tilt, cfg.d, cfg.f2),
        'delta_x_mm': center_offset(cfg.tilt, cfg.d, cfg.f2, half),
    }
    for mode, counter in (('geometric', geometric_reflections),
                          ('closed_form', closed_form_reflections)):
        try:
            summary['n_reflections_%s' % mode] = counter(cfg)
        except NoExitError:
            summary['n_reflections_%s' % mode] = None
    return summary


def reflection_sweep(cfg, d_values, y0p_values):
    """
    Geometric reflection counts over a grid of mirror separations and
    entry slopes y0'. Unstable or non-exiting configurations are
    recorded as -1.
    """
    d_values = np.asarray(d_values, dtype=float).ravel()
    y0p_values = np.asarray(y0p_values, dtype=float).ravel()
    counts = np.full((len(d_values), len(y0p_values)), -1, dtype=int)
    for i, d in enumerate(d_values):
        for j, y0p in enumerate(y0p_values):
            try:
                counts[i, j] = geometric_reflections(cfg.clone(d=d, y0p=y0p))
            except (InvalidGeometryError, NoExitError):
                pass
    return SweepGrid(d_values, y0p_values, counts)


def plateaus(grid):
    """
    Longest contiguous y0' interval of constant reflection count for
    every mirror separation of a sweep.
    """
    found = []
    for d, row in zip(grid.d, grid.counts):
        best, start = None, 0
        for j in range(1, len(row) + 1):
            if j < len(row) and row[j] == row[start]:
                continue
            if row[start] >= 0 and (best is None or j - start > best[1] - best[0]):
                best = (start, j)
            start = j
        if best is not None:
            lo, hi = best
            found.append(Plateau(float(d), float(grid.y0p[lo]), float(grid.y0p[hi - 1]),
                                 int(row[lo])))
    return found


def beam_radius_sequence(cfg, n):
    """
    Beam radii (w_x, w_y) in mm on the entry mirror for round trips
    0..n, as an array of shape (n + 1, 2).
    """
    cfg.validate()
    radii = []
    for Q in cfg.beam_matrices(n + 1):
        parts = principal_parts(Q)
        radii.append([np.sqrt(cfg.beam.wavelength / (np.pi * b)) for b in (parts.b_xi, parts.b_eta)])
    return np.array(radii)


#---------------------------------------------------------------------
# Cylindrical cell
#---------------------------------------------------------------------

_OFF_BLOCK = ([0, 0, 1, 1, 2, 2, 3, 3], [1, 3, 0, 2, 1, 3, 0, 2])

_DECOUPLING_TOL = 1e-9


def block_diag4(m_xi, m_eta):
    """
    4x4 matrix in layout (x, y, x', y') acting with m_xi on (x, x') and
    m_eta on (y, y').
    """
    out = np.zeros((4, 4))
    out[np.ix_([0, 2], [0, 2])] = m_xi.as_array()
    out[np.ix_([1, 3], [1, 3])] = m_eta.as_array()
    return out


def _coupling(m, alpha):
    rotated = rotation4(alpha) @ m @ rotation4(-alpha)
    return np.linalg.norm(rotated[_OFF_BLOCK]) / np.linalg.norm(m)


def _rotation_split(m):
    alphas = np.linspace(0, np.pi, 180, endpoint=False)
    residuals = [_coupling(m, a) for a in alphas]
    best = alphas[int(np.argmin(residuals))]
    if min(residuals) > _DECOUPLING_TOL:
        step = alphas[1]
        result = optimize.minimize_scalar(lambda a: _coupling(m, a), method='bounded',
                                          bounds=(best - step, best + step),
                                          options={'xatol': 1e-12})
        best = float(result.x)
    if _coupling(m, best) > _DECOUPLING_TOL:
        return None
    rotated = rotation4(best) @ m @ rotation4(-best)
    m_xi = TransferMatrix2.from_array(rotated[np.ix_([0, 2], [0, 2])])
    m_eta = TransferMatrix2.from_array(rotated[np.ix_([1, 3], [1, 3])])
    return RoundTrip4(m_xi, m_eta, float(np.mod(best, np.pi)), rotation4(-best), m, 'rotation')


def _eigen_split(m):
    vals, vecs = np.linalg.eig(m)
    if np.any(np.abs(np.abs(vals) - 1) > 1e-9) or np.any(np.abs(vals.imag) < 1e-12):
        raise DecouplingError('Round trip is unstable; eigenvalues %s.' % np.round(vals, 9),
                              eigenvalues=vals)
    upper = sorted((i for i in range(4) if vals[i].imag > 0), key=lambda i: np.angle(vals[i]))
    angles = [float(np.angle(vals[i])) for i in upper]
    if len(upper) != 2 or abs(angles[0] - angles[1]) < 1e-9:
        raise DecouplingError('Round trip has degenerate eigenvalues %s and no '
                              'rotation decouples it.' % np.round(vals, 9),
                              eigenvalues=vals)
    v1, v2 = vecs[:, upper[0]], vecs[:, upper[1]]
    basis = np.column_stack([v1.real, v2.real, v1.imag, v2.imag])
    m_xi, m_eta = [TransferMatrix2(np.cos(a), np.sin(a), -np.sin(a), np.cos(a)) for a in angles]
    azimuth = float(np.mod(np.arctan2(basis[1, 0], basis[0, 0]), np.pi))
    split = RoundTrip4(m_xi, m_eta, azimuth, basis, m, 'eigenbasis')
    if np.abs(split.reconstruct() - m).max() > 1e-8:
        raise DecouplingError('Eigenbasis of the round trip is ill-conditioned; '
                              'eigenvalues %s.' % np.round(vals, 9), eigenvalues=vals)
    return split


def cylindrical_round_trip(cfg):
    """
    Builds the 4x4 round trip of a twisted cylindrical cell and splits
    it into two decoupled 2x2 blocks. A transverse rotation is tried
    first; twisted cells that no rotation decouples are split in the
    real eigenbasis of the round trip, whose blocks are rotations by
    the two stability angles.
    """
    m = cfg.validate().round_trip4()
    split = _rotation_split(m)
    if split is None:
        state.log(cfg, 'No transverse rotation decouples the round trip; using its eigenbasis.')
        split = _eigen_split(m)
    return split


def lissajous_angles(cfg):
    """
    The two stability angles (rad) of a cylindrical cell round trip,
    which set the frequencies of its Lissajous spot pattern.
    """
    split = cylindrical_round_trip(cfg)
    return stability_angle(split.m_xi), stability_angle(split.m_eta)


#---------------------------------------------------------------------
# Spot tables
#---------------------------------------------------------------------

def _record(n, mirror, x, y, Q, wavelength):
    parts = principal_parts(Q)
    q_xi = 1. / complex(parts.a_xi, -parts.b_xi)
    q_eta = 1. / complex(parts.a_eta, -parts.b_eta)
    w_xi = float(np.sqrt(wavelength / (np.pi * parts.b_xi)))
    w_eta = float(np.sqrt(wavelength / (np.pi * parts.b_eta)))
    return SpotRecord(n, mirror, float(x), float(y), w_xi, w_eta, q_xi, q_eta, Q)


def _recirculating_table(cfg):
    count = total_reflections(cfg)
    theta, phase = cfg.theta, cfg.phase
    xs = spot_x_sequence(cfg, count)
    records = []
    for n, Q in enumerate(cfg.beam_matrices(count)):
        mirror = circulation_index(n, theta, phase).mirror
        records.append(_record(n, mirror, xs[n], spot_y(n, cfg), Q, cfg.beam.wavelength))
    return records


def _cylindrical_table(cfg):
    cfg.validate()
    near, far, prop = cfg.near_mirror4(), cfg.far_mirror4(), propagation4(cfg.d)
    ray = np.array([cfg.x0, cfg.y0, cfg.x0p, cfg.y0p], dtype=float)
    Q, lam, records = cfg.initial_beam_matrix(), cfg.beam.wavelength, []
    for trip in range(cfg.round_trips):
        for label, mirror in (('M2', far), ('M1', near)):
            ray = prop @ ray
            Q = propagate_beam_matrix(Q, prop)
            records.append(_record(len(records) + 1, label, ray[0], ray[1], Q, lam))
            ray = mirror @ ray
            Q = propagate_beam_matrix(Q, mirror)
    return records


def spot_table(cfg):
    """
    One SpotRecord per reflection: the n_R spots on the entry mirror of
    a recirculating cell, or the M2 and M1 spots of every round trip of
    a cylindrical cell.
    """
    if isinstance(cfg, RecirculatingCellConfig):
        return _recirculating_table(cfg)
    elif isinstance(cfg, CylindricalCellConfig):
        return _cylindrical_table(cfg)
    raise TypeError('spot_table expects a recirculating or cylindrical cell '
                    'configuration, got %s.' % type(cfg).__name__)

