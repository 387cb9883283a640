"""
Pass segments: the beam along each round trip of a cell, unfolded onto
the axial coordinate z in [-d, d] with the entry mirror at both ends
and the far mirror at z = 0, together with the axial intervals from
which atoms are excluded.
"""
from __future__ import absolute_import, division, unicode_literals

from collections import namedtuple

import numpy as np
import param

from ..config import config
from ..errors import (
    DomainError, InvalidGeometryError, NonphysicalBeamError,
    SingularPropagationError
)
from ..geometry import (
    CylindricalCellConfig, RecirculatingCellConfig, SinglePassConfig,
    total_reflections
)
from ..io.state import state
from ..optics import principal_parts, propagate_beam_matrix, propagation4
from ..util import complement_intervals, merge_intervals


#: Free-propagation piece of a segment; Q is the complex beam matrix at
#: z_lo and Q(z) = Q + (z - z_lo) I inside the piece.
Piece = namedtuple('Piece', 'z_lo z_hi Q')

_SAMPLES = 401


class PassSegment(param.Parameterized):
    """
    The probe beam along one pass, described piecewise by complex beam
    matrices, with the intensity

        I(r, z) = P(z) exp(-k r^T B(z) r),  B = -Im(Q(z)^-1)

    whose transverse power is the same for every pass when `normalized`
    and whose peak is |det Q^-1| otherwise.
    """

    index = param.Integer(default=0, bounds=(0, None), doc="Pass index.")

    z_lo = param.Number(default=-30.0, doc="Start of the pass in mm.")

    z_hi = param.Number(default=30.0, doc="End of the pass in mm.")

    pieces = param.List(default=[], doc="""
        Free-propagation pieces covering [z_lo, z_hi] in order.""")

    exclusions = param.List(default=[], doc="""
        Sorted, non-overlapping (z_lo, z_hi) intervals in mm from which
        atoms are excluded.""")

    wavelength = param.Number(default=780e-6, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Probe wavelength in mm.""")

    normalized = param.Boolean(default=True, doc="""
        Whether the transverse power is normalized to one.""")

    stigmatic = param.Boolean(default=True, doc="""
        Whether the beam is round along the whole pass.""")

    def __init__(self, **params):
        super(PassSegment, self).__init__(**params)
        self._starts = np.array([p.z_lo for p in self.pieces], dtype=float)
        self._Q = np.array([np.asarray(p.Q, dtype=complex) for p in self.pieces])

    def copy(self, **overrides):
        params = {k: v for k, v in self.param.values().items() if k != 'name'}
        params.update(overrides)
        return type(self)(**params)

    @property
    def wavenumber(self):
        return 2 * np.pi / self.wavelength

    @property
    def length(self):
        return self.z_hi - self.z_lo

    def allowed_intervals(self):
        """
        Integration domain of the pass: [z_lo, z_hi] minus the
        exclusions, split at the piece boundaries.
        """
        breaks = [p.z_lo for p in self.pieces[1:]]
        return complement_intervals(self.z_lo, self.z_hi, self.exclusions, breaks)

    def inverse_beam(self, z):
        """
        Entries (i11, i12, i22) of Q(z)^-1 for scalar or array z.
        """
        z = np.asarray(z, dtype=float)
        idx = np.clip(np.searchsorted(self._starts, z, side='right') - 1, 0, len(self._starts) - 1)
        Q = self._Q[idx]
        s = z - self._starts[idx]
        m11 = Q[..., 0, 0] + s
        m12 = 0.5 * (Q[..., 0, 1] + Q[..., 1, 0])
        m22 = Q[..., 1, 1] + s
        det = m11 * m22 - m12**2
        if np.any(det == 0):
            raise SingularPropagationError('pass %d: beam matrix is singular.' % self.index)
        return m22 / det, -m12 / det, m11 / det

    def width_terms(self, z):
        """
        Returns (bxx, bxy, byy, det B, |det Q^-1|) at z.
        """
        i11, i12, i22 = self.inverse_beam(z)
        bxx, bxy, byy = -i11.imag, -i12.imag, -i22.imag
        det = bxx * byy - bxy**2
        if np.any(det <= 0) or np.any(bxx + byy <= 0):
            raise NonphysicalBeamError('beam width term is not positive definite.',
                                       pass_index=self.index)
        return bxx, bxy, byy, det, np.abs(i11 * i22 - i12**2)

    def peak_intensity(self, z, terms=None):
        bxx, bxy, byy, det, inv_det = self.width_terms(z) if terms is None else terms
        if self.normalized:
            return self.wavenumber * np.sqrt(det) / np.pi
        return inv_det

    def transverse_power(self, z, terms=None):
        """Integral of I(r, z) over the transverse plane."""
        terms = self.width_terms(z) if terms is None else terms
        return self.peak_intensity(z, terms) * np.pi / (self.wavenumber * np.sqrt(terms[3]))

    def radii(self, z):
        """
        Principal 1/e^2 radii (w_min, w_max) in mm at z.
        """
        bxx, bxy, byy, det, _ = self.width_terms(z)
        half = 0.5 * (bxx + byy)
        spread = np.sqrt(np.maximum(half**2 - det, 0))
        k = self.wavenumber
        return np.sqrt(2. / (k * (half + spread))), np.sqrt(2. / (k * (half - spread)))

    def focus_points(self):
        """
        Axial positions of the principal waists falling inside the
        pieces, used as quadrature break points.
        """
        points = []
        for (lo, hi, _), Q in zip(self.pieces, self._Q):
            for q in set([Q[0, 0], Q[1, 1]]):
                z = lo - q.real
                if lo < z < hi:
                    points.append(float(z))
        return sorted(points)

    def _sample_grid(self):
        grid = np.linspace(self.z_lo, self.z_hi, _SAMPLES)
        return np.unique(np.concatenate([grid, self.focus_points()]))

    def narrowest_z(self):
        """Axial position of the smallest beam cross-section."""
        grid = self._sample_grid()
        return float(grid[np.argmax(self.width_terms(grid)[3])])

    def max_radius(self):
        return float(np.max(self.radii(self._sample_grid())[1]))


#---------------------------------------------------------------------
# Public API
#---------------------------------------------------------------------

def _pass_states(spots, cell):
    if spots is None:
        count = cell.passes
        if count is None:
            count = total_reflections(cell)
        return cell.beam_matrices(count)
    if isinstance(cell, CylindricalCellConfig):
        near = cell.near_mirror4()
        states = [cell.initial_beam_matrix()]
        states += [propagate_beam_matrix(r.Q, near) for r in spots if r.mirror == 'M1']
        return states[:-1]
    return [r.Q for r in spots]


def _is_round(Q, tol=1e-9):
    scale = max(abs(Q[0, 0]), abs(Q[1, 1]))
    return abs(Q[0, 1]) <= tol * scale and abs(Q[0, 0] - Q[1, 1]) <= tol * scale


def build_pass_segments(spots, cell, mode='stigmatic', exclusions=(), literal=None):
    """
    Builds one PassSegment per round trip of a cell.

    By default every round trip is propagated piecewise: freely from
    the entry mirror at z = -d to the far mirror at z = 0, through the
    far-mirror reflection and freely back to z = d, with unit
    transverse power per pass. With `literal` (defaulting to
    config.literal_segments) each round trip is the pure free propagation
    Q(z) = Q_n + z I over [-d, d] without power normalization.

    Arguments
    ---------
    spots: list of SpotRecord or None
      Spot table of the cell; None follows cell.passes round trips.
    cell: RecirculatingCellConfig, CylindricalCellConfig or SinglePassConfig
      The cell the beam passes through.
    mode: str
      'stigmatic' requires a round beam on every pass, 'astigmatic'
      accepts general astigmatic beams.
    exclusions: list of (z_lo, z_hi)
      Axial intervals applied to every pass (see apply_barrier).
    """
    if mode not in ('stigmatic', 'astigmatic'):
        raise ValueError("Segment mode must be 'stigmatic' or 'astigmatic', got %r." % mode)
    literal = config.literal_segments if literal is None else literal
    cell.validate()
    lam = cell.beam.wavelength
    if isinstance(cell, SinglePassConfig):
        half = cell.d / 2.
        pieces_list = [[Piece(-half, half, cell.entry_beam_matrix())]]
        lo, hi, extent = -half, half, cell.d
    elif isinstance(cell, (RecirculatingCellConfig, CylindricalCellConfig)):
        d, far, prop = cell.d, cell.far_mirror4(), propagation4(cell.d)
        pieces_list = []
        for n, Q in enumerate(_pass_states(spots, cell)):
            try:
                principal_parts(Q)
            except NonphysicalBeamError as e:
                raise NonphysicalBeamError(str(e), pass_index=n)
            if literal:
                pieces_list.append([Piece(-d, d, Q - d * np.eye(2))])
            else:
                back = propagate_beam_matrix(propagate_beam_matrix(Q, prop), far)
                pieces_list.append([Piece(-d, 0., Q), Piece(0., d, back)])
        lo, hi, extent = -d, d, d
    else:
        raise TypeError('Cannot build pass segments for %s.' % type(cell).__name__)

    segments = []
    for n, pieces in enumerate(pieces_list):
        round_beam = all(_is_round(np.asarray(p.Q)) for p in pieces)
        if mode == 'stigmatic' and not round_beam:
            raise InvalidGeometryError("pass %d: beam is astigmatic, use mode='astigmatic'." % n)
        segments.append(PassSegment(index=n, z_lo=lo, z_hi=hi, pieces=pieces,
                                    wavelength=lam, normalized=not literal,
                                    stigmatic=round_beam))
    segments = apply_barrier(segments, list(exclusions))
    check_transverse_extent(segments, extent)
    return segments


def apply_barrier(segments, intervals):
    """
    Excludes the given axial intervals from every segment; atoms inside
    them contribute to neither numerator nor denominator.
    """
    if not intervals:
        return list(segments)
    barred = []
    for segment in segments:
        merged = merge_intervals(list(segment.exclusions) + list(intervals),
                                 segment.z_lo, segment.z_hi)
        barred.append(segment.copy(exclusions=merged))
    return barred


def barrier_around_focus(segment, width):
    """
    Interval of the given width (mm) centred on the narrowest point of
    a segment.
    """
    if not width > 0:
        raise DomainError('Barrier width must be positive, got %s mm.' % width)
    z = segment.narrowest_z()
    interval = (z - width / 2., z + width / 2.)
    if interval[0] < segment.z_lo or interval[1] > segment.z_hi:
        raise DomainError('Barrier (%s, %s) mm around the focus leaves the pass '
                          '[%s, %s] mm.' % (interval + (segment.z_lo, segment.z_hi)))
    return interval


def check_transverse_extent(segments, d):
    """
    Checks that the beam stays well inside the transverse extent of the
    cell (max radius <= d / 5). Violations warn, or raise when
    config.strict_extent is set. Returns the largest radius.
    """
    radius = max(s.max_radius() for s in segments) if segments else 0.
    if radius > d / 5.:
        msg = ('Beam radius reaches %.3g mm, more than a fifth of the cell '
               'dimension %.3g mm; the transversely infinite cell model '
               'is not accurate.' % (radius, d))
        if config.strict_extent:
            raise InvalidGeometryError(msg)
        state.warn(None, msg)
    return radius
