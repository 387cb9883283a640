"""
Paraxial ray and Gaussian beam primitives: 2x2 ray transfer matrices,
complex beam parameter propagation, beam radii and general astigmatic
propagation with 4x4 ray matrices and 2x2 complex beam matrices.

All lengths are in mm and all angles in radians. Flat mirrors have an
infinite focal length and are never approximated by a large finite
one.
"""
from __future__ import absolute_import, division, unicode_literals

from collections import namedtuple

import numpy as np
import param

from .errors import (
    InvalidGeometryError, NonphysicalBeamError, SingularPropagationError,
    UnstableCavityError
)
from .util import isinfinite


#---------------------------------------------------------------------
# Value types
#---------------------------------------------------------------------

class TransferMatrix2(namedtuple('TransferMatrix2', 'a b c d')):
    """
    Paraxial 2x2 ray transfer matrix [[a, b], [c, d]] acting on a
    (position [mm], slope [rad]) vector. Lossless elements have unit
    determinant.
    """

    __slots__ = ()

    @property
    def det(self):
        return self.a * self.d - self.b * self.c

    @property
    def half_trace(self):
        return (self.a + self.d) / 2.

    def __matmul__(self, other):
        return TransferMatrix2(self.a * other.a + self.b * other.c,
                               self.a * other.b + self.b * other.d,
                               self.c * other.a + self.d * other.c,
                               self.c * other.b + self.d * other.d)

    dot = __matmul__

    def power(self, n):
        """
        Matrix power by repeated multiplication.
        """
        if n < 0:
            raise ValueError('Matrix powers must be non-negative, got %d.' % n)
        result = identity()
        for _ in range(int(n)):
            result = self @ result
        return result

    def apply(self, position, slope):
        return (self.a * position + self.b * slope,
                self.c * position + self.d * slope)

    def as_array(self):
        return np.array([[self.a, self.b], [self.c, self.d]], dtype=float)

    @classmethod
    def from_array(cls, array):
        array = np.asarray(array, dtype=float)
        return cls(array[0, 0], array[0, 1], array[1, 0], array[1, 1])


#: Real and imaginary parts of 1/q = a - i b.
InvQParts = namedtuple('InvQParts', 'a b')

#: Principal-axis description of an astigmatic beam: 1/q along each axis
#: and the azimuth (rad) of the xi axis in the lab frame.
PrincipalParts = namedtuple('PrincipalParts', 'a_xi b_xi a_eta b_eta azimuth')


class BeamSpec(param.Parameterized):
    """
    Fundamental Gaussian probe beam, described by its wavelength, waist
    and the position of the first reflection relative to the waist.
    """

    wavelength = param.Number(default=780e-6, bounds=(0, None),
                              inclusive_bounds=(False, True), doc="""
        Vacuum wavelength in mm.""")

    waist = param.Number(default=1.0, bounds=(0, None),
                         inclusive_bounds=(False, True), doc="""
        Waist radius w_0 (1/e^2 intensity) in mm.""")

    z = param.Number(default=0.0, doc="""
        Axial distance in mm from the waist to the first reflection;
        negative when the waist lies beyond it.""")

    @property
    def rayleigh_range(self):
        return np.pi * self.waist**2 / self.wavelength

    @property
    def wavenumber(self):
        return 2 * np.pi / self.wavelength

    @property
    def q0(self):
        return complex(self.z, self.rayleigh_range)


class MirrorSpec(param.Parameterized):
    """
    A cell mirror. Flat mirrors may be tilted about the y axis, which
    kicks the reflected slope by twice the tilt; curved mirrors focus
    with the given focal length along one (cylindrical) or both
    (spherical) transverse axes.
    """

    kind = param.ObjectSelector(default='flat', objects=['flat', 'spherical', 'cylindrical'])

    focal = param.Number(default=np.inf, doc="""
        Focal length in mm; ignored for flat mirrors.""")

    azimuth = param.Number(default=0.0, doc="""
        Azimuth in rad of the curved axis of a cylindrical mirror.""")

    tilt = param.Number(default=0.0, doc="""
        Rotation in rad of a flat mirror about the y axis.""")

    center = param.NumericTuple(default=(0.0, 0.0, 0.0), length=3, doc="""
        Vertex position (x, y, z) in mm.""")

    def axis_matrices(self, incidence=0.0):
        """
        Returns the (tangential, sagittal) 2x2 matrices of the mirror.
        For a cylindrical mirror these are the matrices along and across
        its curved axis.
        """
        if self.kind == 'flat':
            return identity(), identity()
        elif self.kind == 'spherical':
            f_tan, f_sag = mirror_astigmatic_focals(self.focal, incidence)
            return mirror(f_tan), mirror(f_sag)
        return mirror(self.focal), identity()

    def matrix4(self, incidence=0.0):
        """
        Returns the 4x4 ray matrix of the mirror in block layout.
        """
        if self.kind == 'flat':
            return np.eye(4)
        elif self.kind == 'spherical':
            return mirror4(*mirror_astigmatic_focals(self.focal, incidence))
        return cylindrical_mirror4(self.focal, self.azimuth)


#---------------------------------------------------------------------
# 2x2 elements
#---------------------------------------------------------------------

def identity():
    return TransferMatrix2(1., 0., 0., 1.)


def propagation(d):
    """Free propagation over d mm."""
    return TransferMatrix2(1., float(d), 0., 1.)


def mirror(f):
    """
    Reflection off a mirror with focal length f (mm), f > 0 focusing.
    An infinite (or None) focal length is a flat mirror.
    """
    if isinfinite(f):
        return identity()
    if f == 0:
        raise InvalidGeometryError('Mirror focal length must be non-zero.')
    return TransferMatrix2(1., 0., -1. / f, 1.)


def check_unimodular(m, tol=1e-9):
    if abs(m.det - 1) > tol:
        raise InvalidGeometryError('Ray matrix %r is not lossless: '
                                   'determinant %.12g.' % (tuple(m), m.det))
    return m


#---------------------------------------------------------------------
# Public API
#---------------------------------------------------------------------

def compose_round_trip(f1, f2, d):
    """
    Round trip of a two-mirror cell starting just after the first
    mirror: mirror(f1) . prop(d) . mirror(f2) . prop(d).

    Arguments
    ---------
    f1: float
      Focal length of the entry mirror in mm (np.inf for flat).
    f2: float
      Focal length of the far mirror in mm.
    d: float
      Mirror separation in mm.
    """
    if not d > 0:
        raise InvalidGeometryError('Mirror separation must be positive, '
                                   'got d=%s mm.' % d)
    if not isinfinite(f2) and f2 == 0:
        raise InvalidGeometryError('Far mirror focal length must be non-zero.')
    return mirror(f1) @ propagation(d) @ mirror(f2) @ propagation(d)


def stability_angle(m):
    """
    Angle theta = arccos((A + D)/2) between successive spots of a
    stable round trip, in (0, pi).
    """
    half = m.half_trace
    if not abs(half) < 1:
        raise UnstableCavityError('Round trip %r is not stable: '
                                  '(A + D)/2 = %.6g.' % (tuple(m), half))
    return float(np.arccos(half))


def propagate_q(q, m):
    """
    Transforms a complex beam parameter: (A q + B) / (C q + D).
    """
    q = complex(q)
    if not q.imag > 0:
        raise NonphysicalBeamError('Beam parameter %s has no positive '
                                   'Rayleigh range.' % q)
    denom = m.c * q + m.d
    if denom == 0:
        raise SingularPropagationError('C q + D vanishes for q=%s.' % q)
    return (m.a * q + m.b) / denom


def inv_q_parts(q):
    """
    Splits 1/q = a - i b into its curvature term a and width term b
    (both in 1/mm).
    """
    q = complex(q)
    if q == 0:
        raise SingularPropagationError('Beam parameter q must be non-zero.')
    inv = 1. / q
    return InvQParts(inv.real, -inv.imag)


def beam_radius(q, wavelength):
    """
    1/e^2 intensity radius in mm of the beam described by q.
    """
    a, b = inv_q_parts(q)
    if not b > 0:
        raise NonphysicalBeamError('Im(1/q) must be negative, got q=%s.' % complex(q))
    return float(np.sqrt(wavelength / (np.pi * b)))


def propagate_dual_q(q_xi, q_eta, m_xi, m_eta):
    """
    Propagates the two principal-axis beam parameters of a simple
    astigmatic beam, each by its own lossless matrix.
    """
    check_unimodular(m_xi)
    check_unimodular(m_eta)
    return propagate_q(q_xi, m_xi), propagate_q(q_eta, m_eta)


def mirror_astigmatic_focals(f, phi):
    """
    Tangential and sagittal focal lengths f cos(phi) and f / cos(phi) of
    a spherical mirror hit at incidence angle phi.
    """
    if not abs(phi) < np.pi / 2:
        raise InvalidGeometryError('Incidence angle must satisfy |phi| < pi/2, '
                                   'got %s rad.' % phi)
    if isinfinite(f):
        return f, f
    return f * np.cos(phi), f / np.cos(phi)


def focused_waist(w_in, f, wavelength):
    """
    Waist radius (mm) obtained by focusing a beam whose waist w_in sits
    on a thin lens of focal length f.
    """
    z_r = np.pi * w_in**2 / wavelength
    return float(w_in * f / np.sqrt(f**2 + z_r**2))


#---------------------------------------------------------------------
# 4x4 matrices, block layout (x, y, x', y')
#---------------------------------------------------------------------

def _rotation2(alpha):
    c, s = np.cos(alpha), np.sin(alpha)
    return np.array([[c, s], [-s, c]])


def rotation4(alpha):
    """
    Coordinate rotation into a frame whose first axis lies at azimuth
    alpha.
    """
    r = _rotation2(alpha)
    out = np.zeros((4, 4))
    out[:2, :2] = r
    out[2:, 2:] = r
    return out


def propagation4(d):
    out = np.eye(4)
    out[0, 2] = out[1, 3] = d
    return out


def mirror4(f_x, f_y):
    out = np.eye(4)
    if not isinfinite(f_x):
        out[2, 0] = -1. / f_x
    if not isinfinite(f_y):
        out[3, 1] = -1. / f_y
    return out


def cylindrical_mirror4(f, azimuth):
    """
    Cylindrical mirror of focal length f whose curved axis lies at the
    given azimuth: rotation(-azimuth) . diag(curved, flat) . rotation(azimuth).
    """
    return rotation4(-azimuth) @ mirror4(f, np.inf) @ rotation4(azimuth)


def blocks4(m):
    m = np.asarray(m)
    return m[:2, :2], m[:2, 2:], m[2:, :2], m[2:, 2:]


def beam_matrix(q_xi, q_eta, azimuth=0.0):
    """
    2x2 complex beam matrix of a simple astigmatic beam whose xi axis
    lies at the given azimuth.
    """
    r = _rotation2(azimuth)
    return r.T @ np.diag([complex(q_xi), complex(q_eta)]) @ r


def propagate_beam_matrix(Q, m):
    """
    Transforms a complex beam matrix with a 4x4 ray matrix:
    Q' = (A Q + B)(C Q + D)^-1.
    """
    A, B, C, D = blocks4(m)
    denom = C @ Q + D
    if abs(np.linalg.det(denom)) < 1e-300:
        raise SingularPropagationError('C Q + D is singular.')
    return (A @ Q + B) @ np.linalg.inv(denom)


def principal_parts(Q, reference=0.0):
    """
    Principal-axis parts of a complex beam matrix. The width terms are
    the eigenvalues of -Im(Q^-1); the curvature terms are the diagonal
    of Re(Q^-1) in that eigenbasis. The xi axis is the eigenvector
    closest to the reference azimuth.
    """
    inv = np.linalg.inv(np.asarray(Q, dtype=complex))
    width = -0.5 * (inv.imag + inv.imag.T)
    vals, vecs = np.linalg.eigh(width)
    if not np.all(vals > 0):
        raise NonphysicalBeamError('Beam matrix has a non-positive width term %s.' % vals)
    axis = np.array([np.cos(reference), np.sin(reference)])
    order = [0, 1] if abs(vecs[:, 0] @ axis) >= abs(vecs[:, 1] @ axis) else [1, 0]
    u_xi, u_eta = vecs[:, order[0]], vecs[:, order[1]]
    curv = 0.5 * (inv.real + inv.real.T)
    azimuth = float(np.mod(np.arctan2(u_xi[1], u_xi[0]), np.pi))
    return PrincipalParts(float(u_xi @ curv @ u_xi), float(vals[order[0]]),
                          float(u_eta @ curv @ u_eta), float(vals[order[1]]),
                          azimuth)


def beam_radii(Q, wavelength, reference=0.0):
    """
    Principal 1/e^2 radii (w_xi, w_eta) in mm of a complex beam matrix.
    """
    parts = principal_parts(Q, reference)
    return (float(np.sqrt(wavelength / (np.pi * parts.b_xi))),
            float(np.sqrt(wavelength / (np.pi * parts.b_eta))))
