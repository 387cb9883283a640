"""
Exceptions raised by multipass. Every error is a ValueError so callers
that only care about bad input can catch that.
"""
from __future__ import absolute_import, division, unicode_literals


class MultipassError(ValueError):
    """Base class of all multipass errors."""

    #: Whether the error is caused by the supplied configuration or
    #: geometry (exit code 2) rather than an internal failure.
    user_error = True


class InvalidGeometryError(MultipassError):
    """A length, angle or matrix outside its physical range."""


class UnstableCavityError(InvalidGeometryError):
    """Round trip with |A + D| / 2 >= 1."""


class DecouplingError(InvalidGeometryError):
    """
    A 4x4 round trip that cannot be split into two independent axes.
    The eigenvalues of the round trip are kept for diagnostics.
    """

    def __init__(self, msg, eigenvalues=None):
        super(DecouplingError, self).__init__(msg)
        self.eigenvalues = eigenvalues


class SingularPropagationError(MultipassError):
    """Degenerate denominator while transforming a beam parameter."""


class NonphysicalBeamError(MultipassError):
    """Beam parameter without a positive width term."""

    def __init__(self, msg, pass_index=None):
        if pass_index is not None:
            msg = 'pass %d: %s' % (pass_index, msg)
        super(NonphysicalBeamError, self).__init__(msg)
        self.pass_index = pass_index


class NoExitError(MultipassError):
    """The beam never leaves the recirculating cell."""


class DomainError(MultipassError):
    """Argument outside the domain of a function."""


class QuadratureError(MultipassError):
    """Adaptive quadrature failed to converge."""

    user_error = False


class ConfigError(MultipassError):
    """Invalid run configuration; names the offending key."""

    def __init__(self, key, msg, hint=None):
        text = '%s: %s' % (key, msg)
        if hint:
            text += ' (%s)' % hint
        super(ConfigError, self).__init__(text)
        self.key = key
        self.hint = hint
