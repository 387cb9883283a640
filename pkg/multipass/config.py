"""
The config module supplies the global config object holding the
numerical tolerances and run-wide switches shared by the optics,
geometry and spin-noise modules.
"""
from __future__ import absolute_import, division, unicode_literals

import os

from contextlib import contextmanager

import param


#---------------------------------------------------------------------
# Public API
#---------------------------------------------------------------------

class _config(param.Parameterized):
    """
    Holds global configuration options for multipass. The options can
    be set directly on the global config instance, temporarily with the
    set context manager or via environment variables. For example to
    switch to the literal in-segment beam evolution:

        multipass.config.literal_segments = True

        with multipass.config.set(literal_segments=True):
            ...

        os.environ['MULTIPASS_LITERAL_SEGMENTS'] = 'True'
    """

    tau_norm = param.Number(default=1e-9, bounds=(0, None), inclusive_bounds=(False, True), doc="""
        Delay (in s) at which correlation functions are evaluated to
        normalize them to one.""")

    max_reflections = param.Integer(default=10000, bounds=(1, None), doc="""
        Upper bound on the number of reflections followed while looking
        for the exit of a recirculating cell.""")

    quad_intervals = param.Integer(default=1, bounds=(1, None), doc="""
        Number of equal subintervals each allowed axial interval is split
        into before the adaptive quadrature refines it further.""")

    hermite_nodes = param.Integer(default=24, bounds=(2, None), doc="""
        Gauss-Hermite nodes of the axial diffusion average.""")

    truncation_level = param.Number(default=1e-4, bounds=(0, None), doc="""
        Magnitude of the correlation function at the end of the delay
        grid above which spectra carry a truncation warning.""")

    _quad_rtol = param.Number(default=1e-6, bounds=(0, None), allow_None=True, doc="""
        Relative tolerance of the adaptive quadratures.""")

    _quad_atol = param.Number(default=1e-12, bounds=(0, None), allow_None=True, doc="""
        Absolute tolerance floor of the adaptive quadratures.""")

    _literal_segments = param.Boolean(default=False, allow_None=True, doc="""
        Whether pass segments use pure free propagation q(z) = q_n + z
        without power normalization instead of piecewise propagation
        through the far mirror with unit power per pass.""")

    _strict_extent = param.Boolean(default=False, allow_None=True, doc="""
        Whether a beam wider than a fifth of the mirror separation
        raises instead of warning.""")

    _truthy = ['True', 'true', '1', True, 1]

    def __init__(self, **params):
        super(_config, self).__init__(**params)
        for p in self.param:
            if p.startswith('_'):
                setattr(self, p+'_', None)

    @contextmanager
    def set(self, **kwargs):
        values = [(k, v) for k, v in self.param.values().items() if k != 'name']
        overrides = [(k, getattr(self, k+'_')) for k in self.param if k.startswith('_')]
        for k, v in kwargs.items():
            setattr(self, k, v)
        try:
            yield
        finally:
            self.param.update(**dict(values))
            for k, v in overrides:
                setattr(self, k+'_', v)

    @property
    def quad_rtol(self):
        if self._quad_rtol_ is not None:
            return self._quad_rtol_
        else:
            return float(os.environ.get('MULTIPASS_QUAD_RTOL', _config._quad_rtol))

    @quad_rtol.setter
    def quad_rtol(self, value):
        self._quad_rtol_ = value

    @property
    def quad_atol(self):
        if self._quad_atol_ is not None:
            return self._quad_atol_
        else:
            return float(os.environ.get('MULTIPASS_QUAD_ATOL', _config._quad_atol))

    @quad_atol.setter
    def quad_atol(self, value):
        self._quad_atol_ = value

    @property
    def literal_segments(self):
        if self._literal_segments_ is not None:
            return self._literal_segments_
        else:
            return os.environ.get('MULTIPASS_LITERAL_SEGMENTS', _config._literal_segments) in self._truthy

    @literal_segments.setter
    def literal_segments(self, value):
        self._literal_segments_ = value

    @property
    def strict_extent(self):
        if self._strict_extent_ is not None:
            return self._strict_extent_
        else:
            return os.environ.get('MULTIPASS_STRICT_EXTENT', _config._strict_extent) in self._truthy

    @strict_extent.setter
    def strict_extent(self, value):
        self._strict_extent_ = value

    def snapshot(self):
        """
        Returns the resolved options as a plain dictionary, suitable for
        embedding in a run manifest.
        """
        resolved = {k: v for k, v in self.param.values().items()
                    if k != 'name' and not k.startswith('_')}
        for p in self.param:
            if p.startswith('_'):
                resolved[p[1:]] = getattr(self, p[1:])
        return resolved


config = _config(**{k: None if p.allow_None else getattr(_config, k)
                    for k, p in _config.param.objects().items() if k != 'name'})
