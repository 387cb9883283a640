"""
multipass models the beam path through recirculating and cylindrical
multipass vapor cells and the spin noise that atomic diffusion through
that beam path produces:

    import multipass as mp

    cell = mp.RecirculatingCellConfig(d=29.8, f2=1000)
    mp.total_reflections(cell)                  # 78
    segments = mp.noise.build_pass_segments(None, cell)
    mp.noise.correlation(segments, mp.noise.GasSpec(), mp.noise.SpinDynamics())
"""
from __future__ import absolute_import, division, unicode_literals

import param as _param

from . import noise # noqa
from . import optics # noqa
from . import raytrace # noqa

from .config import config # noqa
from .errors import ( # noqa
    ConfigError, DecouplingError, DomainError, InvalidGeometryError,
    MultipassError, NoExitError, NonphysicalBeamError, QuadratureError,
    SingularPropagationError, UnstableCavityError
)
from .geometry import ( # noqa
    CylindricalCellConfig, RecirculatingCellConfig, SinglePassConfig,
    cylindrical_round_trip, lissajous_angles, reflection_sweep, spot_table,
    stability_summary, total_reflections
)
from .io import state # noqa
from .io.recipe import RunConfig # noqa
from .optics import BeamSpec # noqa

__version__ = str(_param.version.Version(
    fpath=__file__, archive_commit="$Format:%h$", reponame="multipass"))
