"""
Spin-noise model of multipass cells: diffusion correlation, full
correlation and power spectrum for the beam path of any cell, with
axial barriers and a Monte Carlo oracle.
"""
from __future__ import absolute_import, division, unicode_literals

from .atoms import ( # noqa
    AtomSpec, GasSpec, SpinDynamics, diffusion_constant, faraday_weight,
    lorentzian_im, sensitivity_scaling, sz2_variance
)
from .correlation import ( # noqa
    CorrelationResult, cd_astigmatic, cd_stigmatic, correlation,
    default_tau_grid, green
)
from .oracle import MonteCarloEstimate, cd_monte_carlo # noqa
from .segments import ( # noqa
    PassSegment, Piece, apply_barrier, barrier_around_focus,
    build_pass_segments, check_transverse_extent
)
from .spectrum import ( # noqa
    Spectrum, full_correlation, linewidth, psd, resample_correlation
)
