"""
Commandline interface to multipass
"""
from __future__ import absolute_import, division, unicode_literals

import argparse
import os
import sys
import time

import numpy as np
import param

from .config import config
from .errors import ConfigError, MultipassError
from .geometry import (
    CylindricalCellConfig, RecirculatingCellConfig, lissajous_angles,
    plateaus, reflection_sweep, spot_table, stability_summary
)
from .io.recipe import (
    RunConfig, build_cell, build_dynamics, build_gas, list_recipes,
    recipe_path
)
from .io.save import build_manifest, save_csv, save_json
from .io.state import state
from .noise import (
    apply_barrier, barrier_around_focus, build_pass_segments,
    cd_monte_carlo, correlation, diffusion_constant
)
from .raytrace import (
    compare_to_analytic, recirculating_surfaces, sample_beam_rays, trace_cell
)
from .util import logspace_grid


#---------------------------------------------------------------------
# Helpers
#---------------------------------------------------------------------

def _stem(command, variant):
    return command if variant is None else '%s_%s' % (command, variant)


def _angle(value, args):
    """Angles echoed to stdout follow --deg/--rad; files are always in rad."""
    return (np.degrees(value), 'deg') if args.deg else (value, 'rad')


def _echo(msg):
    print(msg)


def _grid(sections, prefix, default):
    values = sections.get('sweep', {})
    lo = values.get('%s_min_%s' % prefix, default[0])
    hi = values.get('%s_max_%s' % prefix, default[1])
    num = values.get('%s_points' % prefix[0], default[2])
    if hi < lo:
        raise ConfigError('sweep.%s_max' % prefix[0], 'range is inverted (%s > %s)' % (lo, hi))
    if num < 1:
        raise ConfigError('sweep.%s_points' % prefix[0], 'needs at least one point')
    return np.linspace(lo, hi, num)


def _require(cell, kinds, command):
    if not isinstance(cell, kinds):
        raise ConfigError('cell.kind', 'the %s command does not support %s cells'
                          % (command, type(cell).__name__))


#---------------------------------------------------------------------
# Commands
#---------------------------------------------------------------------

def cmd_spots(run_config, variant, args):
    """Writes the spot table and the derived quantities of a cell."""
    sections = run_config.resolve(variant)
    cell = build_cell(sections)
    _require(cell, (RecirculatingCellConfig, CylindricalCellConfig), 'spots')
    spots = spot_table(cell)
    stem = _stem('spots', variant)
    path = os.path.join(args.out, stem + '.csv')
    save_csv(path, ['n', 'mirror', 'x_mm', 'y_mm', 'w_xi_mm', 'w_eta_mm'],
             [(s.n, s.mirror, s.x, s.y, s.w_xi, s.w_eta) for s in spots])
    if isinstance(cell, RecirculatingCellConfig):
        summary = stability_summary(cell)
        summary['n_reflections'] = len(spots)
        theta, unit = _angle(summary['theta_rad'], args)
        _echo('%s: n_R = %d, theta = %.6g %s, Delta = %.6g mm'
              % (stem, len(spots), theta, unit, summary['delta_x_mm']))
    else:
        a_xi, a_eta = lissajous_angles(cell)
        summary = {'theta_xi_rad': a_xi, 'theta_eta_rad': a_eta,
                   'n_reflections': len(spots)}
        _echo('%s: %d reflections, theta = (%.6g, %.6g) %s'
              % ((stem, len(spots)) + _angle(a_xi, args)[:1] + _angle(a_eta, args)))
    state.record(**{'%s.%s' % (stem, k): v for k, v in summary.items()})
    summary_path = os.path.join(args.out, stem + '.json')
    save_json(summary_path, summary)
    return [path, summary_path]


def cmd_trace(run_config, variant, args):
    """
    Traces a ray bundle through a recirculating cell and compares the
    spot centroids with the analytic spot table.
    """
    sections = run_config.resolve(variant)
    cell = build_cell(sections)
    _require(cell, RecirculatingCellConfig, 'trace')
    trace_settings = sections.get('trace', {})
    n_rays = args.rays or trace_settings.get('rays', 1000)
    max_hits = trace_settings.get('max_hits', 4 * config.max_reflections)
    aperture = trace_settings.get('half_aperture_mm', np.inf)
    rays = sample_beam_rays(cell.beam, (cell.x0, cell.y0, cell.x0p, cell.y0p),
                            n_rays, seed=args.seed)
    follow_chief = trace_settings.get('follow_chief', False)
    trace = trace_cell(recirculating_surfaces(cell, aperture), rays,
                       max_hits=max_hits, exit_x=-cell.x0, follow_chief=follow_chief)
    report = compare_to_analytic(trace, spot_table(cell))
    stem = _stem('trace', variant)
    path = os.path.join(args.out, stem + '.csv')
    save_csv(path, ['ray_id', 'hit_index', 'surface', 'x_mm', 'y_mm', 'z_mm'], trace.rows())
    summary = report.as_dict()
    summary.update(n_rays=n_rays, escaped_rays=int(trace.escaped.sum()), follow_chief=follow_chief)
    summary_path = os.path.join(args.out, stem + '.json')
    save_json(summary_path, summary)
    state.record(**{'%s.%s' % (stem, k): v for k, v in summary.items()})
    _echo('%s: %d reflections traced (%d analytic), mean error %.4g mm, '
          'containment %.4g' % (stem, report.n_reflections, report.n_reflections_analytic,
                                report.mean_error_mm, report.containment_fraction))
    return [path, summary_path]


def _segments(sections, cell, mode):
    noise = sections.get('noise', {})
    segments = build_pass_segments(None, cell, mode=mode,
                                   literal=noise.get('literal', None))
    width = noise.get('barrier_mm', 0.)
    if width:
        segments = [apply_barrier([s], [barrier_around_focus(s, width)])[0]
                    for s in segments]
    return segments


def cmd_noise(run_config, variant, args):
    """
    Computes C_d(tau), C(tau) and the normalized spectrum of a cell,
    optionally with the Monte Carlo oracle alongside.
    """
    sections = run_config.resolve(variant)
    noise = sections.get('noise', {})
    cell = build_cell(sections)
    gas, dynamics = build_gas(sections), build_dynamics(sections)
    mode = noise.get('mode', 'stigmatic')
    segments = _segments(sections, cell, mode)
    tau = logspace_grid(noise.get('tau_min_s', 1e-6), noise.get('tau_max_s', 2e-2),
                        noise.get('tau_points', 200))
    freqs = None
    if 'freq_max_hz' in noise or 'freq_points' in noise:
        freqs = np.linspace(0, noise.get('freq_max_hz', dynamics.larmor_hz + 10e3),
                            noise.get('freq_points', 1001))
    result = correlation(segments, gas, dynamics, tau=tau, freqs=freqs, mode=mode,
                         axial=noise.get('axial', 'local'))
    stem = _stem('noise', variant)
    header, columns = ['tau_s', 'Cd', 'C'], [result.tau, result.cd, result.c]
    summary = {'linewidth_hz': result.linewidth, 'n_passes': len(segments),
               'diffusion_cm2s': diffusion_constant(gas), 'mode': mode,
               'warnings': result.warnings}
    if args.oracle:
        samples = args.oracle_samples or noise.get('oracle_samples', 10**6)
        points = noise.get('oracle_points', 8)
        oracle_tau = result.tau[np.unique(np.linspace(0, len(result.tau) - 1, points).astype(int))]
        mc = cd_monte_carlo(segments, diffusion_constant(gas), oracle_tau,
                            n_samples=samples, seed=args.seed)
        cd_mc = np.full(len(result.tau), np.nan)
        cd_mc_err = np.full(len(result.tau), np.nan)
        index = np.searchsorted(result.tau, oracle_tau)
        cd_mc[index], cd_mc_err[index] = mc.value, mc.stderr
        header += ['Cd_mc', 'Cd_mc_err']
        columns += [cd_mc, cd_mc_err]
        deviation = np.abs(result.cd[index] - mc.value)
        allowed = np.maximum(0.02, 3 * mc.stderr)
        summary['oracle'] = {'samples': samples, 'max_deviation': float(deviation.max()),
                             'agrees': bool(np.all(deviation <= allowed))}
        if not summary['oracle']['agrees']:
            state.warn(None, '%s: quadrature and Monte Carlo C_d differ by up to %.3g.',
                       stem, deviation.max())
    path = os.path.join(args.out, stem + '.csv')
    save_csv(path, header, zip(*columns))
    psd_path = os.path.join(args.out, stem + '_psd.csv')
    save_csv(psd_path, ['freq_Hz', 'psd_norm'], zip(result.freqs, result.psd))
    summary_path = os.path.join(args.out, stem + '.json')
    save_json(summary_path, summary)
    state.record(**{'%s.linewidth_hz' % stem: result.linewidth,
                    '%s.diffusion_cm2s' % stem: summary['diffusion_cm2s']})
    _echo('%s: %d passes, C_d(%g s) = %.4g, linewidth %.4g Hz'
          % (stem, len(segments), result.tau[-1], result.cd[-1], result.linewidth))
    return [path, psd_path, summary_path]


def cmd_sweep(run_config, variant, args):
    """
    Sweeps the mirror separation and the entry slope y0' of a
    recirculating cell and reports the plateaus of constant count.
    """
    sections = run_config.resolve(variant)
    cell = build_cell(sections)
    _require(cell, RecirculatingCellConfig, 'sweep')
    d_values = _grid(sections, ('d', 'mm'), (cell.d, cell.d, 1))
    y0p_values = _grid(sections, ('y0p', 'rad'), (cell.y0p, cell.y0p, 1))
    grid = reflection_sweep(cell, d_values, y0p_values)
    stem = _stem('sweep', variant)
    path = os.path.join(args.out, stem + '.csv')
    save_csv(path, ['d_mm', 'y0p_rad', 'n_refl'],
             [(d, y, grid.counts[i, j]) for i, d in enumerate(grid.d)
              for j, y in enumerate(grid.y0p)])
    found = plateaus(grid)
    summary = {'failed_points': int((grid.counts < 0).sum()),
               'plateaus': [{'d_mm': p.d, 'y0p_lo_rad': p.y0p_lo, 'y0p_hi_rad': p.y0p_hi,
                             'n_refl': p.count} for p in found]}
    summary_path = os.path.join(args.out, stem + '.json')
    save_json(summary_path, summary)
    for p in found:
        lo, unit = _angle(p.y0p_lo, args)
        hi, _ = _angle(p.y0p_hi, args)
        _echo('%s: d = %.4g mm, n_refl = %d for y0p in [%.6g, %.6g] %s'
              % (stem, p.d, p.count, lo, hi, unit))
    return [path, summary_path]


def cmd_nrefl(run_config, variant, args):
    """Prints the reflection counts and stability summary of a cell."""
    cell = build_cell(run_config.resolve(variant))
    _require(cell, RecirculatingCellConfig, 'nrefl')
    summary = stability_summary(cell)
    stem = _stem('nrefl', variant)
    theta, unit = _angle(summary['theta_rad'], args)
    _echo('%s: geometric n_R = %s, closed form n_R = %s, theta = %.6g %s, '
          'Delta = %.6g mm' % (stem, summary['n_reflections_geometric'],
                               summary['n_reflections_closed_form'], theta, unit,
                               summary['delta_x_mm']))
    state.record(**{'%s.%s' % (stem, k): v for k, v in summary.items()})
    return []


COMMANDS = {
    'spots': cmd_spots,
    'trace': cmd_trace,
    'noise': cmd_noise,
    'sweep': cmd_sweep,
    'nrefl': cmd_nrefl,
}


#---------------------------------------------------------------------
# Entry point
#---------------------------------------------------------------------

def build_parser():
    from . import __version__
    parser = argparse.ArgumentParser(
        prog='multipass', description='Beam geometry and spin-noise correlations '
        'of multipass alkali vapor cells.')
    parser.add_argument('--version', action='version', version='%(prog)s ' + __version__)
    parser.add_argument('--list-recipes', action='store_true',
                        help='list the shipped recipes and exit')
    sub = parser.add_subparsers(dest='command')
    for name, func in COMMANDS.items():
        cmd = sub.add_parser(name, help=func.__doc__.strip().splitlines()[0])
        source = cmd.add_mutually_exclusive_group(required=True)
        source.add_argument('--config', metavar='PATH', help='recipe file to run')
        source.add_argument('--recipe', metavar='NAME', help='shipped recipe to run')
        cmd.add_argument('--variant', action='append', metavar='NAME',
                         help='run only the given variant (repeatable)')
        cmd.add_argument('--out', metavar='DIR', default=None,
                         help='output directory (default: output.directory or .)')
        cmd.add_argument('--seed', type=int, default=None, help='random seed')
        cmd.add_argument('--literal-segments', action='store_true',
                         help='free propagation over whole passes without power normalization')
        units = cmd.add_mutually_exclusive_group()
        units.add_argument('--deg', action='store_true', help='echo angles in degrees')
        units.add_argument('--rad', action='store_true', help='echo angles in radians (default)')
        if name == 'trace':
            cmd.add_argument('--rays', type=int, default=None, help='number of rays')
        else:
            cmd.set_defaults(rays=None)
        if name == 'noise':
            cmd.add_argument('--oracle', action='store_true',
                             help='add Monte Carlo oracle columns')
            cmd.add_argument('--oracle-samples', type=int, default=None,
                             help='Monte Carlo samples per delay')
        else:
            cmd.set_defaults(oracle=False, oracle_samples=None)
    return parser


def run(args):
    """
    Runs a parsed command over every selected variant of its recipe and
    writes the manifest. Returns the list of files written.
    """
    path = args.config if args.config else recipe_path(args.recipe)
    run_config = RunConfig.from_file(path)
    if args.seed is None:
        args.seed = run_config.sections.get('run', {}).get('seed', 0)
    if args.out is None:
        args.out = run_config.sections.get('output', {}).get('directory', '.')
    variants = args.variant or run_config.variant_names()
    state.reset()
    state.seed = args.seed
    start = time.time()
    outputs = []
    overrides = {'literal_segments': True} if args.literal_segments else {}
    with config.set(**overrides):
        for variant in variants:
            outputs += COMMANDS[args.command](run_config, variant, args)
        manifest = build_manifest(args.command, run_config, seed=args.seed,
                                  wall_clock=time.time() - start, outputs=outputs)
    manifest_path = os.path.join(args.out, 'manifest_%s.json' % args.command)
    save_json(manifest_path, manifest)
    return outputs + [manifest_path]


def main(args=None):
    """
    Parses the arguments and runs a command, returning the exit code:
    0 on success, 2 for invalid configurations or geometries and 1 for
    any other failure.
    """
    parser = build_parser()
    args = parser.parse_args(args)
    if args.list_recipes:
        for name in list_recipes():
            _echo(name)
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        run(args)
    except MultipassError as e:
        param.main.param.warning('%s: %s' % (type(e).__name__, e))
        print('error: %s' % e, file=sys.stderr)
        return 2 if e.user_error else 1
    except Exception as e:
        print('internal error: %s: %s' % (type(e).__name__, e), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
