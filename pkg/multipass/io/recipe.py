"""
Run configurations ("recipes"): flat-sectioned INI files whose keys
carry their unit as a suffix, e.g.

    [cell]
    kind = recirculating
    f2_mm = 1000
    tilt_deg = 0.04

Values are normalized to mm, rad, K, Torr, s, Hz and cm^2/s on load
and serialized back with the canonical suffixes. Sections named
`variant NAME` hold `section.key_unit` overrides of the base sections;
a variant that sets cell.kind replaces the whole cell section.
"""
from __future__ import absolute_import, division, unicode_literals

import configparser
import copy
import glob
import os

import numpy as np
import param

from ..errors import ConfigError
from ..geometry import (
    CylindricalCellConfig, RecirculatingCellConfig, SinglePassConfig
)
from ..noise.atoms import GasSpec, SpinDynamics
from ..optics import BeamSpec


RECIPE_DIR = os.path.join(os.path.dirname(os.path.dirname(__file__)), 'recipes')

# Accepted suffixes per unit class with their factor to the canonical unit
_UNITS = {
    'length': ('mm', {'mm': 1., 'nm': 1e-6, 'um': 1e-3, 'cm': 10., 'm': 1e3}),
    'angle': ('rad', {'rad': 1., 'mrad': 1e-3, 'deg': np.pi / 180}),
    'temperature': ('K', {'k': None, 'c': None}),
    'pressure': ('torr', {'torr': 1.}),
    'time': ('s', {'s': 1., 'ms': 1e-3, 'us': 1e-6}),
    'frequency': ('hz', {'hz': 1., 'khz': 1e3}),
    'diffusion': ('cm2s', {'cm2s': 1.}),
}

_CELL_KEYS = {
    'recirculating': {
        'f2': 'length', 'd': 'length', 'tilt': 'angle', 'tilt_prime': 'angle',
        'x0': 'length', 'y0': 'length', 'x0p': 'angle', 'y0p': 'angle',
        'incidence': 'angle', 'passes': int},
    'cylindrical': {
        'f': 'length', 'twist': 'angle', 'd': 'length', 'round_trips': int,
        'waist_xi': 'length', 'waist_eta': 'length', 'x0': 'length',
        'y0': 'length', 'x0p': 'angle', 'y0p': 'angle'},
    'single_pass': {
        'd': 'length', 'focus_waist': 'length', 'focus_z': 'length',
        'waist_eta': 'length', 'focus_z_eta': 'length',
        'input_waist': 'length', 'lens_focal': 'length'},
}

_SCHEMA = {
    'beam': {'wavelength': 'length', 'waist': 'length', 'z': 'length'},
    'gas': {'temperature': 'temperature', 'pressure': 'pressure',
            'd0': 'diffusion', 't0': 'temperature', 'p0': 'pressure'},
    'dynamics': {'larmor': 'frequency', 't2': 'time'},
    'noise': {'mode': str, 'axial': str, 'literal': bool, 'tau_min': 'time',
              'tau_max': 'time', 'tau_points': int, 'freq_max': 'frequency',
              'freq_points': int, 'barrier': 'length', 'oracle_samples': int,
              'oracle_points': int},
    'sweep': {'d_min': 'length', 'd_max': 'length', 'd_points': int,
              'y0p_min': 'angle', 'y0p_max': 'angle', 'y0p_points': int},
    'trace': {'rays': int, 'max_hits': int, 'half_aperture': 'length', 'follow_chief': bool},
    'run': {'seed': int},
    'output': {'directory': str, 'formats': str},
}

_SECTIONS = ['cell'] + list(_SCHEMA)

_TRUE, _FALSE = ('true', 'yes', 'on', '1'), ('false', 'no', 'off', '0')


def _convert(value, factor, unit, canonical):
    value = float(value)
    if canonical == 'K' and unit == 'c':
        return value + 273.15
    return value if factor is None else value * factor


def _normalize_key(section, key, raw, schema):
    where = '%s.%s' % (section, key)
    if key in schema and not isinstance(schema[key], str):
        kind = schema[key]
        try:
            if kind is bool:
                text = raw.strip().lower()
                if text not in _TRUE + _FALSE:
                    raise ValueError(raw)
                return key, text in _TRUE
            return key, kind(raw.strip())
        except ValueError:
            raise ConfigError(where, 'cannot read %r as %s' % (raw, kind.__name__))
    if key in schema:
        factors = _UNITS[schema[key]][1]
        raise ConfigError(where, 'missing unit suffix',
                          'accepted suffixes: %s' % ', '.join('_' + s for s in sorted(factors)))
    base, _, suffix = key.rpartition('_')
    unit_class = schema.get(base)
    if not base or not isinstance(unit_class, str):
        raise ConfigError(where, 'unknown key', 'accepted keys: %s' % ', '.join(sorted(schema)))
    canonical, factors = _UNITS[unit_class]
    if suffix.lower() not in factors:
        raise ConfigError(where, 'unit suffix _%s is not a unit of %s' % (suffix, unit_class),
                          'accepted suffixes: %s' % ', '.join('_' + s for s in sorted(factors)))
    try:
        value = _convert(raw, factors[suffix.lower()], suffix.lower(), canonical)
    except ValueError:
        raise ConfigError(where, 'cannot read %r as a number' % raw)
    return '%s_%s' % (base, canonical), value


def _schema(section, kind=None):
    if section == 'cell':
        return _CELL_KEYS[kind]
    return _SCHEMA[section]


def _normalize_section(section, items, kind=None):
    if section not in _SECTIONS:
        raise ConfigError(section, 'unknown section', 'accepted sections: %s' % ', '.join(_SECTIONS))
    items = dict(items)
    out = {}
    if section == 'cell':
        kind = items.pop('kind', kind)
        if kind not in _CELL_KEYS:
            raise ConfigError('cell.kind', 'unknown cell kind %r' % kind,
                              'one of %s' % ', '.join(sorted(_CELL_KEYS)))
        out['kind'] = kind
    schema = _schema(section, kind)
    for key, raw in items.items():
        name, value = _normalize_key(section, key, raw, schema)
        out[name] = value
    return out


def _format(value):
    if isinstance(value, bool):
        return 'true' if value else 'false'
    if isinstance(value, float):
        return repr(value)
    return str(value)


class RunConfig(param.Parameterized):
    """
    Normalized run configuration: one dictionary of canonical-unit
    values per section plus named variants.
    """

    sections = param.Dict(default={}, doc="""
        Normalized base sections.""")

    variants = param.Dict(default={}, doc="""
        Normalized overrides per variant name, nested like sections.""")

    source = param.String(default=None, allow_None=True, doc="""
        File the configuration was read from.""")

    @classmethod
    def from_string(cls, text, source=None):
        parser = configparser.ConfigParser(interpolation=None)
        parser.optionxform = str
        try:
            parser.read_string(text, source=source or '<recipe>')
        except configparser.Error as e:
            raise ConfigError(source or '<recipe>', 'unreadable recipe: %s' % e)
        sections, variants = {}, {}
        for name in parser.sections():
            if name.startswith('variant '):
                continue
            sections[name] = _normalize_section(name, parser.items(name))
        if 'cell' not in sections:
            raise ConfigError('cell', 'missing section', 'every recipe describes exactly one cell')
        for name in parser.sections():
            if not name.startswith('variant '):
                continue
            grouped = {}
            for key, raw in parser.items(name):
                section, _, option = key.partition('.')
                if not option:
                    raise ConfigError('%s.%s' % (name, key), 'variant keys must be section.key')
                grouped.setdefault(section, {})[option] = raw
            normalized = {}
            for section, items in grouped.items():
                kind = None
                if section == 'cell' and 'kind' not in items:
                    kind = sections['cell']['kind']
                normalized[section] = _normalize_section(section, items, kind)
            variants[name[len('variant '):].strip()] = normalized
        return cls(sections=sections, variants=variants, source=source)

    @classmethod
    def from_file(cls, path):
        if not os.path.isfile(path):
            raise ConfigError(path, 'no such recipe file')
        with open(path, encoding='utf-8') as f:
            return cls.from_string(f.read(), source=path)

    def serialize(self):
        """
        INI text of the normalized configuration; parsing it again
        yields an identical configuration.
        """
        lines = []
        blocks = [(name, values) for name, values in self.sections.items()]
        for variant, overrides in self.variants.items():
            flat = {}
            for section, values in overrides.items():
                for key, value in values.items():
                    flat['%s.%s' % (section, key)] = value
            blocks.append(('variant %s' % variant, flat))
        for name, values in blocks:
            lines.append('[%s]' % name)
            for key in sorted(values):
                lines.append('%s = %s' % (key, _format(values[key])))
            lines.append('')
        return '\n'.join(lines)

    def resolve(self, variant=None):
        """
        Sections with the overrides of a variant applied.
        """
        sections = copy.deepcopy(self.sections)
        if variant is None:
            return sections
        if variant not in self.variants:
            raise ConfigError('variant', 'unknown variant %r' % variant,
                              'one of %s' % ', '.join(self.variants))
        for section, values in self.variants[variant].items():
            if section == 'cell' and values.get('kind', sections['cell']['kind']) != sections['cell']['kind']:
                sections['cell'] = dict(values)
            else:
                sections.setdefault(section, {}).update(values)
        return sections

    def variant_names(self):
        return list(self.variants) or [None]

    def get(self, section, key, default=None, variant=None):
        return self.resolve(variant).get(section, {}).get(key, default)


#---------------------------------------------------------------------
# Builders
#---------------------------------------------------------------------

def _strip(values):
    """Maps canonical keys (base_unit) back to parameter names."""
    out = {}
    for key, value in values.items():
        base, _, suffix = key.rpartition('_')
        out[base if base and suffix in ('mm', 'rad', 'K', 'torr', 's', 'hz', 'cm2s') else key] = value
    return out


def build_beam(sections):
    return BeamSpec(**_strip(sections.get('beam', {})))


def build_cell(sections):
    """
    Builds the cell configuration object described by resolved
    sections.
    """
    cell = _strip(sections['cell'])
    kind = cell.pop('kind')
    beam = build_beam(sections)
    try:
        if kind == 'recirculating':
            return RecirculatingCellConfig(beam=beam, **cell).validate()
        elif kind == 'cylindrical':
            return CylindricalCellConfig(beam=beam, **cell).validate()
        w_in, focal = cell.pop('input_waist', None), cell.pop('lens_focal', None)
        if (w_in is None) != (focal is None):
            raise ConfigError('cell.lens_focal_mm', 'input_waist and lens_focal go together')
        if w_in is not None:
            return SinglePassConfig.from_lens(w_in, focal, cell.pop('d', 45.0), wavelength=beam.wavelength,
                                            **cell).validate()
        return SinglePassConfig(beam=beam, **cell).validate()
    except ValueError as e:
        if isinstance(e, ConfigError):
            raise
        raise ConfigError('cell', str(e))


def build_gas(sections):
    return GasSpec(**_strip(sections.get('gas', {})))


def build_dynamics(sections):
    values = _strip(sections.get('dynamics', {}))
    if 'larmor' in values:
        values['omega_l'] = 2 * np.pi * values.pop('larmor')
    return SpinDynamics(**values)


#---------------------------------------------------------------------
# Shipped recipes
#---------------------------------------------------------------------

def list_recipes():
    """Names of the recipes shipped with the package."""
    return sorted(os.path.splitext(os.path.basename(p))[0]
                  for p in glob.glob(os.path.join(RECIPE_DIR, '*.cfg')))


def recipe_path(name):
    path = os.path.join(RECIPE_DIR, name + '.cfg')
    if not os.path.isfile(path):
        raise ConfigError('recipe', 'no shipped recipe %r' % name,
                          'available: %s' % ', '.join(list_recipes()))
    return path
