"""
Writes run outputs: CSV tables, JSON summaries and the run manifest
recording configuration, tolerances, seed and warnings.
"""
from __future__ import absolute_import, division, unicode_literals

import csv
import json
import os
import sys

import numpy as np

from ..config import config
from .state import state

SCHEMA_VERSION = 1


#---------------------------------------------------------------------
# Private API
#---------------------------------------------------------------------

def _cell(value):
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, np.integer):
        return str(int(value))
    return value


def to_jsonable(obj):
    """
    Converts numpy scalars and arrays, tuples and non-finite floats
    into plain JSON types; non-finite floats become strings.
    """
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    elif isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    elif isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    elif isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    elif isinstance(obj, np.integer):
        return int(obj)
    elif isinstance(obj, (float, np.floating)):
        obj = float(obj)
        return obj if np.isfinite(obj) else repr(obj)
    return obj


def _ensure_dir(path):
    directory = os.path.dirname(os.path.abspath(path))
    if not os.path.isdir(directory):
        os.makedirs(directory)


#---------------------------------------------------------------------
# Public API
#---------------------------------------------------------------------

def save_csv(path, header, rows):
    """
    Writes rows to a UTF-8 CSV file with a header line; floats are
    written with their full repr.

    Arguments
    ---------
    path: str
      The file to write.
    header: list(str)
      Column names.
    rows: iterable of sequences
      One sequence of values per row, ordered like the header.
    """
    _ensure_dir(path)
    count = 0
    with open(path, 'w', encoding='utf-8', newline='') as f:
        writer = csv.writer(f)
        writer.writerow(header)
        for row in rows:
            if len(row) != len(header):
                raise ValueError('Row %d has %d values, the header %d.'
                                 % (count, len(row), len(header)))
            writer.writerow([_cell(v) for v in row])
            count += 1
    return count


def save_json(path, payload):
    """
    Writes a JSON document with sorted keys, two-space indentation and
    a trailing newline.
    """
    _ensure_dir(path)
    with open(path, 'w', encoding='utf-8') as f:
        json.dump(to_jsonable(payload), f, indent=2, sort_keys=True)
        f.write('\n')
    return path


def build_manifest(command, run_config=None, seed=None, wall_clock=None,
                   command_line=None, outputs=()):
    """
    Assembles the manifest of a run from the recorded state.

    Arguments
    ---------
    command: str
      Subcommand that was run.
    run_config: RunConfig or None
      The run configuration; stored in canonical units.
    seed: int or None
      Seed of the stochastic parts of the run.
    wall_clock: float or None
      Run time in seconds.
    command_line: list(str) or None
      Arguments of the invocation, defaults to sys.argv.
    outputs: list(str)
      Files written by the run.
    """
    from .. import __version__
    return to_jsonable({
        'schema_version': SCHEMA_VERSION,
        'command': command,
        'command_line': list(sys.argv if command_line is None else command_line),
        'tool_version': __version__,
        'config': None if run_config is None else {
            'source': run_config.source,
            'sections': run_config.sections,
            'variants': run_config.variants},
        'tolerances': config.snapshot(),
        'seed': seed,
        'seed_policy': 'numpy Philox streams spawned from one SeedSequence per run',
        'wall_clock_s': wall_clock,
        'derived': state.derived,
        'warnings': state.warnings,
        'outputs': sorted(os.path.basename(o) for o in outputs),
    })
