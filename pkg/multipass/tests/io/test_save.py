from __future__ import absolute_import, division, unicode_literals

import json

import numpy as np
import pytest

from multipass._testing.util import read_csv
from multipass.config import config
from multipass.io import build_manifest, save_csv, save_json, state, to_jsonable
from multipass.io.recipe import RunConfig, recipe_path


def test_to_jsonable():
    payload = {'a': np.float64(1.5), 'b': np.arange(3), 'c': (np.int64(2), np.bool_(True)),
               'd': np.inf, 1: float('nan')}
    assert to_jsonable(payload) == {'a': 1.5, 'b': [0, 1, 2], 'c': [2, True],
                                    'd': 'inf', '1': 'nan'}


def test_save_csv(tmp_path):
    path = tmp_path / 'out' / 'table.csv'
    count = save_csv(str(path), ['n', 'x_mm'], [(0, 0.1), (np.int64(1), np.float64(1 / 3.))])
    assert count == 2
    header, rows = read_csv(path)
    assert header == ['n', 'x_mm']
    assert rows == [['0', '0.1'], ['1', repr(1 / 3.)]]


def test_save_csv_rejects_ragged_rows(tmp_path):
    with pytest.raises(ValueError):
        save_csv(str(tmp_path / 't.csv'), ['a', 'b'], [(1,)])


def test_save_json(tmp_path):
    path = str(tmp_path / 'summary.json')
    save_json(path, {'b': np.float32(0.5), 'a': [1, 2]})
    with open(path, encoding='utf-8') as f:
        text = f.read()
    assert text.endswith('}\n')
    assert text.index('"a"') < text.index('"b"')
    assert json.loads(text) == {'a': [1, 2], 'b': 0.5}


def test_manifest(tmp_path):
    run = RunConfig.from_file(recipe_path('fig1'))
    state.warn(None, 'a recorded warning')
    state.record(n_reflections=78)
    with config.set(literal_segments=True):
        manifest = build_manifest('spots', run, seed=4, wall_clock=0.5,
                                  command_line=['spots', '--recipe', 'fig1'],
                                  outputs=[str(tmp_path / 'spots.csv')])
    assert manifest['schema_version'] == 1
    assert manifest['command'] == 'spots'
    assert manifest['command_line'] == ['spots', '--recipe', 'fig1']
    assert manifest['seed'] == 4
    assert manifest['tolerances']['literal_segments'] is True
    assert manifest['config']['sections']['cell']['f2_mm'] == 1000.
    assert manifest['warnings'] == ['a recorded warning']
    assert manifest['derived'] == {'n_reflections': 78}
    assert manifest['outputs'] == ['spots.csv']
    assert isinstance(manifest['tool_version'], str)
    json.dumps(manifest)
