"""
The io module contains utilities for recording the state of a run,
reading run configurations and writing tables, summaries and
manifests. Recipes are imported from multipass.io.recipe since they
depend on the cell models.
"""
from __future__ import absolute_import, division, unicode_literals

from .state import state # noqa
from .save import build_manifest, save_csv, save_json, to_jsonable # noqa
