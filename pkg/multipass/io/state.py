"""
Various utilities for recording the state of a run so it can be
embedded in the run manifest.
"""
from __future__ import absolute_import, division, unicode_literals

import logging
import threading

import param


class _state(param.Parameterized):
    """
    Holds global state associated with the current run, allowing the
    library to report conditions a user should see next to the results
    (quadrature truncation, inconsistent reflection counts, violated
    modelling premises) without having to thread a logger through every
    call.
    """

    seed = param.Integer(default=None, allow_None=True, doc="""
        Seed of the random streams used by the current run.""")

    # Warnings recorded during the current run, in order
    _warnings = []

    # Derived quantities reported by the current run
    _derived = {}

    _lock = threading.Lock()

    def warn(self, obj, msg, *args):
        """
        Logs a warning through param on the supplied object (or
        param.main) and records the formatted message for the manifest.
        """
        text = msg % args if args else msg
        logger = obj if isinstance(obj, param.Parameterized) else param.main
        logger.param.warning(text)
        with self._lock:
            self._warnings.append(text)
        return text

    def log(self, obj, msg, *args):
        """
        Logs a debug message through param without recording it.
        """
        text = msg % args if args else msg
        logger = obj if isinstance(obj, param.Parameterized) else param.main
        logger.param.log(logging.DEBUG, text)
        return text

    def record(self, **derived):
        with self._lock:
            self._derived.update(derived)

    @property
    def warnings(self):
        return list(self._warnings)

    @property
    def derived(self):
        return dict(self._derived)

    def reset(self):
        with self._lock:
            del self._warnings[:]
            self._derived.clear()
        self.seed = None


state = _state()
