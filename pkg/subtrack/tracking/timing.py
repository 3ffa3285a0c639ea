# -*- coding: utf-8 -*-
"""Wall-clock timing of experiment phases (dataset generation, tracker runs, validation sweeps).

Durations are logged at INFO on this module's logger, so the ``[logger_*]`` sections of an experiment file decide
whether they appear. They never enter the written artifacts, which stay byte-identical across reruns.

"""
from builtins import object
import contextlib
import logging
import time


_log = logging.getLogger(__name__)


class Stopwatch(object):

    """Elapsed time of one phase; ``elapsed`` is ``None`` until the phase ends."""

    def __init__(self, name):
        """Start timing the phase called ``name``."""
        self.name = name
        self.elapsed = None
        self._start = time.perf_counter()

    def stop(self):
        """Freeze ``elapsed`` (seconds) and return it."""
        self.elapsed = time.perf_counter() - self._start
        return self.elapsed


@contextlib.contextmanager
def timing_context(name):
    """Time the body of the with-statement and log its duration, also when the body raises.

    :param name: phase name to log with the duration
    :type name: str
    :return: the running stopwatch (bound by ``as``)
    :rtype: Stopwatch

    """
    stopwatch = Stopwatch(name)
    try:
        yield stopwatch
    finally:
        stopwatch.stop()
        _log.info('%s: %.3f s', name, stopwatch.elapsed)
