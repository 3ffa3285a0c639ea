# -*- coding: utf-8 -*-
r"""Data windows feeding the tracker: the last ``T`` samples and their covariance ``W W^T``.

:class:`DataWindow` keeps a ring buffer of the ``T`` most recent samples ``W_t = [u_{t-T+1} ... u_t]`` and maintains
``W_t W_t^T`` through the rank-2 recursion

.. math:: W_t W_t^T = W_{t-1} W_{t-1}^T - u_{t-T} u_{t-T}^T + u_t u_t^T

(rank-1 while the window fills), so a push costs ``O(n^2)`` regardless of ``T``.

:class:`DiscountedWindow` replaces the hard cutoff by exponential forgetting, ``C <- gamma^2 C + u u^T``.

Both symmetrize the covariance after every update. The sliding window also recomputes it from the raw samples
every ``refresh_interval`` pushes to bound accumulated round-off.

Windows are single-writer objects: ``push`` mutates the window in place and returns it.

"""
from __future__ import division
from builtins import object

import numpy

from subtrack.tracking.constant import DEFAULT_REFRESH_INTERVAL
from subtrack.tracking.exceptions import DimensionMismatch, EmptyWindow


def _read_only(array):
    """Return a read-only view of ``array``."""
    view = array.view()
    view.setflags(write=False)
    return view


class DataWindow(object):

    r"""Ring buffer of the last ``capacity`` samples plus the maintained covariance ``W W^T``.

    :ivar ambient_dim: (*int > 0*) sample length ``n``
    :ivar capacity: (*int > 0*) window length ``T``
    :ivar refresh_interval: (*int > 0*) pushes between recomputations of the covariance from the buffer

    """

    def __init__(self, ambient_dim, capacity, refresh_interval=DEFAULT_REFRESH_INTERVAL):
        """Construct an empty DataWindow; see class docstring for input descriptions."""
        if ambient_dim < 1 or capacity < 1:
            raise ValueError('ambient_dim = {0} and capacity = {1} must be positive!'.format(ambient_dim, capacity))
        if refresh_interval < 1:
            raise ValueError('refresh_interval = {0} must be positive!'.format(refresh_interval))
        self.ambient_dim = ambient_dim
        self.capacity = capacity
        self.refresh_interval = refresh_interval

        self._samples = numpy.zeros((capacity, ambient_dim))
        self._covariance = numpy.zeros((ambient_dim, ambient_dim))
        self._oldest = 0
        self._count = 0
        self._pushes_since_refresh = 0

    @property
    def count(self):
        """Return the number of samples currently held."""
        return self._count

    @property
    def is_full(self):
        """Return True once the window holds ``capacity`` samples."""
        return self._count == self.capacity

    @property
    def ready(self):
        """Return True when the tracker may run on this window, i.e. once it is full."""
        return self.is_full

    @property
    def covariance(self):
        """Return a read-only view of ``W W^T``."""
        return _read_only(self._covariance)

    @property
    def trace(self):
        """Return ``tr(W W^T) = ||W||_F^2``."""
        return numpy.trace(self._covariance)

    def push(self, sample):
        r"""Append ``sample``, evicting the oldest sample when the window is full.

        :param sample: new sample ``u_t``
        :type sample: array of float64 with shape (n,)
        :return: this window, updated in place
        :rtype: DataWindow
        :raise: DimensionMismatch if ``sample`` does not have length ``n``

        """
        sample = numpy.asarray(sample, dtype=numpy.float64).ravel()
        if sample.shape[0] != self.ambient_dim:
            raise DimensionMismatch('sample length {0:d} != ambient dimension {1:d}'.format(sample.shape[0], self.ambient_dim))

        if self.is_full:
            evicted = self._samples[self._oldest, ...]
            self._covariance -= numpy.outer(evicted, evicted)
            self._samples[self._oldest, ...] = sample
            self._oldest = (self._oldest + 1) % self.capacity
        else:
            self._samples[(self._oldest + self._count) % self.capacity, ...] = sample
            self._count += 1
        self._covariance += numpy.outer(sample, sample)
        self._covariance = 0.5 * (self._covariance + self._covariance.T)

        self._pushes_since_refresh += 1
        if self._pushes_since_refresh >= self.refresh_interval:
            self.refresh()
        return self

    def refresh(self):
        """Recompute the covariance from the buffered samples."""
        data = self.data_matrix() if self._count else numpy.zeros((self.ambient_dim, 0))
        self._covariance = numpy.dot(data, data.T)
        self._pushes_since_refresh = 0

    def data_matrix(self):
        r"""Return ``W = [u_{t-count+1} ... u_t]``, columns ordered oldest to newest.

        :rtype: array of float64 with shape (n, count)
        :raise: EmptyWindow if the window holds no samples

        """
        if self._count == 0:
            raise EmptyWindow('window holds no samples')
        order = (self._oldest + numpy.arange(self._count)) % self.capacity
        return self._samples[order, ...].T.copy()

    def copy(self):
        """Return an independent copy of this window."""
        clone = DataWindow(self.ambient_dim, self.capacity, refresh_interval=self.refresh_interval)
        clone._samples = self._samples.copy()
        clone._covariance = self._covariance.copy()
        clone._oldest = self._oldest
        clone._count = self._count
        clone._pushes_since_refresh = self._pushes_since_refresh
        return clone


class DiscountedWindow(object):

    r"""Exponentially discounted covariance ``C_t = gamma^2 C_{t-1} + u_t u_t^T``.

    :ivar ambient_dim: (*int > 0*) sample length ``n``
    :ivar forget: (*float64 in [0, 1]*) forgetting factor ``gamma``; 1 accumulates without discount

    """

    def __init__(self, ambient_dim, forget):
        """Construct an empty DiscountedWindow; see class docstring for input descriptions."""
        if ambient_dim < 1:
            raise ValueError('ambient_dim = {0} must be positive!'.format(ambient_dim))
        if not 0.0 <= forget <= 1.0:
            raise ValueError('forget = {0} must lie in [0, 1]!'.format(forget))
        self.ambient_dim = ambient_dim
        self.forget = forget
        self._covariance = numpy.zeros((ambient_dim, ambient_dim))
        self._count = 0

    @property
    def count(self):
        """Return the number of samples pushed so far."""
        return self._count

    @property
    def ready(self):
        """Return True once at least one sample has been pushed."""
        return self._count > 0

    @property
    def covariance(self):
        """Return a read-only view of the discounted covariance."""
        return _read_only(self._covariance)

    @property
    def trace(self):
        """Return the trace of the discounted covariance."""
        return numpy.trace(self._covariance)

    def push(self, sample):
        """Discount the covariance by ``gamma^2`` and add ``sample sample^T``; returns this window."""
        sample = numpy.asarray(sample, dtype=numpy.float64).ravel()
        if sample.shape[0] != self.ambient_dim:
            raise DimensionMismatch('sample length {0:d} != ambient dimension {1:d}'.format(sample.shape[0], self.ambient_dim))
        self._covariance *= self.forget ** 2
        self._covariance += numpy.outer(sample, sample)
        self._covariance = 0.5 * (self._covariance + self._covariance.T)
        self._count += 1
        return self

    def copy(self):
        """Return an independent copy of this window."""
        clone = DiscountedWindow(self.ambient_dim, self.forget)
        clone._covariance = self._covariance.copy()
        clone._count = self._count
        return clone


def _require_window(window, window_class):
    """Raise TypeError unless ``window`` is a ``window_class``."""
    if not isinstance(window, window_class):
        raise TypeError('expected a {0}, got {1}'.format(window_class.__name__, type(window).__name__))


def push(window, sample):
    """Push ``sample`` into a sliding ``window``; returns the window."""
    _require_window(window, DataWindow)
    return window.push(sample)


def push_discounted(window, sample):
    """Push ``sample`` into a discounted ``window``; returns the window."""
    _require_window(window, DiscountedWindow)
    return window.push(sample)


def data_matrix(window):
    """Return the samples of a sliding ``window`` as an ``n x count`` matrix, oldest column first."""
    _require_window(window, DataWindow)
    return window.data_matrix()
