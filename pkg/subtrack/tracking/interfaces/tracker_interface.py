# -*- coding: utf-8 -*-
r"""Interface for streaming subspace trackers.

A tracker consumes one sample ``u_t`` of ``R^n`` per time step and maintains an estimate of a ``d``-dimensional
subspace that (approximately) contains the recent samples. Implementations differ in how much past data they
retain (a sliding window, a discounted covariance, a single sample) and how they represent the estimate
(orthonormal bases on the Grassmannian, or non-orthonormal weight matrices as in RLS-type methods), but all of
them expose the estimate as an orthonormal :class:`~subtrack.tracking.grassmann.Subspace` so that results can be
compared through the same metrics.

Implementations are sequential state machines: ``update`` must be called with samples in time order. Distinct
tracker instances share no state and may run on different threads.

"""
from builtins import object
from abc import ABCMeta, abstractmethod, abstractproperty
from future.utils import with_metaclass


class SubspaceTrackerInterface(with_metaclass(ABCMeta, object)):

    r"""Interface for a tracker of a time-varying subspace of ``R^n`` from streaming samples."""

    @abstractproperty
    def ambient_dim(self):
        """Return ``n``, the length of each sample."""
        pass

    @abstractproperty
    def dim(self):
        """Return ``d``, the dimension of the tracked subspace."""
        pass

    @abstractproperty
    def time(self):
        """Return the number of samples consumed so far."""
        pass

    @abstractproperty
    def estimate(self):
        """Return the current estimate as a :class:`~subtrack.tracking.grassmann.Subspace`."""
        pass

    @abstractmethod
    def update(self, sample):
        r"""Consume the next sample ``u_t`` and refresh the estimate.

        :param sample: new sample
        :type sample: array of float64 with shape (ambient_dim,)
        :return: the estimate after processing ``sample``
        :rtype: Subspace

        """
        pass
