# -*- coding: utf-8 -*-
r"""Comparison trackers: GROUSE and PAST.

GROUSE takes one Grassmannian gradient step per sample on the single-sample cost ``||P_U^perp u||^2``. The gradient
``-2 r w^T`` (``w = U^T u``, ``r = u - U w``) has rank one, so the exponential map has the closed form

.. math:: U_+ = U + (\cos\sigma - 1) U y y^T + \sin\sigma\, x y^T, \qquad
   \sigma = 2\alpha \|r\| \|w\|, \; x = r / \|r\|, \; y = w / \|w\|,

at ``O(n d)`` per sample. With the same fixed step it coincides with GREAT on a window of length one.

PAST (projection approximation subspace tracking) runs recursive least squares on the weight matrix ``W`` with
the exponentially weighted inverse correlation ``P``:

.. math:: y = W^T u, \quad h = P y, \quad g = h / (\beta + y^T h), \quad
   P \leftarrow (P - g h^T) / \beta, \quad W \leftarrow W + (u - W y) g^T.

``W`` is not orthonormal; its column span is the estimate.

"""
from __future__ import division
import collections

import numpy

from subtrack.tracking.constant import DEFAULT_PAST_FORGETTING_FACTOR, DEFAULT_PAST_INITIAL_SCALE, DEFAULT_RANK_TOLERANCE, GRADIENT_NORM_FLOOR
from subtrack.tracking.exceptions import DimensionMismatch
from subtrack.tracking.grassmann import Subspace, qr_basis, orthonormalize
from subtrack.tracking.interfaces.tracker_interface import SubspaceTrackerInterface


def _as_sample(sample, ambient_dim):
    """Flatten ``sample`` and check its length."""
    sample = numpy.asarray(sample, dtype=numpy.float64).ravel()
    if sample.shape[0] != ambient_dim:
        raise DimensionMismatch('sample length {0:d} != ambient dimension {1:d}'.format(sample.shape[0], ambient_dim))
    return sample


def grouse_step(estimate, sample, step_size):
    r"""One GROUSE step from ``estimate`` on ``sample`` with step ``alpha``.

    :param estimate: current estimate ``U``
    :type estimate: Subspace
    :param sample: new sample ``u``
    :type sample: array of float64 with shape (n,)
    :param step_size: ``alpha``
    :type step_size: float64 > 0
    :rtype: Subspace
    :raise: DimensionMismatch if ``sample`` does not have length ``n``

    """
    if not step_size > 0.0:
        raise ValueError('step_size = {0} must be positive!'.format(step_size))
    sample = _as_sample(sample, estimate.ambient_dim)
    basis = estimate.basis
    weights = numpy.dot(basis.T, sample)
    residual = sample - numpy.dot(basis, weights)
    residual_norm = numpy.linalg.norm(residual)
    weights_norm = numpy.linalg.norm(weights)
    if 2.0 * residual_norm * weights_norm < GRADIENT_NORM_FLOOR:
        return estimate

    angle = 2.0 * step_size * residual_norm * weights_norm
    unit_residual = residual / residual_norm
    unit_weights = weights / weights_norm
    moved = basis + numpy.outer(
        (numpy.cos(angle) - 1.0) * numpy.dot(basis, unit_weights) + numpy.sin(angle) * unit_residual,
        unit_weights,
    )
    return Subspace(qr_basis(moved))


class GrouseTracker(SubspaceTrackerInterface):

    r"""Streaming GROUSE tracker with a fixed step size.

    :ivar step_size: (*float64 > 0*) ``alpha``

    """

    def __init__(self, initial_estimate, step_size, time=0):
        """Construct a GrouseTracker starting from ``initial_estimate``."""
        if not step_size > 0.0:
            raise ValueError('step_size = {0} must be positive!'.format(step_size))
        self.step_size = step_size
        self._estimate = initial_estimate
        self._time = time

    @property
    def ambient_dim(self):
        """Return ``n``."""
        return self._estimate.ambient_dim

    @property
    def dim(self):
        """Return ``d``."""
        return self._estimate.dim

    @property
    def time(self):
        """Return the number of samples consumed."""
        return self._time

    @property
    def estimate(self):
        """Return the current estimate."""
        return self._estimate

    def update(self, sample):
        """Take one GROUSE step on ``sample`` and return the new estimate."""
        self._estimate = grouse_step(self._estimate, sample, self.step_size)
        self._time += 1
        return self._estimate


# See PastState (below) for docstring.
_BasePastState = collections.namedtuple('_BasePastState', [
    'weights',
    'inverse_correlation',
    'forget',
])


class PastState(_BasePastState):

    r"""State of the PAST recursion.

    :ivar weights: (*array of float64 with shape (n, d)*) weight matrix ``W`` (not orthonormal)
    :ivar inverse_correlation: (*array of float64 with shape (d, d)*) symmetric ``P``
    :ivar forget: (*float64 in (0, 1]*) forgetting factor ``beta``

    """

    __slots__ = ()

    def __new__(cls, weights, inverse_correlation, forget=DEFAULT_PAST_FORGETTING_FACTOR):
        """Allocate and construct a new instance; see class docstring for input descriptions."""
        weights = numpy.array(weights, dtype=numpy.float64)
        inverse_correlation = numpy.array(inverse_correlation, dtype=numpy.float64)
        if weights.ndim != 2 or inverse_correlation.shape != (weights.shape[1], weights.shape[1]):
            raise DimensionMismatch('weights shape {0} and inverse correlation shape {1} disagree'.format(
                weights.shape,
                inverse_correlation.shape,
            ))
        if not 0.0 < forget <= 1.0:
            raise ValueError('forget = {0} must lie in (0, 1]!'.format(forget))
        weights.setflags(write=False)
        inverse_correlation.setflags(write=False)
        return super(PastState, cls).__new__(cls, weights, inverse_correlation, forget)

    @classmethod
    def from_estimate(cls, estimate, forget=DEFAULT_PAST_FORGETTING_FACTOR, initial_scale=DEFAULT_PAST_INITIAL_SCALE):
        """Start from ``W = U`` and ``P = initial_scale * I``."""
        return cls(estimate.basis, initial_scale * numpy.eye(estimate.dim), forget=forget)


def past_step(state, sample):
    r"""One PAST recursion on ``sample``.

    :param state: state before the sample
    :type state: PastState
    :param sample: new sample ``u``
    :type sample: array of float64 with shape (n,)
    :rtype: PastState
    :raise: DimensionMismatch if ``sample`` does not have length ``n``

    """
    weights, inverse_correlation, forget = state
    sample = _as_sample(sample, weights.shape[0])

    projected = numpy.dot(weights.T, sample)
    filtered = numpy.dot(inverse_correlation, projected)
    gain = filtered / (forget + numpy.dot(projected, filtered))
    updated_inverse = (inverse_correlation - numpy.outer(gain, filtered)) / forget
    updated_inverse = 0.5 * (updated_inverse + updated_inverse.T)
    updated_weights = weights + numpy.outer(sample - numpy.dot(weights, projected), gain)
    return PastState(updated_weights, updated_inverse, forget=forget)


def past_subspace(state, rank_tolerance=DEFAULT_RANK_TOLERANCE):
    """Return the orthonormalized column span of the PAST weights; raises RankDeficient if they lost rank."""
    return orthonormalize(state.weights, rank_tolerance=rank_tolerance)


class PastTracker(SubspaceTrackerInterface):

    r"""Streaming PAST tracker exposing the span of its weights as the estimate.

    :ivar state: (*PastState*) current recursion state

    """

    def __init__(self, initial_estimate, forget=DEFAULT_PAST_FORGETTING_FACTOR, initial_scale=DEFAULT_PAST_INITIAL_SCALE, time=0):
        """Construct a PastTracker with ``W = initial_estimate.basis`` and ``P = initial_scale * I``."""
        self.state = PastState.from_estimate(initial_estimate, forget=forget, initial_scale=initial_scale)
        self._estimate = initial_estimate
        self._time = time

    @property
    def ambient_dim(self):
        """Return ``n``."""
        return self.state.weights.shape[0]

    @property
    def dim(self):
        """Return ``d``."""
        return self.state.weights.shape[1]

    @property
    def time(self):
        """Return the number of samples consumed."""
        return self._time

    @property
    def estimate(self):
        """Return the orthonormalized span of the current weights."""
        return self._estimate

    def update(self, sample):
        """Run one PAST recursion on ``sample`` and return the new estimate."""
        self.state = past_step(self.state, sample)
        self._estimate = past_subspace(self.state)
        self._time += 1
        return self._estimate
