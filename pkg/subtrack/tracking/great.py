# -*- coding: utf-8 -*-
r"""GREAT: windowed Riemannian gradient descent for tracking a time-varying subspace.

At time ``t`` the tracker holds the window ``W_t`` of the last ``T`` samples and minimizes the projection error

.. math:: F_t(U) = \| P_U^\perp W_t \|_F^2 = \mathrm{tr}(W_t W_t^T) - \mathrm{tr}(U^T W_t W_t^T U)

over ``Gr(n, d)`` with ``K`` steps of Riemannian gradient descent, warm-started from the previous estimate:

.. math:: \mathrm{grad}\, F_t(U) = -2 P_U^\perp W_t W_t^T U, \qquad
   \hat U_t^{(k+1)} = \mathrm{Exp}_{\hat U_t^{(k)}}(-\alpha\, \mathrm{grad}\, F_t(\hat U_t^{(k)})).

Everything is computed from the maintained covariance ``W_t W_t^T``, so one sample costs ``O(K n^2 d)``.

The tracker runs in fixed-step mode (the mode covered by :mod:`subtrack.tracking.certs`) or with Armijo
backtracking starting from ``alpha``. With a forgetting factor the sliding window is replaced by a discounted
covariance.

"""
from __future__ import division
import collections

import numpy

from subtrack.tracking.constant import DEFAULT_ARMIJO_PARAMETERS, DEFAULT_RANK_TOLERANCE, DEFAULT_REFRESH_INTERVAL, GRADIENT_NORM_FLOOR
from subtrack.tracking.exceptions import DimensionMismatch, RankDeficient
from subtrack.tracking.grassmann import Subspace, exp_map, tangent_project
from subtrack.tracking.interfaces.tracker_interface import SubspaceTrackerInterface
from subtrack.tracking.optimization import armijo_step
from subtrack.tracking.window import DataWindow, DiscountedWindow, push, push_discounted


# See TrackerConfig (below) for docstring.
_BaseTrackerConfig = collections.namedtuple('_BaseTrackerConfig', [
    'ambient_dim',
    'dim',
    'window_length',
    'step_size',
    'inner_iters',
    'line_search',
    'armijo_parameters',
    'forgetting_factor',
    'refresh_interval',
])


class TrackerConfig(_BaseTrackerConfig):

    r"""Container to hold the parameters of a GREAT tracker.

    :ivar ambient_dim: (*int > 0*) sample length ``n``
    :ivar dim: (*int in [1, n]*) subspace dimension ``d``
    :ivar window_length: (*int >= d*) window length ``T``; unused when ``forgetting_factor`` is set
    :ivar step_size: (*float64 > 0*) fixed step size ``alpha``, or the initial trial step of the line search
    :ivar inner_iters: (*int >= 1*) gradient steps ``K`` per sample
    :ivar line_search: (*bool*) choose each step by Armijo backtracking instead of using ``alpha`` directly
    :ivar armijo_parameters: (*ArmijoParameters*) backtracking controls, used when ``line_search`` is True
    :ivar forgetting_factor: (*float64 in [0, 1] or None*) if set, use a discounted covariance with this factor
    :ivar refresh_interval: (*int > 0*) pushes between covariance recomputations of the sliding window

    """

    __slots__ = ()

    def __new__(cls, ambient_dim, dim, window_length, step_size, inner_iters=1, line_search=False,
                armijo_parameters=DEFAULT_ARMIJO_PARAMETERS, forgetting_factor=None, refresh_interval=DEFAULT_REFRESH_INTERVAL):
        """Allocate and construct a new instance; see class docstring for input descriptions."""
        if not 1 <= dim <= ambient_dim:
            raise ValueError('dim = {0} must lie in [1, ambient_dim = {1}]!'.format(dim, ambient_dim))
        if forgetting_factor is None and window_length < dim:
            raise ValueError('window_length = {0} must be at least dim = {1}!'.format(window_length, dim))
        if inner_iters < 1:
            raise ValueError('inner_iters = {0} must be at least 1!'.format(inner_iters))
        if not step_size > 0.0:
            raise ValueError('step_size = {0} must be positive!'.format(step_size))
        return super(TrackerConfig, cls).__new__(
            cls,
            ambient_dim,
            dim,
            window_length,
            step_size,
            inner_iters,
            line_search,
            armijo_parameters,
            forgetting_factor,
            refresh_interval,
        )


#: State of a GREAT tracker: current ``estimate`` (Subspace), its ``window`` and the step index ``time``
TrackerState = collections.namedtuple('TrackerState', [
    'estimate',
    'window',
    'time',
])


def _check_covariance(estimate, covariance):
    """Raise DimensionMismatch unless ``covariance`` is ``n x n`` for the ambient dimension of ``estimate``."""
    expected = (estimate.ambient_dim, estimate.ambient_dim)
    if covariance.shape != expected:
        raise DimensionMismatch('covariance shape {0} != {1}'.format(covariance.shape, expected))


def cost(estimate, covariance, trace_ww):
    r"""Compute ``F(U) = tr(W W^T) - tr(U^T W W^T U)``.

    :param estimate: point at which to evaluate the cost
    :type estimate: Subspace
    :param covariance: ``W W^T``
    :type covariance: array of float64 with shape (n, n)
    :param trace_ww: ``tr(W W^T)``, as supplied by the window
    :type trace_ww: float64
    :rtype: float64

    """
    covariance = numpy.asarray(covariance)
    _check_covariance(estimate, covariance)
    basis = estimate.basis
    return trace_ww - numpy.sum(basis * numpy.dot(covariance, basis))


def cost_from_data(estimate, data):
    r"""Compute ``F(U) = ||P_U^perp W||_F^2`` directly from the data matrix ``W`` (no cancellation)."""
    data = numpy.asarray(data, dtype=numpy.float64)
    if data.ndim != 2 or data.shape[0] != estimate.ambient_dim:
        raise DimensionMismatch('data shape {0} incompatible with ambient dimension {1}'.format(data.shape, estimate.ambient_dim))
    residual = data - numpy.dot(estimate.basis, numpy.dot(estimate.basis.T, data))
    return numpy.sum(residual ** 2)


def riemannian_gradient(estimate, covariance):
    r"""Compute the Riemannian gradient ``-2 (I - U U^T) W W^T U`` of the cost at ``estimate``.

    :rtype: TangentVector

    """
    covariance = numpy.asarray(covariance)
    _check_covariance(estimate, covariance)
    return tangent_project(estimate, -2.0 * numpy.dot(covariance, estimate.basis))


def gd_step(estimate, covariance, step_size):
    r"""Take one gradient step ``Exp_U(-alpha grad F(U))``; steps with a vanishing gradient are skipped.

    :rtype: Subspace

    """
    if not step_size > 0.0:
        raise ValueError('step_size = {0} must be positive!'.format(step_size))
    gradient = riemannian_gradient(estimate, covariance)
    if gradient.norm < GRADIENT_NORM_FLOOR:
        return estimate
    return exp_map(gradient, -step_size)


def _line_search_step(estimate, covariance, trace_ww, step_size, armijo_parameters):
    """One Armijo-backtracked gradient step; returns ``estimate`` when no trial step decreases the cost enough."""
    gradient = riemannian_gradient(estimate, covariance)
    gradient_norm_sq = gradient.norm ** 2
    if gradient.norm < GRADIENT_NORM_FLOOR:
        return estimate

    def evaluate(step):
        candidate = exp_map(gradient, -step)
        return cost(candidate, covariance, trace_ww), candidate

    accepted = armijo_step(evaluate, cost(estimate, covariance, trace_ww), gradient_norm_sq, step_size, armijo_parameters)
    if accepted is None:
        return estimate
    return accepted[2]


def inner_loop(estimate, covariance, step_size, inner_iters, line_search=False, trace_ww=None,
               armijo_parameters=DEFAULT_ARMIJO_PARAMETERS):
    r"""Run ``inner_iters`` gradient steps from ``estimate`` on the fixed covariance ``W W^T``.

    :param estimate: warm start ``U_t^{(0)}``
    :type estimate: Subspace
    :param covariance: ``W W^T``
    :type covariance: array of float64 with shape (n, n)
    :param step_size: fixed step ``alpha``, or the first trial step when ``line_search`` is True
    :type step_size: float64 > 0
    :param inner_iters: number of steps ``K``
    :type inner_iters: int >= 1
    :param line_search: pick each step by Armijo backtracking
    :type line_search: bool
    :param trace_ww: ``tr(W W^T)``; only needed by the line search, computed from ``covariance`` if omitted
    :type trace_ww: float64 or None
    :param armijo_parameters: backtracking controls
    :type armijo_parameters: ArmijoParameters
    :return: ``U_t^{(K)}``
    :rtype: Subspace

    """
    if inner_iters < 1:
        raise ValueError('inner_iters = {0} must be at least 1!'.format(inner_iters))
    if line_search and trace_ww is None:
        trace_ww = numpy.trace(covariance)

    for _ in range(inner_iters):
        if line_search:
            estimate = _line_search_step(estimate, covariance, trace_ww, step_size, armijo_parameters)
        else:
            estimate = gd_step(estimate, covariance, step_size)
    return estimate


def initialize(data, dim, rank_tolerance=DEFAULT_RANK_TOLERANCE):
    r"""Span of the ``dim`` leading left singular vectors of ``data``, the minimizer of ``||P_U^perp W_ini||_F^2``.

    :param data: initializing data matrix ``W_ini``, one sample per column
    :type data: array of float64 with shape (n, t0)
    :param dim: subspace dimension ``d``
    :type dim: int
    :param rank_tolerance: required ``sigma_d > rank_tolerance * sigma_1``
    :type rank_tolerance: float64
    :rtype: Subspace
    :raise: RankDeficient if ``W_ini`` has fewer than ``d`` significant singular values

    """
    data = numpy.asarray(data, dtype=numpy.float64)
    if data.ndim != 2 or not 1 <= dim <= data.shape[0]:
        raise DimensionMismatch('cannot extract a {0}-dimensional subspace from data of shape {1}'.format(dim, data.shape))
    if data.shape[1] < dim:
        raise RankDeficient('{0:d} samples cannot span a {1:d}-dimensional subspace'.format(data.shape[1], dim))
    left, singular_values, _ = numpy.linalg.svd(data, full_matrices=False)
    if not singular_values[dim - 1] > rank_tolerance * singular_values[0]:
        raise RankDeficient('sigma_d = {0:.3e} <= {1:.1e} * sigma_1 = {2:.3e}'.format(
            singular_values[dim - 1],
            rank_tolerance,
            singular_values[0],
        ))
    return Subspace(left[:, :dim])


def make_window(config):
    """Build the empty window (sliding or discounted) described by ``config``."""
    if config.forgetting_factor is not None:
        return DiscountedWindow(config.ambient_dim, config.forgetting_factor)
    return DataWindow(config.ambient_dim, config.window_length, refresh_interval=config.refresh_interval)


def initial_state(estimate, config, time=0):
    """Build the TrackerState holding ``estimate`` and an empty window, at step ``time``."""
    if estimate.basis.shape != (config.ambient_dim, config.dim):
        raise DimensionMismatch('estimate shape {0} != ({1}, {2})'.format(estimate.basis.shape, config.ambient_dim, config.dim))
    return TrackerState(estimate=estimate, window=make_window(config), time=time)


def track(state, sample, config):
    r"""Process one sample: push it into the window and, once the window is ready, run the inner loop.

    The inner loop is warm-started from the previous estimate. Before the sliding window is full, samples only
    fill it and the estimate is carried over unchanged.

    :param state: tracker state after step ``t - 1``
    :type state: TrackerState
    :param sample: new sample ``u_t``
    :type sample: array of float64 with shape (n,)
    :param config: tracker parameters
    :type config: TrackerConfig
    :return: tracker state after step ``t`` (the window object is updated in place and carried over)
    :rtype: TrackerState

    """
    window = push_discounted(state.window, sample) if config.forgetting_factor is not None else push(state.window, sample)
    estimate = state.estimate
    if window.ready:
        estimate = inner_loop(
            estimate,
            window.covariance,
            config.step_size,
            config.inner_iters,
            line_search=config.line_search,
            trace_ww=window.trace if config.line_search else None,
            armijo_parameters=config.armijo_parameters,
        )
    return TrackerState(estimate=estimate, window=window, time=state.time + 1)


class GreatTracker(SubspaceTrackerInterface):

    r"""Streaming GREAT tracker; see the module docstring for the algorithm.

    :ivar config: (*TrackerConfig*) tracker parameters
    :ivar state: (*TrackerState*) current estimate, window and time

    """

    def __init__(self, config, initial_estimate, time=0):
        """Construct a GreatTracker starting from ``initial_estimate`` with an empty window."""
        self.config = config
        self.state = initial_state(initial_estimate, config, time=time)

    @property
    def ambient_dim(self):
        """Return ``n``."""
        return self.config.ambient_dim

    @property
    def dim(self):
        """Return ``d``."""
        return self.config.dim

    @property
    def time(self):
        """Return the number of samples consumed."""
        return self.state.time

    @property
    def estimate(self):
        """Return the current estimate."""
        return self.state.estimate

    @property
    def window(self):
        """Return the current data window."""
        return self.state.window

    def update(self, sample):
        """Consume ``sample`` and return the new estimate."""
        self.state = track(self.state, sample, self.config)
        return self.state.estimate

    def prefill(self, samples):
        """Push ``samples`` (one per row, oldest first) into the window without optimizing; the time advances."""
        count = 0
        for sample in samples:
            self.state.window.push(sample)
            count += 1
        self.state = self.state._replace(time=self.state.time + count)
