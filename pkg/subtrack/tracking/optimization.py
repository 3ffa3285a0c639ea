# -*- coding: utf-8 -*-
r"""Scalar search routines used by the tracker and the certificate tuning code.

**1. FILE OVERVIEW**

The trackers never optimize over vector spaces directly; every search they need is one dimensional:

* Armijo backtracking picks a step size along a fixed descent direction on the manifold
  (:func:`armijo_step`, controlled by :class:`ArmijoParameters`).
* Golden-section search minimizes a unimodal scalar function over a :class:`ClosedInterval`
  (:func:`golden_section_minimize`, controlled by :class:`GoldenSectionParameters`). It is used to find the
  step size minimizing the ultimate tube radius.
* Bisection finds a root of a continuous scalar function with a sign change over a :class:`ClosedInterval`
  (:func:`bisect_root`); it places subspaces at prescribed chordal distances and locates the boundaries of
  the feasible step-size set.

All routines here MINIMIZE (or find roots); none of them know about subspaces. Callers wrap their manifold
quantities into scalar functions.

"""
from __future__ import division
import collections
import logging

import numpy
import scipy.optimize


_log = logging.getLogger(__name__)

#: Inverse golden ratio, ``(sqrt(5) - 1) / 2``
INVERSE_GOLDEN_RATIO = (numpy.sqrt(5.0) - 1.0) / 2.0


# See ClosedInterval (below) for docstring.
_BaseClosedInterval = collections.namedtuple('_BaseClosedInterval', [
    'min',
    'max',
])


class ClosedInterval(_BaseClosedInterval):

    r"""Container to represent the closed interval ``[a, b]``; an interval with ``a > b`` is empty.

    :ivar min: (*float64*) the "left" bound of the interval, ``a``
    :ivar max: (*float64*) the "right" bound of the interval, ``b``

    """

    __slots__ = ()

    @property
    def length(self):
        """Compute the length of this ClosedInterval."""
        return self.max - self.min

    @property
    def midpoint(self):
        """Compute the midpoint of this ClosedInterval."""
        return 0.5 * (self.min + self.max)

    def is_inside(self, value):
        """Check if a value is inside this ClosedInterval."""
        return self.min <= value <= self.max

    def is_empty(self):
        """Check whether this ClosedInterval is the emptyset: max < min."""
        return self.max < self.min


# See ArmijoParameters (below) for docstring.
_BaseArmijoParameters = collections.namedtuple('_BaseArmijoParameters', [
    'sufficient_decrease',
    'shrink',
    'max_backtracks',
])


class ArmijoParameters(_BaseArmijoParameters):

    r"""Container to hold parameters that specify the behavior of Armijo backtracking.

    Starting from an initial step ``s``, a candidate is accepted when
    ``f(candidate(s)) <= f(current) - sufficient_decrease * s * ||grad||^2``; otherwise ``s`` is multiplied by
    ``shrink`` and the test repeats, at most ``max_backtracks`` times after the first trial.

    :ivar sufficient_decrease: (*float64 in (0, 1)*) Armijo constant (suggest: 1.0e-4)
    :ivar shrink: (*float64 in (0, 1)*) backtracking factor (suggest: 0.5)
    :ivar max_backtracks: (*int >= 0*) maximum number of step reductions

    """

    __slots__ = ()

    def __new__(cls, sufficient_decrease, shrink, max_backtracks):
        """Allocate and construct a new instance; see class docstring for input descriptions."""
        if not 0.0 < sufficient_decrease < 1.0:
            raise ValueError('sufficient_decrease = {0} must lie in (0, 1)!'.format(sufficient_decrease))
        if not 0.0 < shrink < 1.0:
            raise ValueError('shrink = {0} must lie in (0, 1)!'.format(shrink))
        if max_backtracks < 0:
            raise ValueError('max_backtracks = {0} must be nonnegative!'.format(max_backtracks))
        return super(ArmijoParameters, cls).__new__(cls, sufficient_decrease, shrink, max_backtracks)


# See GoldenSectionParameters (below) for docstring.
_BaseGoldenSectionParameters = collections.namedtuple('_BaseGoldenSectionParameters', [
    'relative_width',
    'max_num_steps',
])


class GoldenSectionParameters(_BaseGoldenSectionParameters):

    r"""Container to hold parameters that specify the behavior of golden-section search.

    Search stops once the bracket width falls below ``relative_width`` times the magnitude of its midpoint, or
    after ``max_num_steps`` reductions.

    :ivar relative_width: (*float64 > 0*) relative bracket width at which to stop (suggest: 1.0e-8)
    :ivar max_num_steps: (*int > 0*) hard cap on the number of bracket reductions

    """

    __slots__ = ()


#: Result of a golden-section search: the minimizer, its objective value and the number of reductions used
GoldenSectionResult = collections.namedtuple('GoldenSectionResult', [
    'minimizer',
    'value',
    'num_steps',
])


def armijo_step(evaluate, current_value, gradient_norm_sq, initial_step, parameters):
    r"""Backtrack from ``initial_step`` until the Armijo sufficient-decrease condition holds.

    :param evaluate: maps a step size ``s`` to ``(value, candidate)``: the objective at the candidate point reached
      by stepping ``s`` along the descent direction, and that candidate
    :type evaluate: callable float64 -> (float64, object)
    :param current_value: objective value at the current point
    :type current_value: float64
    :param gradient_norm_sq: squared norm of the gradient at the current point
    :type gradient_norm_sq: float64 >= 0
    :param initial_step: first step size to try
    :type initial_step: float64 > 0
    :param parameters: backtracking controls
    :type parameters: ArmijoParameters
    :return: ``(step, value, candidate)`` of the accepted step, or None if every trial failed
    :rtype: tuple or None

    """
    step = initial_step
    for _ in range(parameters.max_backtracks + 1):
        value, candidate = evaluate(step)
        if value <= current_value - parameters.sufficient_decrease * step * gradient_norm_sq:
            return step, value, candidate
        step *= parameters.shrink

    _log.debug('Armijo backtracking failed after {0:d} reductions; last step {1:.3e}'.format(parameters.max_backtracks, step))
    return None


def golden_section_minimize(objective, interval, parameters):
    r"""Minimize a unimodal scalar function over ``interval`` by golden-section search.

    Each reduction keeps the sub-bracket containing the smaller of the two interior evaluations and reuses one of
    them, so every step costs one objective evaluation.
    Every evaluation lies inside ``interval``, unlike ``scipy.optimize.minimize_scalar(method='golden')``, which
    expands its bracket; objectives here may be undefined outside the interval.

    :param objective: function to minimize
    :type objective: callable float64 -> float64
    :param interval: search bracket
    :type interval: ClosedInterval (not empty)
    :param parameters: stopping controls
    :type parameters: GoldenSectionParameters
    :return: the best point found
    :rtype: GoldenSectionResult

    """
    if interval.is_empty():
        raise ValueError('Cannot search the empty interval {0}!'.format(interval))

    lower, upper = interval.min, interval.max
    left = upper - INVERSE_GOLDEN_RATIO * (upper - lower)
    right = lower + INVERSE_GOLDEN_RATIO * (upper - lower)
    left_value = objective(left)
    right_value = objective(right)

    num_steps = 0
    while num_steps < parameters.max_num_steps:
        if upper - lower <= parameters.relative_width * abs(0.5 * (lower + upper)):
            break
        num_steps += 1
        if left_value <= right_value:
            upper, right, right_value = right, left, left_value
            left = upper - INVERSE_GOLDEN_RATIO * (upper - lower)
            left_value = objective(left)
        else:
            lower, left, left_value = left, right, right_value
            right = lower + INVERSE_GOLDEN_RATIO * (upper - lower)
            right_value = objective(right)

    if left_value <= right_value:
        return GoldenSectionResult(minimizer=left, value=left_value, num_steps=num_steps)
    return GoldenSectionResult(minimizer=right, value=right_value, num_steps=num_steps)


def bisect_root(function, interval, tolerance):
    r"""Find ``x`` in ``interval`` with ``function(x) = 0`` by bisection.

    Endpoint roots are returned directly; otherwise ``function`` must change sign over the interval.

    :param function: continuous scalar function
    :type function: callable float64 -> float64
    :param interval: bracket with a sign change
    :type interval: ClosedInterval
    :param tolerance: absolute tolerance on the root location
    :type tolerance: float64 > 0
    :return: root location
    :rtype: float64

    """
    if function(interval.min) == 0.0:
        return interval.min
    if function(interval.max) == 0.0:
        return interval.max
    return scipy.optimize.bisect(function, interval.min, interval.max, xtol=tolerance, maxiter=500)
