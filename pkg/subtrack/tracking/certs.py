# -*- coding: utf-8 -*-
r"""Closed-form certificates for the windowed Grassmannian tracker.

The guarantees are worst-case and deterministic. They hold whenever the data satisfy

1. bounded noise: every sample is ``u_t = ubar_t + e_t`` with ``ubar_t`` in the true subspace ``U_t`` and
   ``||e_t|| <= eps``;
2. bounded drift: ``d_2(U_{t-1}, U_t) <= c``;
3. excitation: the singular values of ``P_{U_t} W_t`` lie in ``[sigma_lower, sigma_upper]``;
4. feasibility: :func:`assumption4_check` passes for the worst noise bound ``delta_sup`` over the horizon;
5. tube entry: the initial estimate ``U_hat_{t0}`` lies within ``r_b`` of ``U_{t0 + 1}``, the first subspace it
   tracks: :func:`check_tube_entry`. Then ``d0 = d_2(U_hat_{t0}, U_{t0}) <= r_b + c``.

Under these conditions the noise bound, decay factors and tube radii below hold:

* ``||P_{U_t}^perp W_t||_F <= delta_t = c ||W_t D||_F + eps sqrt(T) (c (T - 1) + 1)``, with ``D`` weighting each
  column by its age (oldest ``T - 1``, newest ``0``): :func:`delta_bound`.
* one gradient step contracts the squared distance up to the perturbation ``gamma_r(delta)``:
  :func:`single_step_bound`, :func:`gamma`, :func:`rho`.
* after ``t`` samples the squared distance lies below the tube of :func:`theorem1_bound` and tends to
  :func:`ultimate_bound`; both contract with ``rho_tilde = 1 - 4 (1 - r_b^2) rho``: :func:`rho_tilde`.

Step sizes are tuned with :func:`optimize_step_size`: the closed-form maximizer of the rate, or the numerical
minimizer of the ultimate bound.

"""
from __future__ import division
import collections
import logging

import numpy

from subtrack.tracking.constant import DEFAULT_FEASIBILITY_GRID_POINTS, DEFAULT_GOLDEN_SECTION_PARAMETERS, MAX_RATE, MIN_ULTIMATE, STEP_SIZE_OBJECTIVES, TUBE_RELATIVE_TOLERANCE, TUBE_SQUARED_DISTANCE_FLOOR
from subtrack.tracking.exceptions import AssumptionViolated, DimensionMismatch, Infeasible, InvalidRho
from subtrack.tracking.grassmann import project
from subtrack.tracking.optimization import ClosedInterval, bisect_root, golden_section_minimize


_log = logging.getLogger(__name__)


# See CertificateParams (below) for docstring.
_BaseCertificateParams = collections.namedtuple('_BaseCertificateParams', [
    'noise_bound',
    'drift_bound',
    'sigma_lower',
    'sigma_upper',
    'tube_radius',
    'step_size',
    'window_length',
    'inner_iters',
    'dim',
])


class CertificateParams(_BaseCertificateParams):

    r"""The constants feeding every certificate.

    :ivar noise_bound: (*float64 >= 0*) ``eps``, bound on the norm of the noise in each sample
    :ivar drift_bound: (*float64 >= 0*) ``c``, bound on the chordal distance between consecutive true subspaces
    :ivar sigma_lower: (*float64 > 0*) lower bound on the singular values of ``P_{U_t} W_t``
    :ivar sigma_upper: (*float64 >= sigma_lower*) upper bound on the singular values of ``P_{U_t} W_t``
    :ivar tube_radius: (*float64 in [c, 1)*) ``r_b``, radius of the ball the estimates must stay in
    :ivar step_size: (*float64 > 0*) ``alpha``
    :ivar window_length: (*int >= dim*) ``T``
    :ivar inner_iters: (*int >= 1*) ``K``
    :ivar dim: (*int >= 1*) ``d``

    """

    __slots__ = ()

    def __new__(cls, noise_bound, drift_bound, sigma_lower, sigma_upper, tube_radius, step_size, window_length, inner_iters, dim):
        """Allocate and construct a new instance, enforcing the parameter invariants."""
        if not noise_bound >= 0.0:
            raise ValueError('noise_bound = {0} must be nonnegative!'.format(noise_bound))
        if not drift_bound >= 0.0:
            raise ValueError('drift_bound = {0} must be nonnegative!'.format(drift_bound))
        if not 0.0 < sigma_lower <= sigma_upper:
            raise ValueError('need 0 < sigma_lower = {0} <= sigma_upper = {1}!'.format(sigma_lower, sigma_upper))
        if not drift_bound <= tube_radius < 1.0:
            raise ValueError('need drift_bound = {0} <= tube_radius = {1} < 1!'.format(drift_bound, tube_radius))
        if not step_size > 0.0:
            raise ValueError('step_size = {0} must be positive!'.format(step_size))
        if dim < 1 or window_length < dim:
            raise ValueError('need 1 <= dim = {0} <= window_length = {1}!'.format(dim, window_length))
        if inner_iters < 1:
            raise ValueError('inner_iters = {0} must be at least 1!'.format(inner_iters))
        return super(CertificateParams, cls).__new__(
            cls,
            noise_bound,
            drift_bound,
            sigma_lower,
            sigma_upper,
            tube_radius,
            step_size,
            window_length,
            inner_iters,
            dim,
        )

    def with_step_size(self, step_size):
        """Return a copy of these parameters with ``step_size`` replaced (and re-validated)."""
        fields = self._asdict()
        fields['step_size'] = step_size
        return CertificateParams(**fields)


#: Squared-distance tube: ``per_step[t]`` bounds ``d_2(U_hat, U)^2`` t steps after initialization (``per_step[0]``
#: is the initial squared distance), ``ultimate`` is the limit and ``rho_tilde`` the contraction factor
TubeBound = collections.namedtuple('TubeBound', [
    'per_step',
    'ultimate',
    'rho_tilde',
])

#: Outcome of :func:`assumption4_check`; ``slack = rhs - lhs`` and ``holds = slack >= 0``
Assumption4Report = collections.namedtuple('Assumption4Report', [
    'holds',
    'slack',
    'lhs',
    'rhs',
    'rho',
    'rho_tilde',
    'delta_sup',
    'step_size',
])


def delta_bound(data, params):
    r"""Bound ``||P_{U_t}^perp W_t||_F`` by ``c ||W_t D||_F + eps sqrt(T) (c (T - 1) + 1)``.

    :param data: window ``W_t``, columns ordered oldest to newest
    :type data: array of float64 with shape (n, T)
    :param params: certificate constants (uses ``noise_bound``, ``drift_bound``, ``window_length``)
    :type params: CertificateParams
    :rtype: float64 >= 0
    :raise: DimensionMismatch if ``data`` does not have exactly ``T`` columns

    """
    data = numpy.asarray(data, dtype=numpy.float64)
    num_columns = params.window_length
    if data.ndim != 2 or data.shape[1] != num_columns:
        raise DimensionMismatch('data shape {0} must have exactly T = {1} columns'.format(data.shape, num_columns))
    ages = numpy.arange(num_columns - 1, -1, -1, dtype=numpy.float64)
    weighted_norm = numpy.linalg.norm(data * ages)
    drift = params.drift_bound
    return drift * weighted_norm + params.noise_bound * numpy.sqrt(num_columns) * (drift * (num_columns - 1) + 1.0)


def gamma(radius, delta, step_size, sigma_upper):
    r"""Perturbation term of the single-step decay bound.

    ``gamma_r(delta) = 8 alpha r sbar (1 + 4 alpha sbar^2) delta + (4 alpha r + 16 alpha^2 sbar^2 (r + 2)) delta^2
    + 32 alpha^2 sbar delta^3 + 8 alpha^2 delta^4``

    """
    alpha, sbar = step_size, sigma_upper
    return (8.0 * alpha * radius * sbar * (1.0 + 4.0 * alpha * sbar ** 2) * delta +
            (4.0 * alpha * radius + 16.0 * alpha ** 2 * sbar ** 2 * (radius + 2.0)) * delta ** 2 +
            32.0 * alpha ** 2 * sbar * delta ** 3 +
            8.0 * alpha ** 2 * delta ** 4)


def rho(step_size, sigma_lower, sigma_upper):
    r"""Decay coefficient ``rho = alpha sigma_lower^2 - 2 alpha^2 sigma_upper^4``; positive iff ``alpha < sigma_lower^2 / (2 sigma_upper^4)``."""
    return step_size * sigma_lower ** 2 - 2.0 * step_size ** 2 * sigma_upper ** 4


def rho_tilde(step_size, sigma_lower, sigma_upper, tube_radius):
    r"""Contraction factor ``1 - 4 (1 - r_b^2) rho`` of the squared distance per gradient step."""
    return 1.0 - 4.0 * (1.0 - tube_radius ** 2) * rho(step_size, sigma_lower, sigma_upper)


def _rho_tilde_of(params):
    """Contraction factor for ``params``."""
    return rho_tilde(params.step_size, params.sigma_lower, params.sigma_upper, params.tube_radius)


def assumption4_check(params, delta_sup):
    r"""Check the feasibility condition of the tube certificates.

    ``gamma_{r_b}(delta_sup) <= (1 - rho_tilde) r_b^2 + (1 - rho_tilde) (c^2 - 2 c r_b) / (1 - rho_tilde^K)``

    :param params: certificate constants
    :type params: CertificateParams
    :param delta_sup: worst noise bound over the horizon
    :type delta_sup: float64 >= 0
    :return: whether the inequality holds, with its signed slack (rhs - lhs)
    :rtype: Assumption4Report
    :raise: InvalidRho if ``rho_tilde`` is not in ``[0, 1)``

    """
    contraction = _rho_tilde_of(params)
    if not 0.0 <= contraction < 1.0:
        raise InvalidRho('rho_tilde = {0} lies outside [0, 1) for step_size = {1}'.format(contraction, params.step_size))
    radius, drift = params.tube_radius, params.drift_bound
    lhs = gamma(radius, delta_sup, params.step_size, params.sigma_upper)
    rhs = ((1.0 - contraction) * radius ** 2 +
           (1.0 - contraction) * (drift ** 2 - 2.0 * drift * radius) / (1.0 - contraction ** params.inner_iters))
    slack = rhs - lhs
    return Assumption4Report(
        holds=bool(slack >= 0.0),
        slack=slack,
        lhs=lhs,
        rhs=rhs,
        rho=rho(params.step_size, params.sigma_lower, params.sigma_upper),
        rho_tilde=contraction,
        delta_sup=delta_sup,
        step_size=params.step_size,
    )


def _require_assumption4(params, delta_sup):
    """Run :func:`assumption4_check` and raise AssumptionViolated (carrying the report) if it fails."""
    report = assumption4_check(params, delta_sup)
    if not report.holds:
        raise AssumptionViolated(
            'feasibility condition fails at step_size = {0:.6e}: slack = {1:.6e}'.format(params.step_size, report.slack),
            report=report,
        )
    return report


def check_tube_entry(entry_distance, params, relative_tolerance=TUBE_RELATIVE_TOLERANCE):
    r"""Require the initial estimate to lie in the ball of radius ``r_b`` around the first subspace it tracks.

    :param entry_distance: ``d_2(U_hat_{t0}, U_{t0 + 1})``
    :type entry_distance: float64 >= 0
    :param params: certificate constants
    :type params: CertificateParams
    :param relative_tolerance: slack on the squared radius
    :type relative_tolerance: float64 >= 0
    :return: the squared distance ``d0^2`` the tube may start from, ``(entry_distance + c)^2``
    :rtype: float64
    :raise: AssumptionViolated if ``entry_distance^2 > r_b^2 (1 + relative_tolerance)``

    """
    if entry_distance ** 2 > params.tube_radius ** 2 * (1.0 + relative_tolerance):
        raise AssumptionViolated('initial estimate lies at distance {0:.6e} from the first tracked subspace, outside r_b = {1:.6e}'.format(
            entry_distance,
            params.tube_radius,
        ))
    return (entry_distance + params.drift_bound) ** 2


def _require_initial_distance(d0_sq, params, relative_tolerance=TUBE_RELATIVE_TOLERANCE):
    """Refuse tubes starting from ``d0 > r_b + c``: no estimate that entered the tube can be that far."""
    largest = (params.tube_radius + params.drift_bound) ** 2
    if d0_sq > largest * (1.0 + relative_tolerance):
        raise AssumptionViolated('initial squared distance {0:.6e} exceeds (r_b + c)^2 = {1:.6e}'.format(d0_sq, largest))


def tube_violations(squared_distances, bound, relative_tolerance=TUBE_RELATIVE_TOLERANCE, floor=TUBE_SQUARED_DISTANCE_FLOOR):
    """Indices where a measured squared distance exceeds the tube, ignoring excesses at rounding level.

    :rtype: array of int

    """
    squared_distances = numpy.asarray(squared_distances, dtype=numpy.float64)
    bound = numpy.asarray(bound, dtype=numpy.float64)
    return numpy.flatnonzero(squared_distances > bound * (1.0 + relative_tolerance) + floor)


def single_step_bound(d_sq, delta, params, grad_norm_sq, radius=None):
    r"""Bound on the squared distance after one gradient step: ``d^2 - rho ||grad d^2||_F^2 + gamma_r(delta)``.

    :param d_sq: squared distance ``d_2(U_hat, U)^2`` before the step
    :type d_sq: float64
    :param delta: noise bound of the current window
    :type delta: float64
    :param params: certificate constants
    :type params: CertificateParams
    :param grad_norm_sq: ``||grad d_2(U_hat, U)^2||_F^2`` at the current estimate
    :type grad_norm_sq: float64
    :param radius: radius ``r >= d_2(U_hat, U)`` entering ``gamma_r``; defaults to ``tube_radius``
    :type radius: float64 or None
    :rtype: float64

    """
    if radius is None:
        radius = params.tube_radius
    decay = rho(params.step_size, params.sigma_lower, params.sigma_upper)
    return d_sq - decay * grad_norm_sq + gamma(radius, delta, params.step_size, params.sigma_upper)


def theorem1_bound(t, d0_sq, delta_sup, params):
    r"""Squared-distance tube ``t`` samples after initialization.

    ``rho_tilde^{Kt} d0^2 + (1 - rho_tilde^{Kt}) / (1 - rho_tilde) gamma_{r_b}(delta_sup)
    + (1 - rho_tilde^{Kt}) / (1 - rho_tilde^K) rho_tilde^K (2 r_b - c) c``

    :param t: number of samples processed since initialization
    :type t: int >= 0
    :param d0_sq: squared distance between the initial estimate and the true subspace at initialization
    :type d0_sq: float64 >= 0
    :param delta_sup: worst noise bound over the horizon
    :type delta_sup: float64 >= 0
    :param params: certificate constants
    :type params: CertificateParams
    :rtype: float64
    :raise: AssumptionViolated if the feasibility condition fails or ``d0 > r_b + c``

    """
    report = _require_assumption4(params, delta_sup)
    _require_initial_distance(d0_sq, params)
    return _tube_value(t, d0_sq, delta_sup, params, report.rho_tilde)


def _tube_value(t, d0_sq, delta_sup, params, contraction):
    """Evaluate the tube formula for a precomputed contraction factor; ``t`` may be an array."""
    radius, drift, inner_iters = params.tube_radius, params.drift_bound, params.inner_iters
    decay = contraction ** (inner_iters * numpy.asarray(t, dtype=numpy.float64))
    perturbation = gamma(radius, delta_sup, params.step_size, params.sigma_upper)
    outer = contraction ** inner_iters
    return (decay * d0_sq +
            (1.0 - decay) / (1.0 - contraction) * perturbation +
            (1.0 - decay) / (1.0 - outer) * outer * (2.0 * radius - drift) * drift)


def ultimate_bound(delta_sup, params):
    r"""Limit of the tube: ``gamma_{r_b}(delta_sup) / (1 - rho_tilde) + rho_tilde^K / (1 - rho_tilde^K) (2 r_b - c) c``.

    :raise: AssumptionViolated if the feasibility condition fails

    """
    report = _require_assumption4(params, delta_sup)
    return _ultimate_value(delta_sup, params, report.rho_tilde)


def _ultimate_value(delta_sup, params, contraction):
    """Evaluate the ultimate bound for a precomputed contraction factor."""
    radius, drift = params.tube_radius, params.drift_bound
    outer = contraction ** params.inner_iters
    return (gamma(radius, delta_sup, params.step_size, params.sigma_upper) / (1.0 - contraction) +
            outer / (1.0 - outer) * (2.0 * radius - drift) * drift)


def tube_bound(num_steps, d0_sq, delta_sup, params):
    r"""Tube over ``t = 0, ..., num_steps`` samples since initialization.

    :rtype: TubeBound
    :raise: AssumptionViolated if the feasibility condition fails or ``d0 > r_b + c``

    """
    report = _require_assumption4(params, delta_sup)
    _require_initial_distance(d0_sq, params)
    per_step = _tube_value(numpy.arange(num_steps + 1), d0_sq, delta_sup, params, report.rho_tilde)
    return TubeBound(
        per_step=per_step,
        ultimate=_ultimate_value(delta_sup, params, report.rho_tilde),
        rho_tilde=report.rho_tilde,
    )


def max_rate_step_size(sigma_lower, sigma_upper):
    r"""Step size maximizing ``rho``: ``sigma_lower^2 / (4 sigma_upper^4)``."""
    return sigma_lower ** 2 / (4.0 * sigma_upper ** 4)


def step_size_upper_limit(sigma_lower, sigma_upper):
    r"""Largest admissible step size, ``sigma_lower^2 / (2 sigma_upper^4)``, where ``rho`` vanishes."""
    return sigma_lower ** 2 / (2.0 * sigma_upper ** 4)


def _slack(step_size, delta_sup, params):
    """Signed feasibility slack at ``step_size``."""
    return assumption4_check(params.with_step_size(step_size), delta_sup).slack


def feasible_step_sizes(delta_sup, params, num_grid_points=DEFAULT_FEASIBILITY_GRID_POINTS):
    r"""Locate the feasible interval of step sizes in ``(0, sigma_lower^2 / (2 sigma_upper^4))``.

    Step sizes are scanned on a log-spaced grid; the run of feasible grid points with the smallest ultimate bound is
    widened to its exact boundaries by bisection on the slack.

    :return: feasible step sizes
    :rtype: ClosedInterval
    :raise: Infeasible if no grid point passes the feasibility condition

    """
    upper_limit = step_size_upper_limit(params.sigma_lower, params.sigma_upper)
    grid = numpy.geomspace(upper_limit * 1.0e-9, upper_limit, num_grid_points + 1, endpoint=False)[1:]
    slacks = numpy.array([_slack(step, delta_sup, params) for step in grid])
    feasible = slacks >= 0.0
    if not numpy.any(feasible):
        raise Infeasible('no step size in (0, {0:.6e}) satisfies the feasibility condition for delta_sup = {1:.6e}'.format(
            upper_limit,
            delta_sup,
        ))

    ultimates = numpy.full(grid.shape, numpy.inf)
    for index in numpy.flatnonzero(feasible):
        candidate = params.with_step_size(grid[index])
        ultimates[index] = _ultimate_value(delta_sup, candidate, _rho_tilde_of(candidate))
    best = int(numpy.argmin(ultimates))

    first = best
    while first > 0 and feasible[first - 1]:
        first -= 1
    last = best
    while last < grid.size - 1 and feasible[last + 1]:
        last += 1

    def slack_of(step):
        return _slack(step, delta_sup, params)

    lower = grid[first]
    if first > 0:
        lower = bisect_root(slack_of, ClosedInterval(grid[first - 1], grid[first]), grid[first] * 1.0e-12)
        if slack_of(lower) < 0.0:
            lower = grid[first]
    upper = grid[last]
    if last < grid.size - 1:
        upper = bisect_root(slack_of, ClosedInterval(grid[last], grid[last + 1]), grid[last] * 1.0e-12)
        if slack_of(upper) < 0.0:
            upper = grid[last]
    return ClosedInterval(lower, upper)


def minimize_ultimate_bound(delta_sup, params, golden_section_parameters=DEFAULT_GOLDEN_SECTION_PARAMETERS,
                            num_grid_points=DEFAULT_FEASIBILITY_GRID_POINTS):
    r"""Golden-section search for the feasible step size minimizing :func:`ultimate_bound`.

    :return: minimizer, minimal ultimate bound and number of golden-section reductions
    :rtype: GoldenSectionResult
    :raise: Infeasible if no step size passes the feasibility condition

    """
    interval = feasible_step_sizes(delta_sup, params, num_grid_points=num_grid_points)

    def objective(step):
        candidate = params.with_step_size(step)
        return _ultimate_value(delta_sup, candidate, _rho_tilde_of(candidate))

    result = golden_section_minimize(objective, interval, golden_section_parameters)
    _log.debug('ultimate bound minimized at step_size = {0:.6e} after {1:d} reductions'.format(result.minimizer, result.num_steps))
    return result


def optimize_step_size(objective, delta_sup, params, golden_section_parameters=DEFAULT_GOLDEN_SECTION_PARAMETERS):
    r"""Tune the step size.

    :param objective: :data:`~subtrack.tracking.constant.MAX_RATE` for the closed-form maximizer of ``rho``, or
      :data:`~subtrack.tracking.constant.MIN_ULTIMATE` for the feasible minimizer of the ultimate bound
    :type objective: str
    :param delta_sup: worst noise bound (unused by MAX_RATE)
    :type delta_sup: float64
    :param params: certificate constants; ``step_size`` is ignored
    :type params: CertificateParams
    :rtype: float64 > 0
    :raise: Infeasible if MIN_ULTIMATE finds no feasible step size

    """
    if objective == MAX_RATE:
        return max_rate_step_size(params.sigma_lower, params.sigma_upper)
    if objective == MIN_ULTIMATE:
        return minimize_ultimate_bound(delta_sup, params, golden_section_parameters=golden_section_parameters).minimizer
    raise ValueError('objective {0} is not one of {1}'.format(objective, STEP_SIZE_OBJECTIVES))


def signal_bounds(data, truth):
    r"""Extreme singular values ``(sigma_d, sigma_1)`` of ``P_U W``; ``sigma_d = 0`` when ``W`` has fewer than ``d`` columns.

    :param data: window ``W_t``
    :type data: array of float64 with shape (n, T)
    :param truth: true subspace ``U_t``
    :type truth: Subspace
    :rtype: tuple of two float64

    """
    data = numpy.asarray(data, dtype=numpy.float64)
    if data.ndim != 2 or data.shape[0] != truth.ambient_dim:
        raise DimensionMismatch('data shape {0} incompatible with ambient dimension {1}'.format(data.shape, truth.ambient_dim))
    singular_values = numpy.linalg.svd(numpy.dot(truth.basis.T, data), compute_uv=False)
    smallest = singular_values[truth.dim - 1] if singular_values.size >= truth.dim else 0.0
    return smallest, singular_values[0]


def signal_requirement(delta, params):
    r"""Smallest ``sigma_lower^2`` for which one gradient step per sample (``K = 1``) meets the feasibility condition.

    ``(gamma_{r_b}(delta) + c (2 r_b - c)) / (4 alpha r_b^2 (1 - r_b^2)) + 2 alpha sigma_upper^4``

    """
    radius, drift, alpha = params.tube_radius, params.drift_bound, params.step_size
    perturbation = gamma(radius, delta, alpha, params.sigma_upper)
    return ((perturbation + drift * (2.0 * radius - drift)) / (4.0 * alpha * radius ** 2 * (1.0 - radius ** 2)) +
            2.0 * alpha * params.sigma_upper ** 4)


def rho_curve(step_sizes, sigma_lower, sigma_upper, tube_radius):
    r"""Tabulate ``(alpha, rho, rho_tilde)`` over ``step_sizes``.

    :rtype: array of float64 with shape (num_step_sizes, 3)

    """
    step_sizes = numpy.asarray(step_sizes, dtype=numpy.float64)
    return numpy.column_stack((
        step_sizes,
        rho(step_sizes, sigma_lower, sigma_upper),
        rho_tilde(step_sizes, sigma_lower, sigma_upper, tube_radius),
    ))


def squared_distance_trajectory(estimates, truths):
    """Squared chordal distances ``||P_{U_t}^perp U_hat_t||_F^2`` between paired sequences of subspaces."""
    return numpy.array([
        numpy.sum((estimate.basis - project(truth, estimate.basis)) ** 2)
        for estimate, truth in zip(estimates, truths)
    ])
