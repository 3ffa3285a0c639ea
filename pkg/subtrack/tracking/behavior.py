# -*- coding: utf-8 -*-
r"""Behavioral systems layer: LTV plants, their restricted behaviors, Hankel matrices and subspace predictors.

A linear time-varying plant

.. math:: x_{t+1} = A_t x_t + B_t v_t, \qquad y_t = C_t x_t + D_t v_t

admits, over the window ``[t, t+L]``, the input-output trajectories

.. math:: \begin{bmatrix} v_{[t,t+L]} \\ y_{[t,t+L]} \end{bmatrix} =
   \Lambda_t \begin{bmatrix} x_t \\ v_{[t,t+L]} \end{bmatrix}, \qquad
   \Lambda_t = \begin{bmatrix} 0 & I \\ O_{[t,t+L]} & T_{[t,t+L]} \end{bmatrix},

a subspace of dimension ``k + m(L+1)`` of ``R^{(m+p)(L+1)}`` when the observability matrix ``O`` has full column
rank. A sample ``u_t`` stacks the last ``L + 1`` inputs, then the last ``L + 1`` outputs, each block ordered
oldest to newest and each entry of length ``m`` (resp. ``p``); ``Lambda_t`` uses the same row layout.

Tracking that subspace online and splitting its basis into past/future input/output rows yields the subspace
predictor ``y_fut = M [v_ini; y_ini; v_fut]``.

"""
from __future__ import division
from builtins import object
import collections
import configparser
import logging

import numpy

from subtrack.tracking.constant import DEFAULT_RANK_TOLERANCE, OBSERVABILITY_TOLERANCE, PSEUDOINVERSE_RELATIVE_TOLERANCE
from subtrack.tracking.exceptions import DimensionMismatch, HorizonExceeded, LengthMismatch, TooShort, Unobservable, ZeroReference
from subtrack.tracking.grassmann import orthonormalize


_log = logging.getLogger(__name__)

#: Ways of laying out the matrices of an LTV system file
CONSTANT_SYSTEM = 'constant'
LINEAR_INTERPOLATION = 'linear'
EXPLICIT_SYSTEM = 'explicit'

SYSTEM_FILE_MODES = [
        CONSTANT_SYSTEM,
        LINEAR_INTERPOLATION,
        EXPLICIT_SYSTEM,
        ]


def _frozen_stack(matrices, shape, name):
    """Stack a sequence of matrices into a read-only (horizon,) + shape array, checking every shape."""
    stacked = numpy.empty((len(matrices),) + shape)
    for t, matrix in enumerate(matrices):
        matrix = numpy.asarray(matrix, dtype=numpy.float64)
        if matrix.size == 0 and numpy.prod(shape) == 0:
            # k = 0 (static plant): empty blocks carry no entries
            continue
        if matrix.shape != shape:
            raise DimensionMismatch('{0}_{1:d} has shape {2}, expected {3}'.format(name, t, matrix.shape, shape))
        stacked[t, ...] = matrix
    stacked.setflags(write=False)
    return stacked


class LtvSystem(object):

    r"""A linear time-varying plant given by ``(A_t, B_t, C_t, D_t)`` for ``t = 0, ..., horizon - 1``.

    :ivar a_matrices: (*array of float64 with shape (horizon, k, k)*) state transition matrices
    :ivar b_matrices: (*array of float64 with shape (horizon, k, m)*) input matrices
    :ivar c_matrices: (*array of float64 with shape (horizon, p, k)*) output matrices
    :ivar d_matrices: (*array of float64 with shape (horizon, p, m)*) feedthrough matrices

    """

    def __init__(self, a_matrices, b_matrices, c_matrices, d_matrices, state_dim=None):
        """Construct an LtvSystem from per-step matrix sequences of equal length.

        ``state_dim`` must be given when it cannot be inferred from the matrices (``k = 0``).

        """
        horizon = len(d_matrices)
        if horizon == 0 or not len(a_matrices) == len(b_matrices) == len(c_matrices) == horizon:
            raise DimensionMismatch('matrix sequences must share a positive length')
        output_dim, input_dim = numpy.shape(d_matrices[0])
        if state_dim is None:
            state_dim = numpy.shape(a_matrices[0])[0] if numpy.size(a_matrices[0]) else 0

        self.a_matrices = _frozen_stack(a_matrices, (state_dim, state_dim), 'A')
        self.b_matrices = _frozen_stack(b_matrices, (state_dim, input_dim), 'B')
        self.c_matrices = _frozen_stack(c_matrices, (output_dim, state_dim), 'C')
        self.d_matrices = _frozen_stack(d_matrices, (output_dim, input_dim), 'D')

    @classmethod
    def constant(cls, a_matrix, b_matrix, c_matrix, d_matrix, horizon):
        """Build the time-invariant system repeating ``(A, B, C, D)`` over ``horizon`` steps."""
        state_dim = numpy.shape(b_matrix)[0]
        return cls([a_matrix] * horizon, [b_matrix] * horizon, [c_matrix] * horizon, [d_matrix] * horizon, state_dim=state_dim)

    @classmethod
    def interpolated(cls, start, end, horizon):
        r"""Build the system whose matrices move linearly from ``start`` at ``t = 0`` to ``end`` at ``t = horizon - 1``.

        :param start: ``(A, B, C, D)`` at the first step
        :type start: tuple of 4 arrays
        :param end: ``(A, B, C, D)`` at the last step
        :type end: tuple of 4 arrays
        :param horizon: number of steps
        :type horizon: int > 0
        :rtype: LtvSystem

        """
        weights = numpy.linspace(0.0, 1.0, horizon) if horizon > 1 else numpy.zeros(1)
        sequences = []
        for first, last in zip(start, end):
            first = numpy.asarray(first, dtype=numpy.float64)
            last = numpy.asarray(last, dtype=numpy.float64)
            sequences.append([(1.0 - weight) * first + weight * last for weight in weights])
        return cls(*sequences, state_dim=numpy.shape(start[1])[0])

    @property
    def horizon(self):
        """Return the number of time steps the system is defined on."""
        return self.d_matrices.shape[0]

    @property
    def state_dim(self):
        """Return ``k``."""
        return self.a_matrices.shape[1]

    @property
    def input_dim(self):
        """Return ``m``."""
        return self.d_matrices.shape[2]

    @property
    def output_dim(self):
        """Return ``p``."""
        return self.d_matrices.shape[1]

    def behavior_dim(self, depth):
        """Return ``k + m (L + 1)`` for trajectories of ``depth = L + 1`` steps."""
        return self.state_dim + self.input_dim * depth


def interpolated_system(start, end, horizon):
    """Build the LtvSystem whose ``(A, B, C, D)`` move linearly from ``start`` to ``end`` over ``horizon`` steps."""
    return LtvSystem.interpolated(start, end, horizon)


def _parse_matrix(section, key, shape):
    """Read a row-major matrix of ``shape`` from whitespace or comma separated numbers."""
    text = section.get(key, '').replace(',', ' ')
    values = numpy.array([float(token) for token in text.split()], dtype=numpy.float64)
    if values.size != numpy.prod(shape):
        raise DimensionMismatch('{0} in [{1}] has {2:d} entries, expected shape {3}'.format(key, section.name, values.size, shape))
    return values.reshape(shape)


def _parse_quadruple(section, state_dim, input_dim, output_dim):
    """Read ``(A, B, C, D)`` from one section of a system file."""
    return (
        _parse_matrix(section, 'a', (state_dim, state_dim)),
        _parse_matrix(section, 'b', (state_dim, input_dim)),
        _parse_matrix(section, 'c', (output_dim, state_dim)),
        _parse_matrix(section, 'd', (output_dim, input_dim)),
    )


def load_system(path):
    r"""Load an LtvSystem from an INI file.

    The ``[system]`` section lists ``state_dim``, ``input_dim``, ``output_dim``, ``horizon`` and ``mode``:

    * ``constant``: one section ``[start]`` with keys ``a``, ``b``, ``c``, ``d`` (row-major entries);
    * ``linear``: sections ``[start]`` and ``[end]``, interpolated linearly over the horizon;
    * ``explicit``: one section ``[step_<t>]`` per time step.

    :param path: location of the file
    :type path: str
    :rtype: LtvSystem

    """
    parser = configparser.ConfigParser()
    if not parser.read(path):
        raise IOError('cannot read system file {0}'.format(path))
    header = parser['system']
    state_dim = header.getint('state_dim')
    input_dim = header.getint('input_dim')
    output_dim = header.getint('output_dim')
    horizon = header.getint('horizon')
    mode = header.get('mode', CONSTANT_SYSTEM).strip()

    if mode == CONSTANT_SYSTEM:
        start = _parse_quadruple(parser['start'], state_dim, input_dim, output_dim)
        system = LtvSystem(*[[matrix] * horizon for matrix in start], state_dim=state_dim)
    elif mode == LINEAR_INTERPOLATION:
        start = _parse_quadruple(parser['start'], state_dim, input_dim, output_dim)
        end = _parse_quadruple(parser['end'], state_dim, input_dim, output_dim)
        system = LtvSystem.interpolated(start, end, horizon)
    elif mode == EXPLICIT_SYSTEM:
        steps = [_parse_quadruple(parser['step_{0:d}'.format(t)], state_dim, input_dim, output_dim) for t in range(horizon)]
        system = LtvSystem(*[list(sequence) for sequence in zip(*steps)], state_dim=state_dim)
    else:
        raise ValueError('system mode {0} is not one of {1}'.format(mode, SYSTEM_FILE_MODES))

    _log.info('loaded {0} LTV system from {1}: k={2:d}, m={3:d}, p={4:d}, horizon={5:d}'.format(
        mode, path, state_dim, input_dim, output_dim, horizon))
    return system


def _check_window(system, start, depth):
    """Raise HorizonExceeded unless ``[start, start + depth - 1]`` lies inside the system horizon."""
    if start < 0 or start + depth > system.horizon:
        raise HorizonExceeded('window [{0:d}, {1:d}] exceeds horizon {2:d}'.format(start, start + depth - 1, system.horizon))


def observability_matrix(system, start, depth):
    r"""Stack ``C_{t+i} A_{t+i-1} ... A_t`` for ``i = 0, ..., depth - 1``; shape ``(p depth, k)``."""
    _check_window(system, start, depth)
    output_dim, state_dim = system.output_dim, system.state_dim
    observability = numpy.zeros((output_dim * depth, state_dim))
    transition = numpy.eye(state_dim)
    for i in range(depth):
        observability[i * output_dim:(i + 1) * output_dim, ...] = numpy.dot(system.c_matrices[start + i], transition)
        transition = numpy.dot(system.a_matrices[start + i], transition)
    return observability


def toeplitz_matrix(system, start, depth):
    r"""Block lower-triangular map from inputs to outputs over the window; shape ``(p depth, m depth)``.

    Block ``(i, i)`` is ``D_{t+i}`` and block ``(i, j)``, ``j < i``, is ``C_{t+i} A_{t+i-1} ... A_{t+j+1} B_{t+j}``.

    """
    _check_window(system, start, depth)
    output_dim, input_dim = system.output_dim, system.input_dim
    toeplitz = numpy.zeros((output_dim * depth, input_dim * depth))
    for j in range(depth):
        columns = slice(j * input_dim, (j + 1) * input_dim)
        toeplitz[j * output_dim:(j + 1) * output_dim, columns] = system.d_matrices[start + j]
        propagated = system.b_matrices[start + j]
        for i in range(j + 1, depth):
            toeplitz[i * output_dim:(i + 1) * output_dim, columns] = numpy.dot(system.c_matrices[start + i], propagated)
            propagated = numpy.dot(system.a_matrices[start + i], propagated)
    return toeplitz


def behavior_matrix(system, start, depth):
    r"""Build ``Lambda_t``, rows laid out as ``[all inputs; all outputs]``; shape ``((m+p) depth, k + m depth)``."""
    input_rows = system.input_dim * depth
    state_dim = system.state_dim
    spanning = numpy.zeros((input_rows + system.output_dim * depth, state_dim + input_rows))
    spanning[:input_rows, state_dim:] = numpy.eye(input_rows)
    spanning[input_rows:, :state_dim] = observability_matrix(system, start, depth)
    spanning[input_rows:, state_dim:] = toeplitz_matrix(system, start, depth)
    return spanning


def restricted_behavior(system, start, depth_minus_one, observability_tolerance=OBSERVABILITY_TOLERANCE,
                        rank_tolerance=DEFAULT_RANK_TOLERANCE):
    r"""Orthonormal basis of the restricted behavior on ``[t, t + L]``.

    :param system: the plant
    :type system: LtvSystem
    :param start: first time step ``t`` of the window
    :type start: int >= 0
    :param depth_minus_one: ``L``; trajectories have ``L + 1`` steps
    :type depth_minus_one: int >= 0
    :param observability_tolerance: the window is observable iff ``sigma_k(O) > tol * sigma_1(O)``
    :type observability_tolerance: float64
    :return: subspace of dimension ``k + m (L + 1)`` in ``R^{(m+p)(L+1)}``
    :rtype: Subspace
    :raise: Unobservable if the observability matrix is numerically rank deficient

    """
    depth = depth_minus_one + 1
    if system.state_dim > 0:
        singular_values = numpy.linalg.svd(observability_matrix(system, start, depth), compute_uv=False)
        if singular_values.size < system.state_dim or not singular_values[system.state_dim - 1] > observability_tolerance * singular_values[0]:
            raise Unobservable('system is not observable over [{0:d}, {1:d}]'.format(start, start + depth_minus_one))
    return orthonormalize(behavior_matrix(system, start, depth), rank_tolerance=rank_tolerance)


def _as_signal(signal, width, name):
    """View a signal as a ``(length, width)`` array; 1d signals are accepted when ``width == 1``."""
    signal = numpy.asarray(signal, dtype=numpy.float64)
    if signal.ndim == 1 and width == 1:
        signal = signal[:, numpy.newaxis]
    if signal.ndim != 2 or signal.shape[1] != width:
        raise DimensionMismatch('{0} has shape {1}, expected (length, {2:d})'.format(name, signal.shape, width))
    return signal


def ltv_simulate(system, initial_state, inputs, start=0, return_states=False):
    r"""Run the state recursion of ``system`` from ``initial_state`` at time ``start``.

    :param system: the plant
    :type system: LtvSystem
    :param initial_state: ``x_start``
    :type initial_state: array of float64 with shape (k,)
    :param inputs: ``v_start, ..., v_{start+N-1}``
    :type inputs: array of float64 with shape (N, m)
    :param start: time step of the first input
    :type start: int >= 0
    :param return_states: also return ``x_start, ..., x_{start+N}``
    :type return_states: bool
    :return: outputs with shape (N, p), and the states with shape (N + 1, k) if requested
    :raise: HorizonExceeded if ``start + N`` exceeds the horizon

    """
    inputs = _as_signal(inputs, system.input_dim, 'inputs')
    num_steps = inputs.shape[0]
    if start < 0 or start + num_steps > system.horizon:
        raise HorizonExceeded('{0:d} inputs from t = {1:d} exceed horizon {2:d}'.format(num_steps, start, system.horizon))
    state = numpy.asarray(initial_state, dtype=numpy.float64).reshape(system.state_dim)

    outputs = numpy.zeros((num_steps, system.output_dim))
    states = numpy.zeros((num_steps + 1, system.state_dim))
    states[0, ...] = state
    for i in range(num_steps):
        t = start + i
        outputs[i, ...] = numpy.dot(system.c_matrices[t], state) + numpy.dot(system.d_matrices[t], inputs[i, ...])
        state = numpy.dot(system.a_matrices[t], state) + numpy.dot(system.b_matrices[t], inputs[i, ...])
        states[i + 1, ...] = state

    if return_states:
        return outputs, states
    return outputs


def hankel(signal, depth):
    r"""Block Hankel matrix of depth ``depth``: block ``(i, j)`` is ``signal[i + j]``.

    :param signal: ``N`` samples of a ``q``-dimensional signal (1d arrays are scalar signals)
    :type signal: array of float64 with shape (N, q) or (N,)
    :param depth: number of block rows
    :type depth: int in [1, N]
    :rtype: array of float64 with shape (q depth, N - depth + 1)
    :raise: TooShort if ``N < depth``

    """
    signal = numpy.asarray(signal, dtype=numpy.float64)
    if signal.ndim == 1:
        signal = signal[:, numpy.newaxis]
    length, width = signal.shape
    if depth < 1 or length < depth:
        raise TooShort('a signal of length {0:d} has no Hankel matrix of depth {1:d}'.format(length, depth))
    num_columns = length - depth + 1
    return numpy.vstack([signal[i:i + num_columns, ...].T for i in range(depth)])


def stack_sample(inputs, outputs, depth_minus_one=None):
    r"""Stack ``L + 1`` inputs and outputs into one sample ``[v_{[t-L,t]}; y_{[t-L,t]}]``.

    :param inputs: input window, oldest first
    :type inputs: array of float64 with shape (L + 1, m) or (L + 1,)
    :param outputs: output window, oldest first
    :type outputs: array of float64 with shape (L + 1, p) or (L + 1,)
    :param depth_minus_one: expected ``L``; checked when given
    :type depth_minus_one: int or None
    :rtype: array of float64 with shape ((m + p)(L + 1),)
    :raise: LengthMismatch if the windows do not both have ``L + 1`` entries

    """
    inputs = numpy.asarray(inputs, dtype=numpy.float64)
    outputs = numpy.asarray(outputs, dtype=numpy.float64)
    if inputs.shape[0] != outputs.shape[0]:
        raise LengthMismatch('input window has {0:d} steps, output window {1:d}'.format(inputs.shape[0], outputs.shape[0]))
    if depth_minus_one is not None and inputs.shape[0] != depth_minus_one + 1:
        raise LengthMismatch('windows have {0:d} steps, expected L + 1 = {1:d}'.format(inputs.shape[0], depth_minus_one + 1))
    return numpy.concatenate((inputs.ravel(), outputs.ravel()))


def io_samples(inputs, outputs, depth):
    r"""All stacked samples of a recorded trajectory as columns: ``[H_depth(v); H_depth(y)]``."""
    if numpy.shape(inputs)[0] != numpy.shape(outputs)[0]:
        raise LengthMismatch('{0:d} inputs but {1:d} outputs'.format(numpy.shape(inputs)[0], numpy.shape(outputs)[0]))
    return numpy.vstack((hankel(inputs, depth), hankel(outputs, depth)))


# See Predictor (below) for docstring.
_BasePredictor = collections.namedtuple('_BasePredictor', [
    'matrix',
    'input_dim',
    'output_dim',
    't_ini',
    't_fut',
])


class Predictor(_BasePredictor):

    r"""Linear multi-step predictor ``y_fut = M [v_ini; y_ini; v_fut]``.

    :ivar matrix: (*array of float64 with shape (p t_fut, m t_ini + p t_ini + m t_fut)*) ``M``
    :ivar input_dim: (*int*) ``m``
    :ivar output_dim: (*int*) ``p``
    :ivar t_ini: (*int > 0*) number of past steps used to pin down the initial state
    :ivar t_fut: (*int > 0*) number of predicted steps

    """

    __slots__ = ()

    def __new__(cls, matrix, input_dim, output_dim, t_ini, t_fut):
        """Allocate and construct a new instance, checking the partition arithmetic."""
        expected = (output_dim * t_fut, input_dim * t_ini + output_dim * t_ini + input_dim * t_fut)
        if numpy.shape(matrix) != expected:
            raise DimensionMismatch('predictor matrix has shape {0}, expected {1}'.format(numpy.shape(matrix), expected))
        return super(Predictor, cls).__new__(cls, matrix, input_dim, output_dim, t_ini, t_fut)

    def predict(self, inputs_ini, outputs_ini, inputs_fut):
        r"""Predict the next ``t_fut`` outputs.

        :param inputs_ini: past inputs, oldest first, shape (t_ini, m)
        :param outputs_ini: past outputs, oldest first, shape (t_ini, p)
        :param inputs_fut: future inputs, shape (t_fut, m)
        :return: predicted outputs
        :rtype: array of float64 with shape (t_fut, p)

        """
        regressor = numpy.concatenate((
            numpy.ravel(inputs_ini),
            numpy.ravel(outputs_ini),
            numpy.ravel(inputs_fut),
        ))
        if regressor.size != self.matrix.shape[1]:
            raise LengthMismatch('regressor has {0:d} entries, expected {1:d}'.format(regressor.size, self.matrix.shape[1]))
        return numpy.dot(self.matrix, regressor).reshape(self.t_fut, self.output_dim)


def predictor_from_subspace(estimate, input_dim, output_dim, t_ini, t_fut, rcond=PSEUDOINVERSE_RELATIVE_TOLERANCE):
    r"""Subspace predictor ``M = U^{y_fut} pinv([U^{v_ini}; U^{y_ini}; U^{v_fut}])``.

    The pseudoinverse truncates singular values below ``rcond`` times the largest one; when no trajectory of the
    estimate matches the regressor exactly, the prediction is the least-squares fit.

    :param estimate: behavior estimate over trajectories of ``t_ini + t_fut`` steps
    :type estimate: Subspace
    :rtype: Predictor
    :raise: DimensionMismatch if the ambient dimension is not ``(m + p)(t_ini + t_fut)``

    """
    depth = t_ini + t_fut
    if estimate.ambient_dim != (input_dim + output_dim) * depth:
        raise DimensionMismatch('ambient dimension {0:d} != (m + p)(t_ini + t_fut) = {1:d}'.format(
            estimate.ambient_dim,
            (input_dim + output_dim) * depth,
        ))
    basis = estimate.basis
    input_rows = input_dim * depth
    inputs_ini = basis[:input_dim * t_ini, ...]
    inputs_fut = basis[input_dim * t_ini:input_rows, ...]
    outputs_ini = basis[input_rows:input_rows + output_dim * t_ini, ...]
    outputs_fut = basis[input_rows + output_dim * t_ini:, ...]

    regressor_rows = numpy.vstack((inputs_ini, outputs_ini, inputs_fut))
    matrix = numpy.dot(outputs_fut, numpy.linalg.pinv(regressor_rows, rcond=rcond))
    return Predictor(matrix, input_dim, output_dim, t_ini, t_fut)


def relative_prediction_error(predicted, reference):
    r"""Relative error ``sqrt(sum ||y_hat - y||^2 / sum ||y||^2)``.

    :raise: LengthMismatch if shapes differ; ZeroReference if the reference is identically zero

    """
    predicted = numpy.asarray(predicted, dtype=numpy.float64)
    reference = numpy.asarray(reference, dtype=numpy.float64)
    if predicted.shape != reference.shape:
        raise LengthMismatch('prediction shape {0} != reference shape {1}'.format(predicted.shape, reference.shape))
    energy = numpy.sum(reference ** 2)
    if energy == 0.0:
        raise ZeroReference('reference signal is identically zero')
    return numpy.sqrt(numpy.sum((predicted - reference) ** 2) / energy)
