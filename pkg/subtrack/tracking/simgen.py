# -*- coding: utf-8 -*-
r"""Seeded generators for synthetic tracking problems.

A synthetic problem is a sequence of true subspaces ``U_0, ..., U_N`` drifting a fixed chordal distance ``c`` per
step, and samples ``u_t = U_t xi_t + e_t`` whose noise has norm exactly ``eps``. Both bounds that the certificates
in :mod:`subtrack.tracking.certs` consume therefore hold by construction, with equality.

The drift direction is drawn once, as an ambient ``n x d`` matrix, and is re-projected onto the tangent space of
every new subspace (then re-normalized) before the next step. This approximates transport along a single geodesic;
only the per-step distance enters the certificates, and that distance is placed exactly by a scalar root-find.

Randomness comes from :class:`numpy.random.Generator` over ``PCG64``. Independent streams are derived with
:meth:`numpy.random.SeedSequence.spawn`, so a seed identifies a dataset on every platform numpy supports.

"""
from __future__ import division
import collections
import logging

import numpy

from subtrack.tracking.constant import BALANCED_EXCITATION, BISECTION_TOLERANCE, EXCITATION_TYPES, GAUSSIAN_EXCITATION
from subtrack.tracking.data_containers import SyntheticDataset
from subtrack.tracking.exceptions import DimensionMismatch, Unreachable
from subtrack.tracking.grassmann import Subspace, TangentVector, chordal_distance, exp_map, qr_basis, tangent_project
from subtrack.tracking.optimization import ClosedInterval, bisect_root


_log = logging.getLogger(__name__)


def make_rng(seed):
    """Return a ``Generator(PCG64)`` seeded by an int or a :class:`numpy.random.SeedSequence`."""
    return numpy.random.Generator(numpy.random.PCG64(seed))


def spawn_seeds(seed, num_streams):
    """Split ``seed`` into ``num_streams`` independent child :class:`numpy.random.SeedSequence` objects.

    Child ``i`` depends only on ``seed`` and ``i``: repeated calls return the same streams.

    """
    parent = seed if isinstance(seed, numpy.random.SeedSequence) else numpy.random.SeedSequence(seed)
    return [
        numpy.random.SeedSequence(entropy=parent.entropy, spawn_key=tuple(parent.spawn_key) + (i,))
        for i in range(num_streams)
    ]


def _as_rng(seed_or_rng):
    """Pass generators through; seed everything else."""
    if isinstance(seed_or_rng, numpy.random.Generator):
        return seed_or_rng
    return make_rng(seed_or_rng)


def random_tangent(subspace, seed):
    r"""Draw a unit-norm tangent vector at ``subspace``: a standard normal ``n x d`` matrix, projected and normalized.

    :param subspace: base point
    :type subspace: Subspace
    :param seed: seed or generator
    :type seed: int, SeedSequence or numpy.random.Generator
    :rtype: TangentVector

    """
    rng = _as_rng(seed)
    tangent = tangent_project(subspace, rng.standard_normal(subspace.basis.shape))
    return tangent.scaled(1.0 / tangent.norm)


def _random_orthogonal(dim, rng):
    """Haar-distributed ``dim x dim`` orthogonal matrix (QR of a Gaussian draw with the sign of ``diag(R)`` fixed)."""
    return qr_basis(rng.standard_normal((dim, dim)))


# See GeodesicSpec (below) for docstring.
_BaseGeodesicSpec = collections.namedtuple('_BaseGeodesicSpec', [
    'start',
    'direction',
    'per_step_distance',
    'steps',
    'seed',
])


class GeodesicSpec(_BaseGeodesicSpec):

    r"""Container describing a drifting sequence of subspaces.

    :ivar start: (*Subspace*) ``U_0``
    :ivar direction: (*TangentVector*) drift direction at ``U_0``
    :ivar per_step_distance: (*float64 >= 0*) chordal distance ``c`` between consecutive subspaces
    :ivar steps: (*int >= 0*) number of steps ``N``; the sequence holds ``N + 1`` subspaces
    :ivar seed: (*int or None*) seed the direction was drawn from, recorded for manifests

    """

    __slots__ = ()

    def __new__(cls, start, direction, per_step_distance, steps, seed=None):
        """Allocate and construct a new instance; see class docstring for input descriptions."""
        if per_step_distance < 0.0:
            raise ValueError('per_step_distance = {0} must be non-negative!'.format(per_step_distance))
        if steps < 0:
            raise ValueError('steps = {0} must be non-negative!'.format(steps))
        if direction.base.basis.shape != start.basis.shape:
            raise DimensionMismatch('direction shape {0} != start shape {1}'.format(direction.base.basis.shape, start.basis.shape))
        # re-validates tangency at ``start``
        TangentVector(start, direction.direction)
        return super(GeodesicSpec, cls).__new__(cls, start, direction, per_step_distance, steps, seed)

    @classmethod
    def random(cls, ambient_dim, dim, per_step_distance, steps, seed):
        """Draw ``U_0`` and the drift direction from ``seed``; see class docstring for input descriptions."""
        start_seed, direction_seed = spawn_seeds(seed, 2)
        start = Subspace(_random_orthogonal(ambient_dim, make_rng(start_seed))[:, :dim])
        return cls(start, random_tangent(start, direction_seed), per_step_distance, steps, seed=seed)


def _step_at_distance(base, direction, distance, tolerance=BISECTION_TOLERANCE):
    r"""Move from ``base`` along the unit-norm ``direction`` to the point at chordal distance ``distance``.

    Along the geodesic ``d_2(s) = sqrt(sum_i sin^2(s sigma_i))`` increases on ``[0, pi / (2 sigma_1)]``, which brackets
    the root of ``d_2(s) - distance``.

    """
    if distance == 0.0:
        return base
    spectral_norm = numpy.linalg.norm(direction.direction, 2)
    upper = 0.5 * numpy.pi / spectral_norm
    farthest = chordal_distance(base, exp_map(direction, upper))
    if distance > farthest:
        raise Unreachable('distance {0:.6e} exceeds {1:.6e}, the farthest point along the direction'.format(distance, farthest))

    scale = bisect_root(
        lambda s: chordal_distance(base, exp_map(direction, s)) - distance,
        ClosedInterval(0.0, upper),
        tolerance,
    )
    return exp_map(direction, scale)


def geodesic_sequence(spec):
    r"""Generate ``U_0, ..., U_N`` with ``d_2(U_t, U_{t+1}) = c`` for every ``t``.

    Each step walks along the ambient drift direction re-projected onto the current tangent space and normalized.

    :param spec: sequence description
    :type spec: GeodesicSpec
    :return: ``N + 1`` subspaces, starting with ``spec.start``
    :rtype: list of Subspace

    """
    ambient_direction = spec.direction.direction
    sequence = [spec.start]
    for _ in range(spec.steps):
        current = sequence[-1]
        if spec.per_step_distance == 0.0:
            sequence.append(current)
            continue
        transported = tangent_project(current, ambient_direction)
        transported = transported.scaled(1.0 / transported.norm)
        sequence.append(_step_at_distance(current, transported, spec.per_step_distance))

    _log.debug('generated {0:d} subspaces of Gr({1:d}, {2:d}) at spacing {3:.3e}'.format(
        len(sequence),
        spec.start.ambient_dim,
        spec.start.dim,
        spec.per_step_distance,
    ))
    return sequence


# See NoisySampleSpec (below) for docstring.
_BaseNoisySampleSpec = collections.namedtuple('_BaseNoisySampleSpec', [
    'noise_norm',
    'seed',
    'excitation',
])


class NoisySampleSpec(_BaseNoisySampleSpec):

    r"""Container describing how samples ``u_t = U_t xi_t + e_t`` are drawn.

    :ivar noise_norm: (*float64 >= 0*) ``eps``; every noise vector is scaled to exactly this norm
    :ivar seed: (*int or SeedSequence*) seed of the sample stream
    :ivar excitation: (*str*) coefficient design: ``gaussian`` draws ``xi_t ~ N(0, I_d)``; ``balanced`` makes each
      block of ``d`` consecutive coefficient vectors the columns of ``sqrt(d)`` times a random orthogonal matrix

    """

    __slots__ = ()

    def __new__(cls, noise_norm, seed, excitation=GAUSSIAN_EXCITATION):
        """Allocate and construct a new instance; see class docstring for input descriptions."""
        if noise_norm < 0.0:
            raise ValueError('noise_norm = {0} must be non-negative!'.format(noise_norm))
        if excitation not in EXCITATION_TYPES:
            raise ValueError('excitation {0} is not one of {1}'.format(excitation, EXCITATION_TYPES))
        return super(NoisySampleSpec, cls).__new__(cls, noise_norm, seed, excitation)


def _noise(ambient_dim, noise_norm, rng):
    """A vector of norm exactly ``noise_norm`` with a uniformly distributed direction."""
    if noise_norm == 0.0:
        return numpy.zeros(ambient_dim)
    direction = rng.standard_normal(ambient_dim)
    return noise_norm * direction / numpy.linalg.norm(direction)


def noisy_sample(subspace, spec, rng=None, coefficients=None):
    r"""Draw one sample ``u = U xi + e`` with ``||e||_2 = eps``.

    :param subspace: true subspace ``U``
    :type subspace: Subspace
    :param spec: sample description
    :type spec: NoisySampleSpec
    :param rng: generator to draw from; a fresh one seeded by ``spec.seed`` if omitted
    :type rng: numpy.random.Generator or None
    :param coefficients: ``xi``; drawn from ``N(0, I_d)`` if omitted
    :type coefficients: array of float64 with shape (d,) or None
    :rtype: array of float64 with shape (n,)

    """
    rng = make_rng(spec.seed) if rng is None else rng
    if coefficients is None:
        coefficients = rng.standard_normal(subspace.dim)
    signal = numpy.dot(subspace.basis, coefficients)
    return signal + _noise(subspace.ambient_dim, spec.noise_norm, rng)


def sample_stream(truths, spec):
    r"""Draw one sample per true subspace, all from the single stream seeded by ``spec.seed``.

    :param truths: ``U_1, ..., U_N``
    :type truths: sequence of Subspace
    :param spec: sample description
    :type spec: NoisySampleSpec
    :return: samples, one per row
    :rtype: array of float64 with shape (N, n)

    """
    if not truths:
        raise ValueError('cannot draw samples for an empty sequence of subspaces')
    rng = make_rng(spec.seed)
    dim = truths[0].dim
    samples = numpy.zeros((len(truths), truths[0].ambient_dim))
    block = None
    for t, truth in enumerate(truths):
        coefficients = None
        if spec.excitation == BALANCED_EXCITATION:
            if t % dim == 0:
                block = numpy.sqrt(dim) * _random_orthogonal(dim, rng)
            coefficients = block[:, t % dim]
        samples[t, ...] = noisy_sample(truth, spec, rng=rng, coefficients=coefficients)
    return samples


def perturbed_initial_estimate(truth, radius, seed, tolerance=BISECTION_TOLERANCE):
    r"""Draw an estimate at chordal distance exactly ``radius`` from ``truth``.

    The random tangent has its ``q = min(d, n - d)`` singular values equalized, so ``d_2(s) = sqrt(q) sin(s / sqrt(q))``
    reaches every radius below ``sqrt(q)``; the geodesic time is root-found.

    :param truth: center of the ball
    :type truth: Subspace
    :param radius: ``r``, the chordal distance to place the estimate at
    :type radius: float64 in [0, sqrt(min(d, n - d)))
    :param seed: seed or generator
    :type seed: int, SeedSequence or numpy.random.Generator
    :rtype: Subspace
    :raise: Unreachable if no subspace of ``Gr(n, d)`` lies at distance ``radius``

    """
    if radius < 0.0:
        raise ValueError('radius = {0} must be non-negative!'.format(radius))
    num_angles = min(truth.dim, truth.ambient_dim - truth.dim)
    if radius >= numpy.sqrt(num_angles):
        raise Unreachable('radius {0} is not below sqrt({1:d}), the largest chordal distance on Gr({2:d}, {3:d})'.format(
            radius,
            num_angles,
            truth.ambient_dim,
            truth.dim,
        ))
    if radius == 0.0:
        return truth

    left, _, right_transpose = numpy.linalg.svd(random_tangent(truth, seed).direction, full_matrices=False)
    equalized = numpy.dot(left[:, :num_angles], right_transpose[:num_angles, :]) / numpy.sqrt(num_angles)
    direction = TangentVector(truth, equalized)

    scale = bisect_root(
        lambda s: chordal_distance(truth, exp_map(direction, s)) - radius,
        ClosedInterval(0.0, 0.5 * numpy.pi * numpy.sqrt(num_angles)),
        tolerance,
    )
    return exp_map(direction, scale)


def synthetic_dataset(ambient_dim, dim, noise_norm, drift, steps, seed, excitation=GAUSSIAN_EXCITATION):
    r"""Generate a complete synthetic dataset: ``U_0, ..., U_N`` on a random drift and samples ``u_1, ..., u_N``.

    The first child stream of ``seed`` draws ``U_0`` and the drift direction, the second draws the samples.

    :param ambient_dim: ``n``
    :type ambient_dim: int > 0
    :param dim: ``d``
    :type dim: int in [1, n)
    :param noise_norm: ``eps``
    :type noise_norm: float64 >= 0
    :param drift: ``c``
    :type drift: float64 >= 0
    :param steps: ``N``
    :type steps: int > 0
    :param seed: dataset seed
    :type seed: int
    :param excitation: coefficient design, one of :data:`~subtrack.tracking.constant.EXCITATION_TYPES`
    :type excitation: str
    :rtype: SyntheticDataset

    """
    geodesic_seed, sample_seed = spawn_seeds(seed, 2)
    truths = geodesic_sequence(GeodesicSpec.random(ambient_dim, dim, drift, steps, geodesic_seed))
    samples = sample_stream(truths[1:], NoisySampleSpec(noise_norm, sample_seed, excitation=excitation))
    _log.info('synthetic dataset: Gr({0:d}, {1:d}), N = {2:d}, eps = {3:.3e}, c = {4:.3e}, seed = {5}'.format(
        ambient_dim, dim, steps, noise_norm, drift, seed))
    return SyntheticDataset(truths, samples, noise_norm, drift, seed, excitation)
