# -*- coding: utf-8 -*-
r"""Coordinate-free arithmetic on the Grassmann manifold ``Gr(n, d)``.

A point of ``Gr(n, d)`` is a ``d``-dimensional subspace of ``R^n``; we hold it as a :class:`Subspace`, i.e. one
orthonormal ``n x d`` basis representing it. Every function in this module depends on the subspace only, never on
the particular basis (right-multiplying a basis by an orthogonal ``d x d`` matrix changes nothing).

Metrics, in terms of the principal angles ``0 <= theta_1 <= ... <= theta_d <= pi/2``:

* chordal distance ``d_2(U, V) = sqrt(sum_i sin^2(theta_i)) = ||P_U^perp V||_F``
* gap distance ``d_inf(U, V) = sin(theta_d) = ||P_U - P_V||_2``

Small angles are computed from sines and large ones from cosines so that distances keep full relative accuracy
down to round-off (``arccos`` alone cannot resolve angles below ~1e-8).

Motion on the manifold uses tangent vectors ``V`` with ``U^T V = 0`` and the exponential map

.. math:: \mathrm{Exp}_U(V) = [U Q_2 \;\; Q_1] \begin{bmatrix} \cos S \\ \sin S \end{bmatrix} Q_2^T,
   \quad V = Q_1 S Q_2^T \text{ (compact SVD)}.

"""
from __future__ import division
import collections

import numpy
import scipy.linalg

from subtrack.tracking.constant import DEFAULT_RANK_TOLERANCE, ORTHONORMALITY_TOLERANCE, PRINCIPAL_ANGLE_SLACK, TANGENCY_TOLERANCE
from subtrack.tracking.exceptions import DimensionMismatch, RankDeficient


def _frozen_copy(matrix):
    """Return a read-only float64 copy of ``matrix``."""
    frozen = numpy.array(matrix, dtype=numpy.float64)
    frozen.setflags(write=False)
    return frozen


def qr_basis(matrix):
    """Orthonormal basis of span(matrix) from a thin QR, with signs fixed so that ``diag(R) >= 0``."""
    q_factor, r_factor = scipy.linalg.qr(matrix, mode='economic')
    signs = numpy.sign(numpy.diag(r_factor))
    signs[signs == 0.0] = 1.0
    return q_factor * signs


# See Subspace (below) for docstring.
_BaseSubspace = collections.namedtuple('_BaseSubspace', [
    'basis',
])


class Subspace(_BaseSubspace):

    r"""A ``d``-dimensional subspace of ``R^n`` held as an orthonormal ``n x d`` basis.

    The basis is stored as a read-only array; instances are immutable values.

    :ivar basis: (*array of float64 with shape (n, d)*) orthonormal columns spanning the subspace

    """

    __slots__ = ()

    def __new__(cls, basis, tolerance=ORTHONORMALITY_TOLERANCE):
        """Allocate and construct a new instance, checking orthonormality of ``basis`` to within ``tolerance``."""
        basis = _frozen_copy(basis)
        if basis.ndim != 2:
            raise DimensionMismatch('basis must be a 2d array; got {0} dims!'.format(basis.ndim))
        ambient_dim, dim = basis.shape
        if not 1 <= dim <= ambient_dim:
            raise DimensionMismatch('basis shape {0} must satisfy 1 <= d <= n!'.format(basis.shape))
        defect = numpy.linalg.norm(numpy.dot(basis.T, basis) - numpy.eye(dim))
        if defect > tolerance:
            raise ValueError('basis is not orthonormal: ||B^T B - I||_F = {0:.3e} > {1:.3e}'.format(defect, tolerance))
        return super(Subspace, cls).__new__(cls, basis)

    @property
    def ambient_dim(self):
        """Return ``n``, the dimension of the ambient space."""
        return self.basis.shape[0]

    @property
    def dim(self):
        """Return ``d``, the dimension of the subspace."""
        return self.basis.shape[1]

    def projector(self):
        """Return the dense ``n x n`` orthogonal projector ``U U^T``."""
        return numpy.dot(self.basis, self.basis.T)


# See TangentVector (below) for docstring.
_BaseTangentVector = collections.namedtuple('_BaseTangentVector', [
    'base',
    'direction',
])


class TangentVector(_BaseTangentVector):

    r"""A tangent vector to ``Gr(n, d)`` at ``base``: an ``n x d`` matrix ``V`` with ``base.basis^T V = 0``.

    :ivar base: (*Subspace*) point of the manifold the vector is attached to
    :ivar direction: (*array of float64 with shape (n, d)*) the horizontal representation of the vector

    """

    __slots__ = ()

    def __new__(cls, base, direction, tolerance=TANGENCY_TOLERANCE):
        """Allocate and construct a new instance, checking tangency to within ``tolerance`` (scaled by ``||V||_F``)."""
        direction = _frozen_copy(direction)
        if direction.shape != base.basis.shape:
            raise DimensionMismatch('direction shape {0} != base shape {1}'.format(direction.shape, base.basis.shape))
        defect = numpy.linalg.norm(numpy.dot(base.basis.T, direction))
        if defect > tolerance * max(1.0, numpy.linalg.norm(direction)):
            raise ValueError('direction is not tangent at base: ||U^T V||_F = {0:.3e}'.format(defect))
        return super(TangentVector, cls).__new__(cls, base, direction)

    @property
    def norm(self):
        """Return the Riemannian (Frobenius) norm of this tangent vector."""
        return numpy.linalg.norm(self.direction)

    def scaled(self, scale):
        """Return ``scale`` times this tangent vector, at the same base."""
        return TangentVector(self.base, scale * self.direction)


# See PrincipalAngles (below) for docstring.
_BasePrincipalAngles = collections.namedtuple('_BasePrincipalAngles', [
    'angles',
])


class PrincipalAngles(_BasePrincipalAngles):

    r"""Principal angles ``0 <= theta_1 <= ... <= theta_d <= pi/2`` between two subspaces of equal dimension.

    :ivar angles: (*array of float64 with shape (d,)*) angles in radians, sorted ascending

    """

    __slots__ = ()

    def __new__(cls, angles):
        """Allocate and construct a new instance; angles must be sorted and lie in ``[0, pi/2]`` up to slack."""
        angles = _frozen_copy(angles)
        if numpy.any(angles < -PRINCIPAL_ANGLE_SLACK) or numpy.any(angles > 0.5 * numpy.pi + PRINCIPAL_ANGLE_SLACK):
            raise ValueError('principal angles {0} must lie in [0, pi/2]!'.format(angles))
        if numpy.any(numpy.diff(angles) < 0.0):
            raise ValueError('principal angles {0} must be sorted ascending!'.format(angles))
        return super(PrincipalAngles, cls).__new__(cls, angles)

    @property
    def sines(self):
        """Return ``sin(theta_i)``, ascending."""
        return numpy.sin(self.angles)


def _check_same_manifold(subspace_one, subspace_two):
    """Raise DimensionMismatch unless both subspaces live on the same ``Gr(n, d)``."""
    if subspace_one.basis.shape != subspace_two.basis.shape:
        raise DimensionMismatch('subspaces live on different Grassmannians: {0} vs {1}'.format(
            subspace_one.basis.shape,
            subspace_two.basis.shape,
        ))


def _check_ambient(subspace, array):
    """Raise DimensionMismatch unless ``array`` has ``n`` rows (or length ``n``)."""
    if array.shape[0] != subspace.ambient_dim:
        raise DimensionMismatch('leading dimension {0:d} != ambient dimension {1:d}'.format(array.shape[0], subspace.ambient_dim))


def orthonormalize(matrix, rank_tolerance=DEFAULT_RANK_TOLERANCE):
    r"""Return the Subspace spanned by the columns of ``matrix``.

    :param matrix: spanning set of the subspace
    :type matrix: array of float64 with shape (n, d), full column rank
    :param rank_tolerance: ``matrix`` has full rank iff ``sigma_d > rank_tolerance * sigma_1``
    :type rank_tolerance: float64 > 0
    :return: orthonormalized column space of ``matrix``
    :rtype: Subspace
    :raise: RankDeficient if ``sigma_d(matrix) <= rank_tolerance * sigma_1(matrix)``

    """
    matrix = numpy.asarray(matrix, dtype=numpy.float64)
    if matrix.ndim != 2 or matrix.shape[1] == 0 or matrix.shape[1] > matrix.shape[0]:
        raise DimensionMismatch('cannot orthonormalize a matrix of shape {0}'.format(matrix.shape))
    singular_values = numpy.linalg.svd(matrix, compute_uv=False)
    if not singular_values[-1] > rank_tolerance * singular_values[0]:
        raise RankDeficient('sigma_d = {0:.3e} <= {1:.1e} * sigma_1 = {2:.3e}'.format(
            singular_values[-1],
            rank_tolerance,
            singular_values[0],
        ))
    return Subspace(qr_basis(matrix))


def project(subspace, vector):
    """Return ``P_U x = U U^T x``; ``vector`` may be an n-vector or an ``n x k`` matrix."""
    vector = numpy.asarray(vector, dtype=numpy.float64)
    _check_ambient(subspace, vector)
    return numpy.dot(subspace.basis, numpy.dot(subspace.basis.T, vector))


def complement_project(subspace, vector):
    """Return ``P_U^perp x = x - U U^T x``; ``vector`` may be an n-vector or an ``n x k`` matrix."""
    vector = numpy.asarray(vector, dtype=numpy.float64)
    return vector - project(subspace, vector)


def principal_angles(subspace_one, subspace_two):
    r"""Compute the principal angles between two subspaces of ``Gr(n, d)``.

    Cosines come from the singular values of ``U^T V`` (clamped into ``[0, 1]``) and sines from the singular values
    of ``P_U^perp V``; angles below ``pi/4`` are taken from the sines, the rest from the cosines.

    :param subspace_one: first subspace
    :type subspace_one: Subspace
    :param subspace_two: second subspace
    :type subspace_two: Subspace
    :return: angles sorted ascending
    :rtype: PrincipalAngles
    :raise: DimensionMismatch if the subspaces live on different Grassmannians

    """
    _check_same_manifold(subspace_one, subspace_two)
    overlap = numpy.dot(subspace_one.basis.T, subspace_two.basis)
    cosines = numpy.clip(numpy.linalg.svd(overlap, compute_uv=False), 0.0, 1.0)
    residual = subspace_two.basis - numpy.dot(subspace_one.basis, overlap)
    sines = numpy.clip(numpy.linalg.svd(residual, compute_uv=False), 0.0, 1.0)

    # cosines are descending and sines ascending after reversal, so both line up with ascending angles
    from_cosines = numpy.arccos(cosines)
    from_sines = numpy.arcsin(numpy.sort(sines))
    angles = numpy.where(from_cosines < 0.25 * numpy.pi, from_sines, from_cosines)
    return PrincipalAngles(numpy.sort(angles))


def chordal_distance(subspace_one, subspace_two):
    r"""Compute the chordal distance ``d_2(U, V) = sqrt(sum_i sin^2 theta_i) = ||P_U^perp V||_F``.

    :rtype: float64 >= 0
    :raise: DimensionMismatch if the subspaces live on different Grassmannians

    """
    _check_same_manifold(subspace_one, subspace_two)
    return numpy.linalg.norm(complement_project(subspace_one, subspace_two.basis))


def gap_distance(subspace_one, subspace_two):
    r"""Compute the gap distance ``d_inf(U, V) = sin(theta_d) = ||P_U - P_V||_2``.

    :rtype: float64 in [0, 1]
    :raise: DimensionMismatch if the subspaces live on different Grassmannians

    """
    _check_same_manifold(subspace_one, subspace_two)
    return min(1.0, numpy.linalg.norm(complement_project(subspace_one, subspace_two.basis), 2))


def tangent_project(subspace, matrix):
    r"""Project an ``n x d`` matrix onto the tangent space at ``subspace``: ``(I - U U^T) M``.

    :rtype: TangentVector
    :raise: DimensionMismatch if ``matrix`` does not have the shape of ``subspace.basis``

    """
    matrix = numpy.asarray(matrix, dtype=numpy.float64)
    if matrix.shape != subspace.basis.shape:
        raise DimensionMismatch('matrix shape {0} != basis shape {1}'.format(matrix.shape, subspace.basis.shape))
    return TangentVector(subspace, complement_project(subspace, matrix))


def exp_map(tangent, scale=1.0):
    r"""Follow the geodesic from ``tangent.base`` in the direction ``tangent.direction`` for time ``scale``.

    With the compact SVD ``scale * V = Q_1 S Q_2^T`` restricted to its ``r`` nonzero singular values, the result is
    ``U + U Q_2 (cos S - I) Q_2^T + Q_1 sin S Q_2^T``: base directions outside the row space of ``V`` are unchanged.
    The output is re-orthonormalized by QR.

    :param tangent: direction of motion
    :type tangent: TangentVector
    :param scale: geodesic time; negative values walk backwards
    :type scale: float64
    :return: ``Exp_U(scale * V)``
    :rtype: Subspace

    """
    base = tangent.base
    if scale == 0.0:
        return base
    left, singular_values, right_transpose = numpy.linalg.svd(scale * tangent.direction, full_matrices=False)
    if singular_values.size == 0 or singular_values[0] == 0.0:
        return base
    cutoff = singular_values[0] * numpy.finfo(numpy.float64).eps * max(base.basis.shape)
    rank = int(numpy.count_nonzero(singular_values > cutoff))

    left = left[:, :rank]
    angles = singular_values[:rank]
    right = right_transpose[:rank, :].T

    rotated = numpy.dot(base.basis, right)
    moved = base.basis + numpy.dot(rotated * (numpy.cos(angles) - 1.0) + left * numpy.sin(angles), right.T)
    return Subspace(qr_basis(moved))


def squared_distance_gradient(estimate, truth):
    r"""Riemannian gradient of ``X -> d_2(X, truth)^2`` at ``X = estimate``: ``-2 P_X^perp P_truth X``.

    :rtype: TangentVector

    """
    _check_same_manifold(estimate, truth)
    return tangent_project(estimate, -2.0 * project(truth, estimate.basis))
