# -*- coding: utf-8 -*-
"""Base test case class for subspace tracking tests; includes additional asserts for numerical tests."""
import numpy

from subtrack.tracking.grassmann import Subspace, chordal_distance, qr_basis
from subtrack.tracking.simgen import make_rng


class SubspaceTrackingTestCase(object):

    """Base test case for the subspace tracking library.

    This includes extra asserts for checking relative differences of floating point scalars/vectors, a check that two
    subspaces coincide, and helpers drawing random subspaces and data.

    """

    @staticmethod
    def assert_scalar_within_absolute(value, truth, tol):
        """Check whether a scalar ``value`` is equal to ``truth``: ``|value - truth| <= tol``.

        :raise: AssertionError value, truth are not equal to within tolerance

        """
        __tracebackhide__ = True
        diff = numpy.fabs(value - truth)
        assert diff <= tol, 'value = {0:.18E}, truth = {1:.18E}, diff = {2:.18E}, tol = {3:.18E}'.format(value, truth, diff, tol)

    @staticmethod
    def assert_scalar_within_relative(value, truth, tol):
        """Check whether a scalar ``value`` is relatively equal to ``truth``: ``|value - truth|/|truth| <= tol``.

        :raise: AssertionError value, truth are not relatively equal

        """
        __tracebackhide__ = True
        denom = numpy.fabs(truth)
        if denom < numpy.finfo(numpy.float64).tiny:
            denom = 1.0  # do not divide by 0
        diff = numpy.fabs((value - truth) / denom)
        assert diff <= tol, 'value = {0:.18E}, truth = {1:.18E}, diff = {2:.18E}, tol = {3:.18E}'.format(value, truth, diff, tol)

    @staticmethod
    def assert_matrix_within_relative(value, truth, tol):
        """Check ``||value - truth||_F <= tol * ||truth||_F`` (absolute when ``truth`` vanishes).

        :raise: AssertionError if the matrices differ by more than ``tol``

        """
        __tracebackhide__ = True
        assert value.shape == truth.shape, 'value.shape = {0} != truth.shape = {1}'.format(value.shape, truth.shape)
        denom = numpy.linalg.norm(truth)
        if denom < numpy.finfo(numpy.float64).tiny:
            denom = 1.0
        diff = numpy.linalg.norm(value - truth) / denom
        assert diff <= tol, 'relative Frobenius difference = {0:.18E}, tol = {1:.18E}'.format(diff, tol)

    @staticmethod
    def assert_same_subspace(value, truth, tol):
        """Check ``d_2(value, truth) <= tol``.

        :raise: AssertionError if the subspaces are farther apart than ``tol``

        """
        __tracebackhide__ = True
        distance = chordal_distance(value, truth)
        assert distance <= tol, 'd_2 = {0:.18E}, tol = {1:.18E}'.format(distance, tol)

    @staticmethod
    def random_subspace(ambient_dim, dim, rng):
        """Draw a subspace of ``Gr(ambient_dim, dim)`` from the Gaussian (uniform) distribution."""
        return Subspace(qr_basis(rng.standard_normal((ambient_dim, dim))))

    @staticmethod
    def make_rng(seed):
        """Seeded generator for a test."""
        return make_rng(seed)
