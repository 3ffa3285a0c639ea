# -*- coding: utf-8 -*-
"""Exceptions raised by :mod:`subtrack.tracking`.

Every error derives from :class:`SubspaceTrackingError`. Errors caused by bad arguments also derive from
``ValueError`` so that callers catching ``ValueError`` (the convention for invalid parameters elsewhere in
this package) see them too.

"""


class SubspaceTrackingError(Exception):

    """Base class for all errors raised by the subspace tracking library."""

    pass


class DimensionMismatch(SubspaceTrackingError, ValueError):

    """Shapes of the operands are inconsistent (ambient dimension, subspace dimension, sample length)."""

    pass


class RankDeficient(SubspaceTrackingError, ValueError):

    """A matrix that must have full column rank does not, relative to the configured rank tolerance."""

    pass


class EmptyWindow(SubspaceTrackingError):

    """A data window holds no samples."""

    pass


class InvalidRho(SubspaceTrackingError, ValueError):

    """The contraction factor ``rho_tilde`` lies outside of ``[0, 1)``."""

    pass


class AssumptionViolated(SubspaceTrackingError):

    """A condition of the tube certificates does not hold.

    Raised when the feasibility condition fails, when the initial estimate starts outside the ball of radius ``r_b``,
    and when a measured trajectory leaves its tube (some bound assumed for the data is wrong).

    :ivar report: (*Assumption4Report or None*) the feasibility check of the step size concerned, including its
        signed slack; None when no step size is involved

    """

    def __init__(self, message, report=None):
        """Construct an AssumptionViolated error carrying the failed report."""
        super(AssumptionViolated, self).__init__(message)
        self.report = report


class Infeasible(SubspaceTrackingError):

    """No step size in the admissible interval satisfies the feasibility condition."""

    pass


class TooShort(SubspaceTrackingError, ValueError):

    """A signal is shorter than the requested Hankel depth."""

    pass


class Unobservable(SubspaceTrackingError):

    """The observability matrix of an LTV system is numerically rank deficient over the requested window."""

    pass


class HorizonExceeded(SubspaceTrackingError, ValueError):

    """A simulation or behavior query reaches past the last time step of an LTV system."""

    pass


class LengthMismatch(SubspaceTrackingError, ValueError):

    """Input and output windows (or predictions and references) have different lengths."""

    pass


class ZeroReference(SubspaceTrackingError, ValueError):

    """A relative error was requested against an all-zero reference signal."""

    pass


class Unreachable(SubspaceTrackingError, ValueError):

    """The requested chordal distance cannot be attained on this Grassmann manifold."""

    pass


class EmptyGrid(SubspaceTrackingError, ValueError):

    """A hyperparameter validation grid has no candidates."""

    pass
