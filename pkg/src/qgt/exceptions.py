"""Exception and warning types raised across the package."""


class QGTError(Exception):
    """Base class for all errors raised by qgt."""


class GraphValidationError(QGTError, ValueError):
    """An edge list does not describe a valid metric graph."""


class DisconnectedGraph(GraphValidationError):
    pass


class SelfLoop(GraphValidationError):
    pass


class NonPositiveLength(GraphValidationError):
    pass


class UnknownVertex(GraphValidationError, KeyError):
    pass


class CycleOfDegreeTwo(GraphValidationError):
    """The whole graph is a cycle of degree-2 vertices and cannot be cleaned."""


class ComputationError(QGTError):
    """A well-formed input on which a computation cannot proceed."""


class NoBoundaryVertex(ComputationError):
    """No degree-1 vertex: the Dirichlet problem has constants in its kernel."""


class SingularMatrix(ComputationError, ZeroDivisionError):
    pass


class InsufficientDepth(ComputationError):
    """Moment inversion ran out of significant digits before the requested depth.

    ``achieved`` is the number of pairs that were recovered and ``partial``
    holds them.
    """

    def __init__(self, message, achieved=0, partial=None):
        super().__init__(message)
        self.achieved = achieved
        self.partial = partial


class MissedRootRisk(UserWarning):
    """Eigenvalue count disagrees with the Weyl estimate."""
