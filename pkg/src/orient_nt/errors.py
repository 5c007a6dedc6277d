"""Exception hierarchy shared by every module of the package."""

from __future__ import annotations


class OrientError(Exception):
    """Base class for all errors raised by this package."""


# plane graph construction and surgery


class GraphError(OrientError):
    pass


class NotSimple(GraphError):
    pass


class Disconnected(GraphError):
    pass


class NonPlanarEmbedding(GraphError):
    pass


class NotTwoConnected(GraphError):
    pass


class NotACycle(GraphError):
    pass


class EdgeAbsent(GraphError):
    pass


class VertexAbsent(GraphError):
    pass


class ParseError(OrientError):
    """Malformed input file. ``line`` is 1-based, or None for whole-file problems."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        prefix = f"line {line}: " if line is not None else ""
        super().__init__(prefix + message)


# orientations


class OrientationError(OrientError):
    pass


class NotStrong(OrientationError):
    pass


class IncompatibleOnSharedEdges(OrientationError):
    pass


class OverlapTooLarge(IncompatibleOnSharedEdges):
    pass


# search


class HasBridge(OrientError):
    pass


class BudgetExhausted(OrientError):
    """Search stopped before proving optimality.

    ``value`` and ``witness`` hold the best incumbent (possibly None) and
    ``lower_bound`` the best proven lower bound.
    """

    def __init__(self, message: str, value=None, witness=None, lower_bound=None):
        super().__init__(message)
        self.value = value
        self.witness = witness
        self.lower_bound = lower_bound


class Infeasible(OrientError):
    pass


# structure / engine


class PreconditionFailed(OrientError):
    pass


class HypothesisViolated(PreconditionFailed):
    pass


class NotNearTriangulation(OrientError):
    pass


class NotMaximalOuterplanar(NotNearTriangulation):
    pass


class VerificationFailed(OrientError):
    def __init__(self, message: str, trace: list[str] | None = None):
        super().__init__(message)
        self.trace = list(trace or [])


class AnchorUnmet(VerificationFailed):
    pass


class CensusMismatch(OrientError):
    pass
