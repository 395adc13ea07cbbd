"""Exception types shared across the package."""


class NodalFormsError(Exception):
    """Base class for all package errors."""


class InvalidMatrix(NodalFormsError):
    """Matrix input violates symmetry or finiteness requirements."""


class NoConvergence(NodalFormsError):
    """Iterative eigensolver exhausted its sweep budget."""


class NotPositiveDefinite(NodalFormsError):
    """Cholesky factorization hit a non-positive pivot."""


class DimensionError(NodalFormsError):
    """Vector length does not match the number of vertices."""


class EmptySubset(NodalFormsError):
    """Operation requires a nonempty vertex subset."""


class ZeroVector(NodalFormsError):
    """Operation requires a nonzero vector."""


class PreconditionError(NodalFormsError):
    """A stated precondition fails on the concrete input."""


class HypothesisNotMet(NodalFormsError):
    """Input does not satisfy the hypothesis of the decomposition result."""


class SizeLimit(NodalFormsError):
    """Brute-force enumeration refused: vertex set too large."""


class EmptyDomain(NodalFormsError):
    """Grid mask selects no cells."""


class SchemaError(NodalFormsError):
    """JSON input violates the declared schema."""

    def __init__(self, message, token=None):
        super().__init__(message)
        self.token = token
