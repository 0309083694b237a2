"""Exception types raised across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain an operation supports."""


class PreconditionError(ValueError):
    """Input data violates a documented precondition (grid spacing, span, ...)."""


class InconsistencyError(ValueError):
    """Inputs are individually valid but jointly inconsistent, e.g. non-unitary amplitudes."""


class NumericError(ArithmeticError):
    """An iterative numeric method failed to converge or lost accuracy."""
