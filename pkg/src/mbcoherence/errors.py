"""Exception hierarchy.

Each class carries the process exit code the command-line front end uses
when the error escapes a command.
"""


class CoherenceError(Exception):
    """Base class for all errors raised by this package."""

    exit_code = 1


class DomainError(CoherenceError, ValueError):
    """An argument lies outside the domain of the requested quantity."""

    exit_code = 2


class RegimeError(DomainError):
    """An approximation was requested outside the regime where it holds."""


class OrderError(DomainError):
    """Invalid coherence order (k < 2, k > N, or N < 2)."""


class ValidationError(DomainError):
    """Input matrix or vector violates a structural invariant."""


class DimensionError(DomainError):
    """Operands have mismatched sizes."""


class SizeLimitError(CoherenceError):
    """A hard guard on the problem size was exceeded."""

    exit_code = 3


class DiscretizationError(CoherenceError):
    """A quadrature discretization failed its accuracy check."""

    exit_code = 4
