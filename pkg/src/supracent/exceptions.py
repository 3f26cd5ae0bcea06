"""Exception hierarchy shared across the package."""


class SupraError(Exception):
    """Base class for all errors raised by :mod:`supracent`."""


class DomainError(SupraError, ValueError):
    """An input value lies outside the domain an operation accepts."""


class ParseError(SupraError, ValueError):
    """A malformed row in a delimited input file."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class DanglingNodeError(DomainError):
    """A zero out-degree node was met under the ``error`` dangling policy."""


class PreconditionError(SupraError):
    """The supracentrality matrix fails the irreducibility preconditions."""

    def __init__(self, message, report=None):
        self.report = report
        super().__init__(message)


class ConvergenceError(SupraError):
    """An iterative eigensolver did not reach the requested tolerance."""

    def __init__(self, message, iterations=None, residual=None):
        self.iterations = iterations
        self.residual = residual
        super().__init__(message)
