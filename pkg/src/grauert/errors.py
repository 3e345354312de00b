"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested quantity."""


class NumericError(ArithmeticError):
    """A numerical procedure failed to reach its tolerance.

    ``estimate`` carries the achieved error estimate when one is available.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class SearchError(RuntimeError):
    """A bracketing or root search did not find what it was looking for."""
