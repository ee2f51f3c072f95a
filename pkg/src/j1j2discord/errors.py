"""Exception types raised by the package."""


class ArgumentError(ValueError):
    """Invalid argument value or shape."""


class CapacityError(RuntimeError):
    """A dense construction would exceed the configured size cap."""


class NumericalError(RuntimeError):
    """An iterative solver failed to converge.

    ``residuals`` carries the best residual norms reached, when known.
    """

    def __init__(self, message, residuals=None):
        super().__init__(message)
        self.residuals = residuals


class StructureError(ValueError):
    """A reduced density matrix does not have the expected X pattern."""


class DomainError(ValueError):
    """A finite-difference stencil crosses a non-analytic point."""
