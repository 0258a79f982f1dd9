"""Exception types shared across the toolkit."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ContractError(ValueError):
    """A structural precondition was violated (mismatched grids, bad shapes)."""


class GridMismatchError(ContractError):
    """Two grid functions do not live on the same grid."""


class NumericalFailureError(RuntimeError):
    """A numerical routine could not reach the requested accuracy.

    Carries the achieved error estimate in ``estimate``.
    """

    def __init__(self, message, estimate=None):
        super().__init__(message)
        self.estimate = estimate


class CriterionViolationError(ValueError):
    """Inputs violate the hypotheses of a constructive criterion."""


class WindowTooSmallError(DomainError):
    """The truncation window cannot hold the requested construction.

    ``required_x_max`` names the smallest admissible window edge.
    """

    def __init__(self, message, required_x_max):
        super().__init__(message)
        self.required_x_max = required_x_max


class SpectrumMembershipError(DomainError):
    """A spectral parameter is not admissible at the current truncation."""

    def __init__(self, message, lam):
        super().__init__(message)
        self.lam = lam
