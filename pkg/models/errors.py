"""Exception hierarchy shared by every phaseBits module."""

from typing import Optional


class PhaseBitsError(Exception):
    """Base class for all phaseBits errors."""


class CapacityError(PhaseBitsError, ValueError):
    """A basis or search space is too large to handle."""

    def __init__(self, k: int, N: int, size: Optional[int] = None, limit: Optional[int] = None):
        self.k = k
        self.N = N
        self.size = size
        self.limit = limit
        message = f"Capacity exceeded for (k={k}, N={N})"
        if size is not None and limit is not None:
            message += f": size {size} > limit {limit}"
        super().__init__(message)


class DomainError(PhaseBitsError, ValueError):
    """An argument lies outside the domain of the operation."""


class UnsupportedError(PhaseBitsError, ValueError):
    """The requested combination is not supported."""


class ValidationError(PhaseBitsError, ValueError):
    """A run configuration was rejected before any computation."""


class BudgetExceededError(PhaseBitsError, RuntimeError):
    """Quadrature ran out of integrand evaluations before reaching tolerance.

    Attributes:
        partial: QuadratureResult reached so far
    """

    def __init__(self, message: str, partial):
        super().__init__(message)
        self.partial = partial
