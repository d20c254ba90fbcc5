# Models package initialization
from .errors import (
    BudgetExceededError,
    CapacityError,
    DomainError,
    PhaseBitsError,
    UnsupportedError,
    ValidationError,
)
from .hilbert import BasisCatalog, SimplexIndex, dimension, enumerate_basis, log_multiplicity
from .probes import ProbeState, create_probe, equatorial_product, holland_burnett

__all__ = [
    "BasisCatalog",
    "BudgetExceededError",
    "CapacityError",
    "DomainError",
    "PhaseBitsError",
    "ProbeState",
    "SimplexIndex",
    "UnsupportedError",
    "ValidationError",
    "create_probe",
    "dimension",
    "enumerate_basis",
    "equatorial_product",
    "holland_burnett",
    "log_multiplicity",
]
