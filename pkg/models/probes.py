"""Probe states on the non-degenerate subspace."""

from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from models.errors import DomainError, UnsupportedError
from models.hilbert import BasisCatalog, dimension, enumerate_basis

PRODUCT = "product"
HOLLAND_BURNETT = "hb"
CUSTOM = "custom"

PROBE_FAMILIES = (PRODUCT, HOLLAND_BURNETT)


@dataclass(frozen=True, eq=False)
class ProbeState:
    """
    Pure probe |Psi_0> expanded on the catalog basis.

    Attributes:
        k: Number of phases
        N: Number of resources
        amplitudes: Complex amplitudes in catalog order
        family: "product", "hb" or "custom"; lets evaluators pick a closed form
    """

    k: int
    N: int
    amplitudes: np.ndarray
    family: str = CUSTOM

    def __post_init__(self):
        # Own a frozen copy; the caller's array stays writable
        amplitudes = np.array(self.amplitudes, dtype=complex)
        expected = dimension(self.k, self.N)
        if amplitudes.shape != (expected,):
            raise DomainError(
                f"Probe for k={self.k}, N={self.N} needs {expected} amplitudes, "
                f"got shape {amplitudes.shape}"
            )
        norm = float(np.sum(np.abs(amplitudes) ** 2))
        if abs(norm - 1.0) > 1e-12:
            raise DomainError(f"Probe is not normalised (norm^2 = {norm!r})")
        amplitudes.setflags(write=False)
        object.__setattr__(self, "amplitudes", amplitudes)

    @classmethod
    def from_amplitudes(cls, k: int, N: int, amplitudes: Sequence[complex]) -> "ProbeState":
        """Build a custom probe, normalising the given vector."""
        vector = np.asarray(amplitudes, dtype=complex).copy()
        norm = np.linalg.norm(vector)
        if norm == 0:
            raise DomainError("Amplitude vector is identically zero")
        return cls(k=k, N=N, amplitudes=vector / norm, family=CUSTOM)

    @cached_property
    def catalog(self) -> BasisCatalog:
        return enumerate_basis(self.k, self.N)

    @property
    def size(self) -> int:
        return int(self.amplitudes.shape[0])

    def is_real_nonnegative(self, atol: float = 1e-14) -> bool:
        return bool(
            np.all(np.abs(self.amplitudes.imag) <= atol)
            and np.all(self.amplitudes.real >= -atol)
        )

    def tensor_grid(self) -> np.ndarray:
        """Amplitudes scattered into the (N+1)^k box, zero outside the simplex."""
        grid = np.zeros((self.N + 1,) * self.k, dtype=complex)
        grid[tuple(self.catalog.array.T)] = self.amplitudes
        return grid

    def with_global_phase(self, angle: float) -> "ProbeState":
        """Same probe multiplied by exp(i*angle)."""
        return ProbeState(self.k, self.N, self.amplitudes * np.exp(1j * angle), self.family)

    def __repr__(self):
        return f"ProbeState(k={self.k}, N={self.N}, family={self.family!r})"


def equatorial_product(k: int, N: int) -> ProbeState:
    """
    N copies of the equatorial state (|0> + ... + |k>)/sqrt(k+1).

    Args:
        k: Number of phases
        N: Number of resources

    Returns:
        ProbeState with amplitudes sqrt(multinomial / (k+1)^N)
    """
    catalog = enumerate_basis(k, N)
    log_weights = catalog.log_multiplicities - N * np.log(k + 1)
    amplitudes = np.exp(0.5 * log_weights).astype(complex)
    # Multinomial sum identity makes this a no-op up to rounding
    amplitudes /= np.linalg.norm(amplitudes)
    return ProbeState(k=k, N=N, amplitudes=amplitudes, family=PRODUCT)


def holland_burnett(k: int, N: int) -> ProbeState:
    """Uniform superposition of all catalog vectors."""
    size = dimension(k, N)
    amplitudes = np.full(size, 1.0 / np.sqrt(size), dtype=complex)
    amplitudes /= np.linalg.norm(amplitudes)
    return ProbeState(k=k, N=N, amplitudes=amplitudes, family=HOLLAND_BURNETT)


def create_probe(family: str, k: int, N: int) -> ProbeState:
    """Factory function to create a named probe family."""
    family = family.lower()

    if family == PRODUCT:
        return equatorial_product(k, N)
    elif family == HOLLAND_BURNETT:
        return holland_burnett(k, N)
    else:
        raise UnsupportedError(f"Unknown probe family: {family}; choose from {PROBE_FAMILIES}")
