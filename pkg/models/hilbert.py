"""
Non-degenerate symmetric subspace for k phases and N resources.

Basis vectors are labelled by occupation numbers (n1, ..., nk) with
n0 = N - sum(n) left implicit. Catalog order is the nested-sum order with
n1 outermost, which is also the order of every amplitude vector.
"""

import math
import sys
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Dict, Iterator, Sequence, Tuple

import numpy as np
from scipy.special import gammaln

from config import HilbertConfig
from models.errors import CapacityError, DomainError


@dataclass(frozen=True, order=True)
class SimplexIndex:
    """Occupation numbers of one basis vector |n>_||."""

    entries: Tuple[int, ...]
    N: int = field(compare=False)

    def __post_init__(self):
        if any(n < 0 for n in self.entries):
            raise DomainError(f"Negative occupation in {self.entries}")
        if sum(self.entries) > self.N:
            raise DomainError(f"Occupations {self.entries} exceed N={self.N}")

    @property
    def k(self) -> int:
        return len(self.entries)

    @property
    def n0(self) -> int:
        """Occupation of the reference level."""
        return self.N - sum(self.entries)

    def full(self) -> Tuple[int, ...]:
        """All k+1 occupations, reference level first."""
        return (self.n0,) + tuple(self.entries)


def _check_arguments(k: int, N: int):
    if k < 1:
        raise DomainError(f"Phase count must be positive, got k={k}")
    if N < 0:
        raise DomainError(f"Resource count must be non-negative, got N={N}")


def dimension(k: int, N: int) -> int:
    """
    Dimension C(N+k, N) of the non-degenerate subspace.

    Args:
        k: Number of phases
        N: Number of resources

    Returns:
        Exact integer dimension

    Raises:
        CapacityError: if the dimension does not fit a machine index
    """
    _check_arguments(k, N)
    size = math.comb(N + k, N)
    if size > sys.maxsize:
        raise CapacityError(k, N, size, sys.maxsize)
    return size


def _simplex_rows(k: int, budget: int) -> np.ndarray:
    if k == 1:
        return np.arange(budget + 1, dtype=np.int64)[:, None]
    blocks = []
    for head in range(budget + 1):
        tail = _simplex_rows(k - 1, budget - head)
        column = np.full((tail.shape[0], 1), head, dtype=np.int64)
        blocks.append(np.hstack([column, tail]))
    return np.vstack(blocks)


@dataclass(frozen=True, eq=False)
class BasisCatalog:
    """Ordered list of the non-degenerate basis labels."""

    k: int
    N: int
    array: np.ndarray

    @property
    def size(self) -> int:
        return int(self.array.shape[0])

    @cached_property
    def indices(self) -> Tuple[SimplexIndex, ...]:
        return tuple(SimplexIndex(tuple(int(v) for v in row), self.N) for row in self.array)

    @cached_property
    def _positions(self) -> Dict[Tuple[int, ...], int]:
        return {tuple(int(v) for v in row): i for i, row in enumerate(self.array)}

    @cached_property
    def log_multiplicities(self) -> np.ndarray:
        """ln of the multinomial N!/(n0! n1! ... nk!) for every entry, in catalog order."""
        n0 = self.N - self.array.sum(axis=1)
        values = gammaln(self.N + 1) - gammaln(n0 + 1) - gammaln(self.array + 1).sum(axis=1)
        values.setflags(write=False)
        return values

    def position(self, entries: Sequence[int]) -> int:
        """Catalog position of a label."""
        key = tuple(int(v) for v in entries)
        if key not in self._positions:
            raise DomainError(f"{key} is not a basis label for k={self.k}, N={self.N}")
        return self._positions[key]

    def as_array(self) -> np.ndarray:
        return self.array

    def __iter__(self) -> Iterator[SimplexIndex]:
        return iter(self.indices)

    def __len__(self) -> int:
        return self.size


def enumerate_basis(k: int, N: int) -> BasisCatalog:
    """
    Enumerate the labels of H_|| in nested-sum order (n1 outermost).

    Args:
        k: Number of phases (>= 1)
        N: Number of resources (>= 0)

    Returns:
        BasisCatalog of size C(N+k, N)

    Raises:
        CapacityError: if the catalog would exceed HilbertConfig.MAX_DIMENSION
    """
    size = dimension(k, N)
    if size > HilbertConfig.MAX_DIMENSION:
        raise CapacityError(k, N, size, HilbertConfig.MAX_DIMENSION)
    return _catalog(k, N)


@lru_cache(maxsize=HilbertConfig.CATALOG_CACHE_SIZE)
def _catalog(k: int, N: int) -> BasisCatalog:
    rows = _simplex_rows(k, N)
    rows.setflags(write=False)
    return BasisCatalog(k=k, N=N, array=rows)


def log_multiplicity(N: int, index) -> float:
    """
    Natural log of the multinomial coefficient N! / (n0! n1! ... nk!).

    Args:
        N: Number of resources
        index: SimplexIndex or plain sequence (n1, ..., nk)

    Returns:
        ln of the multiplicity
    """
    entries = index.entries if isinstance(index, SimplexIndex) else tuple(index)
    label = SimplexIndex(tuple(int(v) for v in entries), N)
    counts = np.array(label.full(), dtype=float)
    return float(gammaln(N + 1) - gammaln(counts + 1).sum())


def multinomial_exact(N: int, index) -> int:
    """Exact integer multinomial coefficient (test path)."""
    entries = index.entries if isinstance(index, SimplexIndex) else tuple(index)
    label = SimplexIndex(tuple(int(v) for v in entries), N)
    result = math.factorial(N)
    for count in label.full():
        result //= math.factorial(count)
    return result
