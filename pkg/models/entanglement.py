"""
Geometric measure of entanglement for symmetric probes.

For a probe with real non-negative amplitudes the closest product state is
symmetric with zero relative phases, so the search runs over a single
probability vector p on the (k+1)-simplex:

    F(p) = ( sum_n c_n sqrt(multinomial(N, n)) prod_j p_j^(n_j/2) )^2
    E_G  = 1 - max_p F(p)
"""

import logging

import numpy as np
from scipy.optimize import minimize
from scipy.special import logsumexp, xlogy

from config import EntanglementConfig
from models.errors import DomainError, UnsupportedError
from models.hilbert import dimension, enumerate_basis
from models.probes import ProbeState
from models.results import EntanglementResult

logger = logging.getLogger(__name__)

_BLOCK_ELEMENTS = 2**20


class _OverlapFunction:
    """Vectorised F(p) for one probe."""

    def __init__(self, probe: ProbeState):
        catalog = probe.catalog
        weights = probe.amplitudes.real
        keep = weights > 0
        n0 = probe.N - catalog.array.sum(axis=1)
        self.counts = np.column_stack([n0, catalog.array])[keep].astype(float)
        self.log_prefactor = np.log(weights[keep]) + 0.5 * catalog.log_multiplicities[keep]
        self.evaluations = 0

    def __call__(self, probs: np.ndarray) -> np.ndarray:
        probs = np.atleast_2d(probs)
        self.evaluations += probs.shape[0]
        block = max(1, _BLOCK_ELEMENTS // max(1, self.counts.shape[0]))
        out = np.empty(probs.shape[0])
        for start in range(0, probs.shape[0], block):
            chunk = probs[start:start + block]
            exponents = 0.5 * xlogy(self.counts[None, :, :], chunk[:, None, :]).sum(axis=2)
            out[start:start + block] = np.exp(
                2.0 * logsumexp(self.log_prefactor[None, :] + exponents, axis=1)
            )
        return out


def _angles_to_probs(angles: np.ndarray) -> np.ndarray:
    probs = []
    remaining = 1.0
    for angle in angles:
        probs.append(remaining * np.cos(angle) ** 2)
        remaining *= np.sin(angle) ** 2
    probs.append(remaining)
    return np.array(probs)


def _probs_to_angles(probs: np.ndarray) -> np.ndarray:
    angles = []
    remaining = 1.0
    for p in probs[:-1]:
        ratio = p / remaining if remaining > 0 else 1.0
        angles.append(np.arccos(np.sqrt(np.clip(ratio, 0.0, 1.0))))
        remaining = max(remaining - p, 0.0)
    return np.array(angles)


def simplex_grid(k: int, resolution: int) -> np.ndarray:
    """Lattice points of the (k+1)-simplex with spacing 1/resolution, p0 first."""
    lattice = enumerate_basis(k, resolution).array / resolution
    return np.column_stack([1.0 - lattice.sum(axis=1), lattice])


def geometric_entanglement(probe: ProbeState, tol: float = EntanglementConfig.DEFAULT_TOL) -> EntanglementResult:
    """
    Geometric measure of entanglement of a probe with real non-negative amplitudes.

    Args:
        probe: ProbeState whose amplitudes are real and non-negative
        tol: Target accuracy on F during the local polish

    Returns:
        EntanglementResult with E_G, the maximising probability vector and
        the number of F evaluations

    Raises:
        UnsupportedError: if the amplitudes are complex or negative
    """
    if not probe.is_real_nonnegative():
        raise UnsupportedError(
            "geometric_entanglement needs real non-negative amplitudes; "
            "phases of the closest product state cannot be assumed zero otherwise"
        )

    overlap = _OverlapFunction(probe)
    if probe.N == 0:
        probs = np.full(probe.k + 1, 1.0 / (probe.k + 1))
        return EntanglementResult(eg=0.0, argmax_probs=tuple(probs), evaluations=0)

    grid = simplex_grid(probe.k, EntanglementConfig.GRID_POINTS_PER_DIM)
    values = overlap(grid)
    seed = grid[int(np.argmax(values))]

    polished = minimize(
        lambda angles: -overlap(_angles_to_probs(angles))[0],
        _probs_to_angles(seed),
        method="Nelder-Mead",
        options={"xatol": 1e-10, "fatol": tol, "maxiter": 4000 * probe.k},
    )
    best_probs = _angles_to_probs(polished.x)
    best_value = float(-polished.fun)
    if best_value < float(values.max()):
        best_probs, best_value = seed, float(values.max())

    eg = min(max(0.0, 1.0 - best_value), np.nextafter(1.0, 0.0))
    best_probs = best_probs / best_probs.sum()
    logger.debug("E_G for %r: %.12g at p=%s", probe, eg, best_probs)
    return EntanglementResult(
        eg=float(eg),
        argmax_probs=tuple(float(p) for p in best_probs),
        evaluations=overlap.evaluations,
    )


def eg_asymptotic(k: int, N: int) -> float:
    """
    Large-N approximation of E_G for the uniform (Holland-Burnett) probe.

    Args:
        k: 1 (qubits) or 2 (qutrits)
        N: Number of resources (>= 1)

    Returns:
        1 - sqrt(2 pi N)/(N+1) for k=1, 1 - 8 pi N/(3 sqrt(3) M) for k=2.
        Values below zero mean N is outside the asymptotic regime.
    """
    if N < 1:
        raise DomainError(f"Asymptotic E_G needs N >= 1, got N={N}")
    if k == 1:
        value = 1.0 - np.sqrt(2.0 * np.pi * N) / (N + 1)
    elif k == 2:
        value = 1.0 - 8.0 * np.pi * N / (3.0 * np.sqrt(3.0) * dimension(2, N))
    else:
        raise UnsupportedError(f"Asymptotic E_G is only known for k=1 and k=2, got k={k}")
    if value < 0:
        logger.warning("E_G asymptote for k=%d, N=%d is out of regime (%.6g)", k, N, value)
    return float(value)


def eg_asymptotic_in_regime(k: int, N: int) -> bool:
    """True when the asymptotic formula gives a meaningful value (>= 0)."""
    return eg_asymptotic(k, N) >= 0.0
