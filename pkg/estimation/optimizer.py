"""
Probe search: maximise mutual information over real non-negative amplitudes.

Amplitudes are parametrised by an unconstrained vector x through
|x| / ||x||, so Nelder-Mead can run without constraints.
"""

import logging
from typing import List, Optional

import numpy as np
from scipy.optimize import minimize

from config import OptimizerConfig, QuadratureConfig
from models.errors import CapacityError, DomainError, UnsupportedError
from models.hilbert import dimension
from models.probes import ProbeState, equatorial_product, holland_burnett
from models.results import CrossoverResult, OptimizationRun
from estimation.information import mutual_information

logger = logging.getLogger(__name__)


def _probe_from_vector(k: int, N: int, vector: np.ndarray) -> ProbeState:
    return ProbeState.from_amplitudes(k, N, np.abs(vector))


class _Objective:
    """Negative mutual information of the probe |x|/||x||, counting calls."""

    def __init__(self, k: int, N: int, tol: float):
        self.k = k
        self.N = N
        self.tol = tol
        self.calls = 0

    def __call__(self, vector: np.ndarray) -> float:
        self.calls += 1
        if not np.any(vector):
            return 0.0
        probe = _probe_from_vector(self.k, self.N, vector)
        return -mutual_information(probe, self.tol).value


def _starting_points(k: int, N: int, starts: int, seed: int) -> List[np.ndarray]:
    rng = np.random.default_rng(seed)
    points = [
        equatorial_product(k, N).amplitudes.real.copy(),
        holland_burnett(k, N).amplitudes.real.copy(),
    ]
    size = points[0].shape[0]
    for _ in range(max(0, starts - 2)):
        draw = rng.random(size)
        points.append(draw / np.linalg.norm(draw))
    return points


def optimize_probe(
    k: int,
    N: int,
    tol: float = OptimizerConfig.OBJECTIVE_TOL,
    starts: int = OptimizerConfig.DEFAULT_STARTS,
    seed: int = OptimizerConfig.DEFAULT_SEED,
    max_iter: Optional[int] = None,
) -> OptimizationRun:
    """
    Multi-start Nelder-Mead search for the probe with the largest mutual information.

    The product and uniform probes are always the first two starts; the rest
    are drawn from default_rng(seed). The best final value wins, the lowest
    start index on ties.

    Args:
        k: 1 or 2
        N: Number of resources
        tol: Quadrature tolerance inside the objective
        starts: Number of starting points (at least 2 are used)
        seed: Seed for the random starts
        max_iter: Nelder-Mead iterations per start (default MAX_ITER_PER_DIM * size)

    Raises:
        UnsupportedError: for k outside {1, 2}
        CapacityError: when the amplitude vector has more than MAX_DIMENSION entries
    """
    if k not in (1, 2):
        raise UnsupportedError(f"Probe optimisation is implemented for k=1 and k=2, got k={k}")
    size = dimension(k, N)
    if size > OptimizerConfig.MAX_DIMENSION:
        raise CapacityError(k, N, size, OptimizerConfig.MAX_DIMENSION)

    starts = max(2, int(starts))
    if size == 1:
        probe = holland_burnett(k, N)
        return OptimizationRun(probe, 0.0, starts, 0, True, seed, [0.0] * starts, 0)

    objective = _Objective(k, N, tol)
    iterations_cap = max_iter or OptimizerConfig.MAX_ITER_PER_DIM * size

    best_vector, best_value, best_start = None, -np.inf, 0
    start_values, converged, iterations = [], True, 0
    for index, x0 in enumerate(_starting_points(k, N, starts, seed)):
        start_values.append(-objective(x0))
        result = minimize(
            objective,
            x0,
            method="Nelder-Mead",
            options={"maxiter": iterations_cap, "xatol": 1e-8, "fatol": tol},
        )
        iterations += int(result.nit)
        value = -float(result.fun)
        logger.debug("Start %d: %.12g -> %.12g bits (%d iterations)", index, start_values[-1], value, result.nit)
        if value > best_value:
            best_vector, best_value, best_start = result.x, value, index
            converged = bool(result.success)

    best_probe = _probe_from_vector(k, N, best_vector)
    logger.info("Best probe for k=%d, N=%d: %.12g bits from start %d", k, N, best_value, best_start)
    return OptimizationRun(
        best_probe=best_probe,
        best_mi=best_value,
        starts=starts,
        iterations=iterations,
        converged=converged,
        seed=seed,
        start_values=start_values,
        best_start=best_start,
    )


def local_optimal_probe(k: int, N: int) -> ProbeState:
    """The probe maximising the density at zero error: the uniform superposition."""
    return holland_burnett(k, N)


def crossover(
    k: int,
    N_max: int,
    tol: float = 1e-7,
    N_min: int = 1,
    budget: Optional[int] = None,
) -> CrossoverResult:
    """
    Smallest N where the uniform probe carries more information than the product probe.

    Args:
        k: 1 or 2
        N_max: Largest N examined (>= 2)
        tol: Margin and quadrature tolerance
        N_min: First N examined
        budget: Integrand evaluations allowed per quadrature (defaults by k)

    Returns:
        CrossoverResult with n_star (None when not found), whether the ordering
        holds for every larger N up to N_max, and one row per N

    Raises:
        BudgetExceededError: when a quadrature runs out of budget
    """
    if k not in (1, 2):
        raise UnsupportedError(f"Crossover is implemented for k=1 and k=2, got k={k}")
    if N_max < 2:
        raise DomainError(f"Crossover needs N_max >= 2, got {N_max}")
    quadrature_tol = min(tol, QuadratureConfig.DEFAULT_TOL)

    rows = []
    for N in range(N_min, N_max + 1):
        product = mutual_information(equatorial_product(k, N), quadrature_tol, budget).value
        uniform = mutual_information(holland_burnett(k, N), quadrature_tol, budget).value
        rows.append({
            "N": N,
            "mi_product": product,
            "mi_hb": uniform,
            "hb_ahead": uniform > product + tol,
        })

    n_star = next((row["N"] for row in rows if row["hb_ahead"]), None)
    stable = n_star is not None and all(row["hb_ahead"] for row in rows if row["N"] >= n_star)
    if n_star is None:
        logger.info("No crossover for k=%d up to N=%d", k, N_max)
    return CrossoverResult(k=k, n_star=n_star, stable=stable, rows=rows)
