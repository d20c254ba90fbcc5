"""
Mutual information, conditional entropy and Bayesian costs.

Covariance makes the conditional density depend only on gamma = estimate -
phase, so the double average over phase and estimate collapses to one
integral over the unit box:

    I = integral g(gamma) log2 g(gamma) dgamma

The discrete route averages over phases in one grid cell
[0, 1/(N+1))^k instead and sums the full p(m | phi) table; both give the
same number, which makes it a cross-check.
"""

import logging
from dataclasses import dataclass
from typing import Callable, Optional, Tuple

import numpy as np
from scipy.special import xlogy

from config import QuadratureConfig
from models.errors import BudgetExceededError, DomainError, UnsupportedError
from models.probes import ProbeState, create_probe
from models.results import QuadratureResult
from estimation.channel import AUTO, ReducedDensity, discrete_distribution
from utils.quadrature import AdaptiveCubature, Integrand

logger = logging.getLogger(__name__)

_LN2 = np.log(2.0)

HOLEVO_SINE = "holevo-sine"
SURPRISE = "surprise"
CUSTOM = "custom"

CONTINUOUS = "continuous"
DISCRETE = "discrete"


def default_budget(k: int) -> int:
    return QuadratureConfig.BUDGET_K1 if k == 1 else QuadratureConfig.BUDGET_K2


def _entropy_terms(values: np.ndarray) -> np.ndarray:
    """p log2 p with 0 log 0 = 0."""
    return xlogy(values, values) / _LN2


def _check_quadrature_k(probe: ProbeState):
    if probe.k not in (1, 2):
        raise UnsupportedError(f"Quadrature is only available for k=1 and k=2, got k={probe.k}")


class _EntropyIntegrand(Integrand):
    """g log2 g on top of a ReducedDensity, keeping its fast grid paths."""

    def __init__(self, density: ReducedDensity):
        self.density = density
        self.dim = density.dim

    def points(self, x):
        return _entropy_terms(self.density.points(x))

    def grid(self, axes):
        return _entropy_terms(self.density.grid(axes))

    def cells(self, nodes):
        return _entropy_terms(self.density.cells(nodes))


class _DiscreteIntegrand(Integrand):
    """phi -> sum_m F(p(m | phi), m) over the full estimate table."""

    def __init__(self, probe: ProbeState, reducer: Callable[[np.ndarray, np.ndarray], np.ndarray]):
        self.probe = probe
        self.dim = probe.k
        self.reducer = reducer
        table_size = (probe.N + 1) ** probe.k
        self.block = max(1, QuadratureConfig.CHUNK_POINTS // (4 * table_size))

    def points(self, x):
        out = np.empty(x.shape[0])
        for first in range(0, x.shape[0], self.block):
            phases = x[first:first + self.block]
            tables = discrete_distribution(self.probe, phases)
            out[first:first + self.block] = self.reducer(tables, phases)
        return out


def _run_cubature(integrand: Integrand, upper: float, cells: int, tol: float, budget: Optional[int]):
    dim = integrand.dim
    cubature = AdaptiveCubature(dim, tol=tol, budget=budget or default_budget(dim))
    return cubature.integrate(integrand, [0.0] * dim, [upper] * dim, cells)


def _mapped(result_fn, scale: float, offset: float):
    """Run result_fn and map value -> offset + scale * value, budget failures included."""
    try:
        result = result_fn()
    except BudgetExceededError as exc:
        partial = exc.partial.scaled(scale).shifted(offset)
        raise BudgetExceededError(str(exc), partial) from exc
    return result.scaled(scale).shifted(offset)


def mutual_information(
    probe: ProbeState,
    tol: float = QuadratureConfig.DEFAULT_TOL,
    budget: Optional[int] = None,
    mode: str = AUTO,
) -> QuadratureResult:
    """
    Mutual information in bits between phases and their estimate.

    The initial mesh has CELLS_PER_GRID_STEP cells between neighbouring
    kernel grid points j/(N+1) along every axis.

    Args:
        probe: ProbeState with k in {1, 2}
        tol: Absolute error target in bits
        budget: Integrand evaluations allowed (defaults by k)
        mode: Density evaluation mode, see ReducedDensity

    Returns:
        QuadratureResult

    Raises:
        UnsupportedError: for k >= 3
        BudgetExceededError: when tol is not reached within budget
    """
    _check_quadrature_k(probe)
    if probe.N == 0:
        return QuadratureResult(0.0, 0.0, 0)
    integrand = _EntropyIntegrand(ReducedDensity(probe, mode=mode))
    cells = QuadratureConfig.CELLS_PER_GRID_STEP * (probe.N + 1)
    result = _run_cubature(integrand, 1.0, cells, tol, budget)
    logger.info("I(%r) = %.12g bits (err %.2g, %d evals)", probe, result.value,
                result.abs_error_estimate, result.evaluations)
    return result


def mutual_information_discrete(
    probe: ProbeState,
    phase_grid_tol: float = QuadratureConfig.DEFAULT_TOL,
    budget: Optional[int] = None,
) -> QuadratureResult:
    """
    Mutual information between phases and grid estimates, H(m) - H(m | phi).

    The marginal of m is uniform, so H(m) = k log2(N+1); the conditional
    entropy is averaged over one grid cell of phases.

    Args:
        probe: ProbeState with k in {1, 2}
        phase_grid_tol: Absolute error target in bits
        budget: Integrand evaluations allowed (defaults by k)
    """
    _check_quadrature_k(probe)
    if probe.N == 0:
        return QuadratureResult(0.0, 0.0, 0)
    k, N = probe.k, probe.N
    volume_factor = float((N + 1) ** k)
    integrand = _DiscreteIntegrand(
        probe, lambda tables, _: _entropy_terms(tables).reshape(tables.shape[0], -1).sum(axis=1)
    )
    return _mapped(
        lambda: _run_cubature(
            integrand, 1.0 / (N + 1), QuadratureConfig.DISCRETE_CELLS_PER_AXIS,
            phase_grid_tol / volume_factor, budget,
        ),
        volume_factor,
        k * np.log2(N + 1),
    )


# ------------------------------------------------------------------- costs

@dataclass(frozen=True)
class CostFunction:
    """
    Cost of an estimation error.

    Attributes:
        kind: "holevo-sine", "surprise" or "custom"
        evaluator: for custom costs, a vectorised function of gamma (turns)
        uses_density: True when the evaluator also takes the density value
    """

    kind: str
    evaluator: Optional[Callable] = None
    uses_density: bool = False

    @classmethod
    def holevo_sine(cls) -> "CostFunction":
        """4 sin^2(pi gamma), the Holevo-class cost in turns."""
        return cls(HOLEVO_SINE)

    @classmethod
    def surprise(cls) -> "CostFunction":
        """-log2 of the probability the estimate was given."""
        return cls(SURPRISE, uses_density=True)

    @classmethod
    def custom(cls, evaluator: Callable, uses_density: bool = False) -> "CostFunction":
        return cls(CUSTOM, evaluator, uses_density)

    def __post_init__(self):
        if self.kind not in (HOLEVO_SINE, SURPRISE, CUSTOM):
            raise UnsupportedError(f"Unknown cost kind {self.kind!r}")
        if self.kind == CUSTOM and self.evaluator is None:
            raise DomainError("A custom cost needs an evaluator")

    @property
    def depends_on_distribution(self) -> bool:
        return self.kind == SURPRISE or self.uses_density

    def weighted(self, gamma: np.ndarray, probabilities: np.ndarray) -> np.ndarray:
        """probabilities * cost, elementwise, with 0 * log 0 = 0 for the surprise."""
        if self.kind == HOLEVO_SINE:
            return probabilities * 4.0 * np.sin(np.pi * gamma) ** 2
        if self.kind == SURPRISE:
            return -_entropy_terms(probabilities)
        if self.uses_density:
            return probabilities * self.evaluator(gamma, probabilities)
        return probabilities * self.evaluator(gamma)


class _CostIntegrand(Integrand):
    dim = 1

    def __init__(self, density: ReducedDensity, cost: CostFunction):
        self.density = density
        self.cost = cost

    def points(self, x):
        return self.cost.weighted(x[:, 0], self.density.points(x))


def bayes_cost(
    probe: ProbeState,
    cost: CostFunction,
    mode: str = CONTINUOUS,
    tol: float = QuadratureConfig.DEFAULT_TOL,
    budget: Optional[int] = None,
) -> QuadratureResult:
    """
    Average cost over phases and estimates for a single phase.

    Args:
        probe: ProbeState with k = 1
        cost: CostFunction
        mode: "continuous" (estimate on the circle) or "discrete" (grid estimates)
        tol: Absolute error target
        budget: Integrand evaluations allowed

    Returns:
        QuadratureResult
    """
    if probe.k != 1:
        raise UnsupportedError(f"Bayesian cost is implemented for a single phase, got k={probe.k}")
    N = probe.N
    if mode == CONTINUOUS:
        integrand = _CostIntegrand(ReducedDensity(probe), cost)
        cells = QuadratureConfig.CELLS_PER_GRID_STEP * (N + 1)
        return _run_cubature(integrand, 1.0, cells, tol, budget)
    if mode != DISCRETE:
        raise UnsupportedError(f"Unknown cost mode {mode!r}; use 'continuous' or 'discrete'")

    grid = np.arange(N + 1) / (N + 1)

    def reducer(tables, phases):
        gamma = grid[None, :] - phases[:, 0:1]
        return cost.weighted(gamma, tables).sum(axis=1)

    integrand = _DiscreteIntegrand(probe, reducer)
    return _mapped(
        lambda: _run_cubature(
            integrand, 1.0 / (N + 1), QuadratureConfig.DISCRETE_CELLS_PER_AXIS, tol / (N + 1), budget
        ),
        float(N + 1),
        0.0,
    )


def compare_cost_modes(
    probe: ProbeState,
    cost: CostFunction,
    tol: float = QuadratureConfig.DEFAULT_TOL,
) -> Tuple[QuadratureResult, QuadratureResult]:
    """
    The continuous and discrete Bayesian costs side by side.

    They coincide for costs that depend only on the estimation error.

    Raises:
        UnsupportedError: for costs built from the distribution itself
    """
    if cost.depends_on_distribution:
        raise UnsupportedError(
            f"The {cost.kind} cost depends on the conditional distribution itself, so the "
            "continuous and discrete estimators are not comparable: discretising changes the "
            "distribution and with it the cost"
        )
    return (
        bayes_cost(probe, cost, CONTINUOUS, tol),
        bayes_cost(probe, cost, DISCRETE, tol),
    )


def conditional_entropy(
    probe: ProbeState,
    tol: float = QuadratureConfig.DEFAULT_TOL,
    mode: str = CONTINUOUS,
) -> QuadratureResult:
    """
    Entropy of the estimate given the phases, in bits.

    The continuous value is a differential entropy, -I; the discrete value is
    k log2(N+1) - I.
    """
    if mode == CONTINUOUS:
        return mutual_information(probe, tol).scaled(-1.0)
    if mode == DISCRETE:
        info = mutual_information_discrete(probe, tol)
        return info.scaled(-1.0).shifted(probe.k * np.log2(probe.N + 1))
    raise UnsupportedError(f"Unknown entropy mode {mode!r}")


def independent_mi(
    k: int,
    N: int,
    family: str,
    tol: float = QuadratureConfig.DEFAULT_TOL,
    shift: int = 0,
) -> QuadratureResult:
    """
    Information of k independent single-phase runs sharing the resources.

    Each run gets (N + shift) / k resources; shift lets the comparison use
    (N+1)/2 or (N+2)/2 when N is odd.

    Raises:
        DomainError: when (N + shift) is not divisible by k
    """
    if (N + shift) % k != 0:
        raise DomainError(f"N + shift = {N + shift} does not split evenly over k={k} phases")
    single = mutual_information(create_probe(family, 1, (N + shift) // k), tol)
    return single.scaled(float(k))
