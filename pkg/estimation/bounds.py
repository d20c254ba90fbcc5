"""Closed-form limits on the information a probe can carry, in bits."""

import math
from typing import Iterator, List, Tuple

import numpy as np
from scipy.special import gammaln

from config import BoundsConfig
from models.errors import DomainError, UnsupportedError
from models.results import BoundsReport, OffsetConstant

PARALLEL = "parallel"
SEQUENTIAL = "sequential"

REGIME_LARGE_N = "N>>k"
REGIME_COMPARABLE = "N~k"
REGIME_SMALL_N = "N<<k"

_LN2 = math.log(2.0)


def sql(N: int) -> float:
    """Standard quantum limit log2(N)/2."""
    if N < 1:
        raise DomainError(f"SQL needs N >= 1, got N={N}")
    return 0.5 * math.log2(N)


def hb(N: int) -> float:
    """Single-phase Heisenberg bound log2(N+1)."""
    if N < 0:
        raise DomainError(f"Resource count must be non-negative, got N={N}")
    return math.log2(N + 1)


def hb_k(k: int, N: int) -> float:
    """Multiphase Heisenberg bound log2 C(N+k, N), through log-gamma."""
    if k < 1 or N < 0:
        raise DomainError(f"hb_k needs k >= 1 and N >= 0, got k={k}, N={N}")
    return float((gammaln(N + k + 1) - gammaln(N + 1) - gammaln(k + 1)) / _LN2)


def _log2_factorial(k: int) -> float:
    return float(gammaln(k + 1) / _LN2)


def regime_asymptote(k: int, N: int) -> Tuple[str, float]:
    """
    Classify (k, N) by N/k and return the asymptotic bits per phase.

    Returns:
        (regime tag, bits per phase). In the comparable regime the plateau
        value 2 is used only for k == N; otherwise the exact hb_k / k.
    """
    if k < 1 or N < 1:
        raise DomainError(f"Regimes need k >= 1 and N >= 1, got k={k}, N={N}")
    ratio = N / k
    if ratio >= BoundsConfig.LARGE_RATIO:
        return REGIME_LARGE_N, math.log2(N) - _log2_factorial(k) / k
    if ratio <= BoundsConfig.SMALL_RATIO:
        return REGIME_SMALL_N, ratio * math.log2(math.e * (1.0 + k / N))
    if k == N:
        return REGIME_COMPARABLE, 2.0
    return REGIME_COMPARABLE, hb_k(k, N) / k


def multiphase_advantage(k: int) -> Tuple[float, float]:
    """
    Gain of joint over independent estimation at the Heisenberg bound.

    Returns:
        (total bits k log2 k - log2 k!, bits per phase); the per-phase value
        grows with k toward log2 e
    """
    if k < 1:
        raise DomainError(f"Phase count must be positive, got k={k}")
    total = k * math.log2(k) - _log2_factorial(k)
    if k <= 2:
        # exact: 0 and 1
        total = float(round(total))
    return total, total / k


def independent_bound(k: int, N: int) -> float:
    """Heisenberg bound of k independent single-phase runs with N/k resources each, large N."""
    if k < 1 or N < 1:
        raise DomainError(f"Need k >= 1 and N >= 1, got k={k}, N={N}")
    return k * (math.log2(N) - math.log2(k))


def asymptotic_offset(strategy: str, k: int) -> OffsetConstant:
    """
    Constant added to k*SQL(N) (parallel) or k*HB(N) (sequential) at large N.

    Raises:
        UnsupportedError: for any other strategy or k
    """
    if strategy == PARALLEL and k == 1:
        value = 0.5 * (math.log2(2.0 * math.pi) - 1.0 / _LN2)
        return OffsetConstant(value, True, "Gaussian limit of the single-phase product probe")
    if strategy == SEQUENTIAL and k == 1:
        value = -2.0 * (1.0 - (np.euler_gamma + _LN2 - 1.0) / _LN2)
        return OffsetConstant(value, True, "large-N limit of the Fejer kernel entropy")
    if strategy == PARALLEL and k == 2:
        value = math.log2(8.0 * math.sqrt(3.0) * math.pi / 9.0) - 1.0 / _LN2
        return OffsetConstant(value, True, "Gaussian limit of the two-phase product probe")
    if strategy == SEQUENTIAL and k == 2:
        return OffsetConstant(-3.7899, False, "numerical value at N=500, no closed form")
    raise UnsupportedError(f"No asymptotic offset for strategy={strategy!r}, k={k}")


def bounds_report(k: int, N: int) -> BoundsReport:
    """All bound figures for one (k, N)."""
    regime, asymptote = regime_asymptote(k, N)
    total_bits = hb_k(k, N)
    return BoundsReport(
        k=k,
        N=N,
        sql=sql(N),
        hb=total_bits,
        hb_per_phase=total_bits / k,
        regime=regime,
        regime_asymptote=asymptote,
        advantage_per_phase=multiphase_advantage(k)[1],
    )


def hb_sweep(
    fixed_k: Tuple[int, ...] = (2, 10),
    fixed_n: Tuple[int, ...] = (10,),
    upper: int = 1000,
) -> Iterator[BoundsReport]:
    """
    The three families of bound curves: fixed k over N, k = N, and fixed N over k.

    Args:
        fixed_k: phase counts swept over N in [1, upper]
        fixed_n: resource counts swept over k in [1, upper]
        upper: largest swept value
    """
    points = _log_spaced(upper)
    for k in fixed_k:
        for N in points:
            yield bounds_report(k, N)
    for N in points:
        yield bounds_report(N, N)
    for N in fixed_n:
        for k in points:
            yield bounds_report(k, N)


def _log_spaced(upper: int, per_decade: int = 10) -> List[int]:
    count = max(2, int(per_decade * math.log10(max(upper, 10))) + 1)
    values = np.unique(np.round(np.logspace(0, math.log10(upper), count)).astype(int))
    return [int(v) for v in values]
