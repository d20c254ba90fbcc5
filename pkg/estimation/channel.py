"""
Conditional densities induced by the covariant phase measurement.

Every phase is measured in turns. For a probe with amplitudes c_n the
density of the estimator error gamma is

    g(gamma) = | sum_n c_n exp(2 pi i n . gamma) |^2

and integrates to one over the unit box. The uniform probe has closed forms
for k=1 (Fejer kernel) and k=2; every other probe goes through a direct sum.
"""

import logging
from typing import Sequence

import numpy as np

from config import ChannelConfig, QuadratureConfig
from models.errors import DomainError, UnsupportedError
from models.hilbert import dimension
from models.probes import HOLLAND_BURNETT, ProbeState
from utils.quadrature import Integrand

logger = logging.getLogger(__name__)

AUTO = "auto"
DIRECT_SUM = "direct-sum"
CLOSED_FORM_FEJER = "closed-form-fejer"
CLOSED_FORM_DOUBLE = "closed-form-double"

EVALUATION_MODES = (DIRECT_SUM, CLOSED_FORM_FEJER, CLOSED_FORM_DOUBLE)

_TWO_PI_I = 2j * np.pi


def _wrap(gamma):
    """Reduce turns to [-1/2, 1/2]."""
    gamma = np.asarray(gamma, dtype=float)
    return gamma - np.round(gamma)


def _scalar_or_array(values: np.ndarray, like):
    if np.ndim(like) == 0:
        return float(values.reshape(()))
    return values


# ---------------------------------------------------------------- direct sums

def _line_sum(N: int, gamma: np.ndarray) -> np.ndarray:
    """|sum_{n=0}^N exp(2 pi i n gamma)|^2 / (N+1), chunked."""
    out = np.empty(gamma.shape[0])
    n = np.arange(N + 1)
    block = ChannelConfig.DIRECT_SUM_CHUNK
    for first in range(0, gamma.shape[0], block):
        phases = np.exp(_TWO_PI_I * np.outer(gamma[first:first + block], n))
        out[first:first + block] = np.abs(phases.sum(axis=1)) ** 2
    return out / (N + 1)


def _triangle_sum(N: int, x: np.ndarray, y: np.ndarray) -> np.ndarray:
    """
    |sum_{n1+n2<=N} exp(2 pi i (n1 x + n2 y))|^2 / dimension(2, N).

    The inner sum over n2 is a running partial sum, so each point costs O(N).
    """
    out = np.empty(x.shape[0])
    n = np.arange(N + 1)
    block = ChannelConfig.DIRECT_SUM_CHUNK
    for first in range(0, x.shape[0], block):
        a = np.exp(_TWO_PI_I * np.outer(x[first:first + block], n))
        partial = np.cumsum(np.exp(_TWO_PI_I * np.outer(y[first:first + block], n)), axis=1)
        out[first:first + block] = np.abs(np.sum(a * partial[:, ::-1], axis=1)) ** 2
    return out / dimension(2, N)


# --------------------------------------------------------------- closed forms

def fejer_density(N: int, gamma):
    """
    Density of the single-phase uniform probe (Fejer kernel).

    Args:
        N: Number of resources (>= 0)
        gamma: Turns, scalar or array

    Returns:
        sin^2((N+1) pi gamma) / ((N+1) sin^2(pi gamma)), with the direct sum
        used where |sin(pi gamma)| < FEJER_SINGULAR_THRESHOLD
    """
    if N < 0:
        raise DomainError(f"Resource count must be non-negative, got N={N}")
    wrapped = np.atleast_1d(_wrap(gamma))
    flat = wrapped.ravel()
    s = np.sin(np.pi * flat)
    singular = np.abs(s) < ChannelConfig.FEJER_SINGULAR_THRESHOLD
    out = np.empty_like(flat)
    regular = ~singular
    out[regular] = np.sin((N + 1) * np.pi * flat[regular]) ** 2 / ((N + 1) * s[regular] ** 2)
    if singular.any():
        out[singular] = _line_sum(N, flat[singular])
    return _scalar_or_array(out.reshape(wrapped.shape), gamma)


def _double_closed_form(N: int, x: np.ndarray, y: np.ndarray, printed: bool = False) -> np.ndarray:
    sx = np.sin(np.pi * x)
    sy = np.sin(np.pi * y)
    sxy = np.sin(np.pi * (x - y))
    order = 2 * N + 3
    first_cross = np.sin(np.pi * order * x) if printed else np.cos(np.pi * order * x)
    numerator = (
        sx**2 + sy**2 + sxy**2
        - 2.0 * sx * sy * np.cos(np.pi * order * (x - y))
        + 2.0 * sxy * (sy * first_cross - sx * np.cos(np.pi * order * y))
    )
    denominator = 8.0 * (N + 1) * (N + 2) * sx**2 * sy**2 * sxy**2
    return numerator / denominator


def double_singular_threshold(N: int) -> float:
    """Smallest |sine| at which the two-phase closed form is still used."""
    return ChannelConfig.DOUBLE_SINGULAR_SCALE / (N + 1)


def double_hb_density(N: int, dphi, dtheta):
    """
    Density of the two-phase uniform probe in closed form.

    Near the removable singularities (any of |S_x|, |S_y|, |S_(x-y)| below
    double_singular_threshold(N)) the direct double sum is used instead.

    Args:
        N: Number of resources (>= 0)
        dphi: First phase offset in turns
        dtheta: Second phase offset in turns

    Returns:
        Density value(s), broadcast over the inputs
    """
    if N < 0:
        raise DomainError(f"Resource count must be non-negative, got N={N}")
    x, y = np.broadcast_arrays(np.atleast_1d(_wrap(dphi)), np.atleast_1d(_wrap(dtheta)))
    shape = x.shape
    x = x.ravel()
    y = y.ravel()
    threshold = double_singular_threshold(N)
    smallest = np.minimum(
        np.minimum(np.abs(np.sin(np.pi * x)), np.abs(np.sin(np.pi * y))),
        np.abs(np.sin(np.pi * (x - y))),
    )
    singular = smallest < threshold
    out = np.empty_like(x)
    regular = ~singular
    out[regular] = _double_closed_form(N, x[regular], y[regular])
    if singular.any():
        out[singular] = _triangle_sum(N, x[singular], y[singular])
    out = np.maximum(out, 0.0).reshape(shape)
    if np.ndim(dphi) == 0 and np.ndim(dtheta) == 0:
        return float(out.reshape(()))
    return out


def printed_double_hb_density(N: int, dphi, dtheta):
    """
    The two-phase closed form with a sine in place of the cosine multiplying S_dtheta.

    This is the typeset variant of the expression, scaled to a density. It
    is only used to measure how far it is from the direct sum.
    """
    x, y = np.broadcast_arrays(np.atleast_1d(_wrap(dphi)), np.atleast_1d(_wrap(dtheta)))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = _double_closed_form(N, x, y, printed=True)
    if np.ndim(dphi) == 0 and np.ndim(dtheta) == 0:
        return float(out.reshape(()))
    return out


def closed_form_defect(N: int, dphi, dtheta):
    """Relative discrepancy of the typeset two-phase form against the direct double sum."""
    x, y = np.broadcast_arrays(np.atleast_1d(_wrap(dphi)), np.atleast_1d(_wrap(dtheta)))
    direct = _triangle_sum(N, x.ravel(), y.ravel()).reshape(x.shape)
    printed = printed_double_hb_density(N, x, y)
    with np.errstate(divide="ignore", invalid="ignore"):
        defect = np.abs(printed - direct) / direct
    if np.ndim(dphi) == 0 and np.ndim(dtheta) == 0:
        return float(defect.reshape(()))
    return defect


# ------------------------------------------------------------------ evaluator

def _resolve_mode(probe: ProbeState, mode: str) -> str:
    if mode == AUTO:
        if probe.family == HOLLAND_BURNETT and probe.k == 1:
            return CLOSED_FORM_FEJER
        if probe.family == HOLLAND_BURNETT and probe.k == 2:
            return CLOSED_FORM_DOUBLE
        return DIRECT_SUM
    if mode not in EVALUATION_MODES:
        raise UnsupportedError(f"Unknown evaluation mode {mode!r}; choose from {EVALUATION_MODES}")
    if mode == CLOSED_FORM_FEJER and not (probe.family == HOLLAND_BURNETT and probe.k == 1):
        raise UnsupportedError("The Fejer closed form only describes the single-phase uniform probe")
    if mode == CLOSED_FORM_DOUBLE and not (probe.family == HOLLAND_BURNETT and probe.k == 2):
        raise UnsupportedError("The two-phase closed form only describes the two-phase uniform probe")
    return mode


class ReducedDensity(Integrand):
    """
    Evaluator of g(gamma) for one probe.

    Args:
        probe: ProbeState
        mode: "auto", "direct-sum", "closed-form-fejer" or "closed-form-double"
        cutoff: Relative amplitude below which terms are skipped in the
            fast direct sums (0 keeps every term)
    """

    def __init__(self, probe: ProbeState, mode: str = AUTO, cutoff: float = ChannelConfig.AMPLITUDE_CUTOFF):
        self.probe = probe
        self.dim = probe.k
        self.mode = _resolve_mode(probe, mode)
        self.cutoff = float(cutoff)
        self._axis_cache = (None, None)
        if self.mode == DIRECT_SUM:
            self._prepare_direct_sum()

    def _prepare_direct_sum(self):
        amplitudes = self.probe.amplitudes
        magnitudes = np.abs(amplitudes)
        keep = magnitudes > self.cutoff * magnitudes.max()
        labels = self.probe.catalog.array[keep]
        self._labels = labels.astype(float)
        self._weights = amplitudes[keep]
        low = labels.min(axis=0)
        high = labels.max(axis=0)
        self._axes = [np.arange(lo, hi + 1) for lo, hi in zip(low, high)]
        if self.probe.k <= 2:
            box = tuple(slice(lo, hi + 1) for lo, hi in zip(low, high))
            self._block = self.probe.tensor_grid()[box]
        logger.debug(
            "Direct sum for %r keeps %d of %d amplitudes", self.probe, keep.sum(), keep.shape[0]
        )

    def __repr__(self):
        return f"ReducedDensity({self.probe!r}, mode={self.mode!r})"

    # -------------------------------------------------------------- points

    def __call__(self, gamma):
        """Density at one point or an array of points (last axis k when k > 1)."""
        arr = np.asarray(gamma, dtype=float)
        if self.dim == 1:
            values = self.points(arr.reshape(-1, 1)).reshape(arr.shape)
            return _scalar_or_array(values, arr)
        if arr.shape[-1] != self.dim:
            raise DomainError(f"Expected points with {self.dim} components, got shape {arr.shape}")
        values = self.points(arr.reshape(-1, self.dim)).reshape(arr.shape[:-1])
        if arr.ndim == 1:
            return float(values)
        return values

    def points(self, x: np.ndarray) -> np.ndarray:
        x = _wrap(x)
        N = self.probe.N
        if self.mode == CLOSED_FORM_FEJER:
            return fejer_density(N, x[:, 0])
        if self.mode == CLOSED_FORM_DOUBLE:
            return double_hb_density(N, x[:, 0], x[:, 1])
        if self.dim == 1:
            return self._horner(x[:, 0])
        return self._exponential_sum(x)

    def _horner(self, gamma: np.ndarray) -> np.ndarray:
        coefficients = self._block[::-1]
        z = np.exp(_TWO_PI_I * gamma)
        return np.abs(np.polyval(coefficients, z)) ** 2

    def _exponential_sum(self, x: np.ndarray) -> np.ndarray:
        out = np.empty(x.shape[0])
        rows = max(1, QuadratureConfig.CHUNK_POINTS // max(1, self._labels.shape[0]))
        for first in range(0, x.shape[0], rows):
            phases = np.exp(_TWO_PI_I * (x[first:first + rows] @ self._labels.T))
            out[first:first + rows] = np.abs(phases @ self._weights) ** 2
        return out

    # --------------------------------------------------------- tensor grids

    def _axis_exponentials(self, nodes: np.ndarray) -> np.ndarray:
        cached_nodes, cached = self._axis_cache
        if cached_nodes is nodes:
            return cached
        table = np.exp(_TWO_PI_I * np.outer(_wrap(nodes), self._axes[1]))
        self._axis_cache = (nodes, table)
        return table

    def grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        if self.dim != 2:
            return super().grid(axes)
        xs, ys = axes
        N = self.probe.N
        if self.mode == CLOSED_FORM_DOUBLE:
            return double_hb_density(N, xs[:, None], ys[None, :])
        # Separable sum: S = E(x) C E(y)^T
        left = np.exp(_TWO_PI_I * np.outer(_wrap(xs), self._axes[0])) @ self._block
        return np.abs(left @ self._axis_exponentials(ys).T) ** 2

    def cells(self, nodes: Sequence[np.ndarray]) -> np.ndarray:
        if self.dim != 2:
            return super().cells(nodes)
        xn, yn = nodes
        N = self.probe.N
        if self.mode == CLOSED_FORM_DOUBLE:
            return double_hb_density(N, xn[:, :, None], yn[:, None, :])
        left = np.exp(_TWO_PI_I * _wrap(xn)[:, :, None] * self._axes[0]) @ self._block
        right = np.exp(_TWO_PI_I * _wrap(yn)[:, :, None] * self._axes[1])
        return np.abs(left @ right.transpose(0, 2, 1)) ** 2


def density(probe: ProbeState, gamma):
    """
    g(gamma) = |sum_n c_n exp(2 pi i n . gamma)|^2 by direct summation over every amplitude.

    Args:
        probe: ProbeState
        gamma: Point in turns (scalar for k=1, k-vector otherwise) or array of points

    Returns:
        Non-negative density value(s)
    """
    return ReducedDensity(probe, mode=DIRECT_SUM, cutoff=0.0)(gamma)


# --------------------------------------------------------- discrete estimator

def discrete_prob(probe: ProbeState, m: Sequence[int], phi) -> float:
    """
    Probability of the grid estimate m/(N+1) given the phases phi.

    Args:
        probe: ProbeState
        m: k integers in [0, N]
        phi: k phases in turns

    Raises:
        DomainError: if an entry of m is outside [0, N]
    """
    N, k = probe.N, probe.k
    m = np.atleast_1d(np.asarray(m))
    if m.shape != (k,) or not np.issubdtype(m.dtype, np.integer):
        raise DomainError(f"Estimate index must be {k} integers, got {m.tolist()}")
    if np.any(m < 0) or np.any(m > N):
        raise DomainError(f"Estimate index {m.tolist()} outside [0, {N}]")
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    gamma = m / (N + 1) - phi
    value = density(probe, gamma if k > 1 else gamma[0])
    return float(value) / (N + 1) ** k


def discrete_distribution(probe: ProbeState, phi) -> np.ndarray:
    """
    The whole table p(m | phi) for every m in [0, N]^k via one inverse DFT.

    Args:
        probe: ProbeState
        phi: k phases in turns, or an array of shape (P, k)

    Returns:
        Array of shape (N+1,)*k, or (P,) + (N+1,)*k for a batch of phases
    """
    N, k = probe.N, probe.k
    phi = np.asarray(phi, dtype=float)
    single = phi.ndim <= 1
    phi = phi.reshape(-1, k)
    n = np.arange(N + 1)

    weighted = np.broadcast_to(probe.tensor_grid(), (phi.shape[0],) + (N + 1,) * k).copy()
    for axis in range(k):
        shape = [phi.shape[0]] + [1] * k
        shape[axis + 1] = N + 1
        weighted *= np.exp(-_TWO_PI_I * np.outer(phi[:, axis], n)).reshape(shape)

    amplitudes = np.fft.ifftn(weighted, axes=tuple(range(1, k + 1)), norm="forward")
    table = np.abs(amplitudes) ** 2 / (N + 1) ** k
    return table[0] if single else table


def gaussian_approx(k: int, N: int, delta):
    """
    Gaussian approximant of the product-probe discrete distribution.

    Args:
        k: 1 or 2
        N: Number of resources (>= 1)
        delta: Offset phi - m/(N+1) in turns (scalar for k=1, pair for k=2)

    Returns:
        Approximate probability
    """
    if N < 1:
        raise DomainError(f"Gaussian approximation needs N >= 1, got N={N}")
    delta = np.asarray(delta, dtype=float)
    if k == 1:
        values = np.sqrt(2.0 * np.pi * N) / (N + 1) * np.exp(-2.0 * N * np.pi**2 * delta**2)
    elif k == 2:
        d1, d2 = delta[..., 0], delta[..., 1]
        quadratic = d1**2 + d2**2 - d1 * d2
        values = (8.0 * np.sqrt(3.0) / 9.0) * np.pi * N / (N + 1) ** 2 * np.exp(
            -(16.0 / 9.0) * N * np.pi**2 * quadratic
        )
    else:
        raise UnsupportedError(f"Gaussian approximation is only known for k=1 and k=2, got k={k}")
    if np.ndim(values) == 0:
        return float(values)
    return values
