"""
Adaptive Gauss-Kronrod cubature on boxes in one and two dimensions.

The box is first cut into a uniform mesh (callers choose the cell count so
that kernel grid points fall on cell edges), then the cells carrying the
largest error estimates are bisected until the summed estimate meets the
absolute tolerance or the evaluation budget runs out.

1-D cells use the 7/15-point Gauss-Kronrod pair, 2-D cells the tensor
product of the 3/7-point pair. Error estimates follow the QUADPACK
heuristic. The final sum uses math.fsum, so the result does not depend on
the order in which cells were processed.
"""

import logging
import math
from typing import List, Sequence

import numpy as np

from config import QuadratureConfig
from models.errors import BudgetExceededError, DomainError
from models.results import QuadratureResult

logger = logging.getLogger(__name__)

_EPS = np.finfo(float).eps

# 15-point Kronrod nodes on [-1, 1] with the embedded 7-point Gauss weights
_K15_NODES = np.array([
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
])
_K15_WEIGHTS = np.array([
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
])
_G7_WEIGHTS = np.array([
    0.0,
    0.129484966168869693270611432679082,
    0.0,
    0.279705391489276667901467771423780,
    0.0,
    0.381830050505118944950369775488975,
    0.0,
    0.417959183673469387755102040816327,
])

# 7-point Kronrod extension of the 3-point Gauss rule
_K7_NODES = np.array([
    0.960491268708020283423507092629080,
    0.774596669241483377035853079956480,
    0.434243749346802558002071502844628,
    0.000000000000000000000000000000000,
])
_K7_WEIGHTS = np.array([
    0.104656226026467265193823857192073,
    0.268488089868333440728569280666710,
    0.401397414775962222905051818618432,
    0.450916538658474142345110087045571,
])
_G3_WEIGHTS = np.array([0.0, 5.0 / 9.0, 0.0, 8.0 / 9.0])


def _symmetric(half_nodes: np.ndarray, half_weights: np.ndarray):
    nodes = np.concatenate([-half_nodes[:-1], half_nodes[::-1]])
    weights = np.concatenate([half_weights[:-1], half_weights[::-1]])
    return nodes, weights


class Rule:
    """A 1-D Kronrod rule with its embedded Gauss weights on [-1, 1]."""

    def __init__(self, half_nodes, kronrod_half, gauss_half):
        self.nodes, self.kronrod = _symmetric(half_nodes, kronrod_half)
        _, self.gauss = _symmetric(half_nodes, gauss_half)
        self.size = self.nodes.shape[0]
        # Nodes mapped to [0, 1]
        self.unit_nodes = 0.5 * (self.nodes + 1.0)


RULE_1D = Rule(_K15_NODES, _K15_WEIGHTS, _G7_WEIGHTS)
RULE_2D = Rule(_K7_NODES, _K7_WEIGHTS, _G3_WEIGHTS)


class Integrand:
    """
    Something that can be sampled on points, tensor grids or batches of cells.

    Subclasses implement points(); grid() and cells() default to it but may be
    overridden with faster separable evaluations.
    """

    dim = 1

    def points(self, x: np.ndarray) -> np.ndarray:
        """Values at x of shape (P, dim)."""
        raise NotImplementedError

    def grid(self, axes: Sequence[np.ndarray]) -> np.ndarray:
        """Values on the tensor product of the 1-D node arrays in axes."""
        mesh = np.meshgrid(*axes, indexing="ij")
        flat = np.stack([m.ravel() for m in mesh], axis=1)
        return self.points(flat).reshape(mesh[0].shape)

    def cells(self, nodes: Sequence[np.ndarray]) -> np.ndarray:
        """
        Values on per-cell tensor grids.

        Args:
            nodes: one (B, R) array per axis with the nodes of B cells

        Returns:
            (B, R) array in 1-D, (B, R, R) in 2-D
        """
        if self.dim == 1:
            batch, size = nodes[0].shape
            return self.points(nodes[0].reshape(-1, 1)).reshape(batch, size)
        batch, size = nodes[0].shape
        xs = np.broadcast_to(nodes[0][:, :, None], (batch, size, size))
        ys = np.broadcast_to(nodes[1][:, None, :], (batch, size, size))
        flat = np.stack([xs.ravel(), ys.ravel()], axis=1)
        return self.points(flat).reshape(batch, size, size)


class FunctionIntegrand(Integrand):
    """Wraps a vectorised callable f(points) -> values."""

    def __init__(self, func, dim: int = 1):
        self.func = func
        self.dim = dim

    def points(self, x: np.ndarray) -> np.ndarray:
        return np.asarray(self.func(x), dtype=float)


def _cell_estimates(values: np.ndarray, rule: Rule, volume: np.ndarray, dim: int):
    """Kronrod value and QUADPACK-style error estimate for a batch of cells."""
    if dim == 1:
        kronrod = values @ rule.kronrod
        gauss = values @ rule.gauss
        mean = kronrod / 2.0
        resasc = np.abs(values - mean[:, None]) @ rule.kronrod
        resabs = np.abs(values) @ rule.kronrod
        scale = volume / 2.0
    else:
        kronrod = np.einsum("brs,r,s->b", values, rule.kronrod, rule.kronrod)
        gauss = np.einsum("brs,r,s->b", values, rule.gauss, rule.gauss)
        mean = kronrod / 4.0
        resasc = np.einsum("brs,r,s->b", np.abs(values - mean[:, None, None]), rule.kronrod, rule.kronrod)
        resabs = np.einsum("brs,r,s->b", np.abs(values), rule.kronrod, rule.kronrod)
        scale = volume / 4.0

    estimate = kronrod * scale
    error = np.abs(kronrod - gauss) * scale
    resasc = resasc * scale
    resabs = resabs * scale
    scaled = np.where(
        resasc > 0,
        resasc * np.minimum(1.0, (200.0 * error / np.where(resasc > 0, resasc, 1.0)) ** 1.5),
        error,
    )
    floor = 50.0 * _EPS * resabs
    return estimate, np.maximum(scaled, floor)


class AdaptiveCubature:
    """
    Globally adaptive Gauss-Kronrod cubature over a box.

    Args:
        dim: 1 or 2
        tol: Absolute error target
        budget: Maximum number of integrand evaluations
        chunk_points: Evaluation block size
        max_level: Deepest allowed bisection level of a cell
    """

    def __init__(
        self,
        dim: int,
        tol: float = QuadratureConfig.DEFAULT_TOL,
        budget: int = QuadratureConfig.BUDGET_K1,
        chunk_points: int = QuadratureConfig.CHUNK_POINTS,
        max_level: int = QuadratureConfig.MAX_LEVEL,
    ):
        if dim not in (1, 2):
            raise DomainError(f"Cubature supports dim 1 and 2, got {dim}")
        if tol <= 0:
            raise DomainError(f"Tolerance must be positive, got {tol}")
        self.dim = dim
        self.tol = float(tol)
        self.budget = int(budget)
        self.chunk_points = int(chunk_points)
        self.max_level = int(max_level)
        self.rule = RULE_1D if dim == 1 else RULE_2D
        self.points_per_cell = self.rule.size**dim

    # ------------------------------------------------------------------ mesh

    def _initial_mesh(self, integrand: Integrand, lower: np.ndarray, width: np.ndarray, count: int):
        rule = self.rule
        volume = float(np.prod(width))
        if self.dim == 1:
            starts = lower[0] + width[0] * np.arange(count)
            nodes = starts[:, None] + width[0] * rule.unit_nodes[None, :]
            values = np.empty(count)
            errors = np.empty(count)
            block = max(1, self.chunk_points // rule.size)
            for first in range(0, count, block):
                cell_nodes = nodes[first:first + block]
                samples = integrand.cells([cell_nodes])
                est, err = _cell_estimates(samples, rule, np.full(len(cell_nodes), volume), 1)
                values[first:first + block] = est
                errors[first:first + block] = err
            return values, errors

        axes = []
        for axis in range(2):
            starts = lower[axis] + width[axis] * np.arange(count)
            axes.append((starts[:, None] + width[axis] * rule.unit_nodes[None, :]).ravel())
        values = np.empty((count, count))
        errors = np.empty((count, count))
        row_cells = max(1, self.chunk_points // (rule.size * axes[1].shape[0]))
        size = rule.size
        for first in range(0, count, row_cells):
            last = min(count, first + row_cells)
            block = integrand.grid([axes[0][first * size:last * size], axes[1]])
            block = block.reshape(last - first, size, count, size).transpose(0, 2, 1, 3)
            block = block.reshape(-1, size, size)
            est, err = _cell_estimates(block, rule, np.full(block.shape[0], volume), 2)
            values[first:last] = est.reshape(last - first, count)
            errors[first:last] = err.reshape(last - first, count)
        return values.ravel(), errors.ravel()

    def _initial_corners(self, flat: np.ndarray, lower: np.ndarray, width: np.ndarray, count: int):
        if self.dim == 1:
            return (lower[0] + width[0] * flat)[:, None]
        rows, cols = np.divmod(flat, count)
        return np.column_stack([lower[0] + width[0] * rows, lower[1] + width[1] * cols])

    def _evaluate_cells(self, integrand: Integrand, corners: np.ndarray, widths: np.ndarray):
        count = corners.shape[0]
        values = np.empty(count)
        errors = np.empty(count)
        block = max(1, self.chunk_points // self.points_per_cell)
        for first in range(0, count, block):
            c = corners[first:first + block]
            w = widths[first:first + block]
            nodes = [c[:, axis, None] + w[:, axis, None] * self.rule.unit_nodes[None, :] for axis in range(self.dim)]
            samples = integrand.cells(nodes)
            est, err = _cell_estimates(samples, self.rule, np.prod(w, axis=1), self.dim)
            values[first:first + block] = est
            errors[first:first + block] = err
        return values, errors

    def _split(self, corners: np.ndarray, widths: np.ndarray):
        half = widths / 2.0
        if self.dim == 1:
            offsets = np.array([[0.0], [1.0]])
        else:
            offsets = np.array([[0.0, 0.0], [0.0, 1.0], [1.0, 0.0], [1.0, 1.0]])
        children = corners[:, None, :] + offsets[None, :, :] * half[:, None, :]
        child_widths = np.repeat(half[:, None, :], offsets.shape[0], axis=1)
        return children.reshape(-1, self.dim), child_widths.reshape(-1, self.dim)

    # ------------------------------------------------------------- integrate

    def integrate(
        self,
        integrand: Integrand,
        lower: Sequence[float],
        upper: Sequence[float],
        cells_per_axis: int,
    ) -> QuadratureResult:
        """
        Integrate over the box [lower, upper).

        Args:
            integrand: Integrand of matching dimension
            lower: Lower corner, one entry per axis
            upper: Upper corner, one entry per axis
            cells_per_axis: Uniform initial mesh size along each axis

        Returns:
            QuadratureResult

        Raises:
            BudgetExceededError: when the budget runs out first; carries the partial result
        """
        lower = np.asarray(lower, dtype=float).reshape(self.dim)
        upper = np.asarray(upper, dtype=float).reshape(self.dim)
        count = max(1, int(cells_per_axis))
        width = (upper - lower) / count

        evaluations = count**self.dim * self.points_per_cell
        if evaluations > self.budget:
            raise BudgetExceededError(
                f"Initial mesh needs {evaluations} evaluations, budget is {self.budget}",
                QuadratureResult(float("nan"), float("inf"), 0),
            )

        mesh_values, mesh_errors = self._initial_mesh(integrand, lower, width, count)
        extra_corners = np.empty((0, self.dim))
        extra_widths = np.empty((0, self.dim))
        extra_values = np.empty(0)
        extra_errors = np.empty(0)
        rounds = 0

        while True:
            total_error = math.fsum(mesh_errors) + math.fsum(extra_errors)
            if total_error <= self.tol:
                break

            errors = np.concatenate([mesh_errors, extra_errors])
            order = np.argsort(-errors, kind="stable")
            cumulative = np.cumsum(errors[order])
            needed = total_error - 0.5 * self.tol
            n_split = int(min(len(order), np.searchsorted(cumulative, needed) + 1))
            chosen = order[:n_split]

            cost = n_split * (2**self.dim) * self.points_per_cell
            if evaluations + cost > self.budget:
                partial = QuadratureResult(
                    math.fsum(mesh_values) + math.fsum(extra_values), total_error, evaluations
                )
                raise BudgetExceededError(
                    f"Budget of {self.budget} evaluations exhausted with error estimate "
                    f"{total_error:.3g} > tol {self.tol:.3g}",
                    partial,
                )

            n_mesh = mesh_values.shape[0]
            from_mesh = chosen[chosen < n_mesh]
            from_extra = chosen[chosen >= n_mesh] - n_mesh

            parents_corners = np.vstack([
                self._initial_corners(from_mesh, lower, width, count),
                extra_corners[from_extra],
            ])
            parents_widths = np.vstack([
                np.tile(width, (from_mesh.shape[0], 1)),
                extra_widths[from_extra],
            ])
            if np.any(parents_widths.min(axis=1) < (upper - lower).min() * 2.0**-self.max_level):
                partial = QuadratureResult(
                    math.fsum(mesh_values) + math.fsum(extra_values), total_error, evaluations
                )
                raise BudgetExceededError(
                    f"Cells reached the maximum bisection level {self.max_level}", partial
                )

            mesh_values[from_mesh] = 0.0
            mesh_errors[from_mesh] = 0.0
            keep = np.ones(extra_values.shape[0], dtype=bool)
            keep[from_extra] = False

            child_corners, child_widths = self._split(parents_corners, parents_widths)
            child_values, child_errors = self._evaluate_cells(integrand, child_corners, child_widths)
            evaluations += cost

            extra_corners = np.vstack([extra_corners[keep], child_corners])
            extra_widths = np.vstack([extra_widths[keep], child_widths])
            extra_values = np.concatenate([extra_values[keep], child_values])
            extra_errors = np.concatenate([extra_errors[keep], child_errors])
            rounds += 1

        value = math.fsum(mesh_values) + math.fsum(extra_values)
        logger.debug(
            "Cubature dim=%d: value=%.15g err=%.3g evals=%d rounds=%d",
            self.dim, value, total_error, evaluations, rounds,
        )
        return QuadratureResult(float(value), float(total_error), int(evaluations))


def integrate(
    integrand: Integrand,
    lower: Sequence[float],
    upper: Sequence[float],
    cells_per_axis: int,
    tol: float = QuadratureConfig.DEFAULT_TOL,
    budget: int = QuadratureConfig.BUDGET_K1,
) -> QuadratureResult:
    """Convenience wrapper around AdaptiveCubature.integrate."""
    cubature = AdaptiveCubature(integrand.dim, tol=tol, budget=budget)
    return cubature.integrate(integrand, lower, upper, cells_per_axis)
