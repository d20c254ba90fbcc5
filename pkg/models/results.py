"""Result records returned by the estimation routines."""

from dataclasses import dataclass, field, asdict
from typing import Dict, List, Optional, Tuple


@dataclass(frozen=True)
class QuadratureResult:
    """Value of an integral with its absolute-error estimate."""

    value: float
    abs_error_estimate: float
    evaluations: int

    def shifted(self, offset: float) -> "QuadratureResult":
        """Return the same result with a constant added to the value."""
        return QuadratureResult(self.value + offset, self.abs_error_estimate, self.evaluations)

    def scaled(self, factor: float) -> "QuadratureResult":
        """Return the result multiplied by a constant."""
        return QuadratureResult(
            self.value * factor, self.abs_error_estimate * abs(factor), self.evaluations
        )

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass(frozen=True)
class EntanglementResult:
    """Geometric measure of entanglement and the closest symmetric product state."""

    eg: float
    argmax_probs: Tuple[float, ...]
    evaluations: int


@dataclass(frozen=True)
class OffsetConstant:
    """Additive constant of an asymptotic mutual-information law.

    Attributes:
        value: constant in bits
        exact: True when the value comes from a closed form
        provenance: short description of where the number comes from
    """

    value: float
    exact: bool
    provenance: str

    def __float__(self) -> float:
        return self.value


@dataclass(frozen=True)
class BoundsReport:
    """Heisenberg/SQL figures for one (k, N)."""

    k: int
    N: int
    sql: float
    hb: float
    hb_per_phase: float
    regime: str
    regime_asymptote: float
    advantage_per_phase: float

    def to_dict(self) -> Dict:
        return asdict(self)


@dataclass
class OptimizationRun:
    """Outcome of a multi-start probe search."""

    best_probe: object
    best_mi: float
    starts: int
    iterations: int
    converged: bool
    seed: int
    start_values: List[float] = field(default_factory=list)
    best_start: int = 0

    def summary(self) -> Dict:
        """JSON-friendly summary of the run."""
        return {
            "k": self.best_probe.k,
            "N": self.best_probe.N,
            "best_mi": self.best_mi,
            "starts": self.starts,
            "iterations": self.iterations,
            "converged": self.converged,
            "seed": self.seed,
            "best_start": self.best_start,
            "start_values": list(self.start_values),
            "amplitudes": [float(a) for a in self.best_probe.amplitudes.real],
        }


@dataclass
class CrossoverResult:
    """First N where the uniform probe beats the product probe."""

    k: int
    n_star: Optional[int]
    stable: bool
    rows: List[Dict] = field(default_factory=list)

    @property
    def found(self) -> bool:
        return self.n_star is not None
