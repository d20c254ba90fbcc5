"""Parameters of one CLI invocation."""

from dataclasses import dataclass, field, asdict
from typing import Dict, List, Optional, Tuple

from config import QuadratureConfig, OptimizerConfig
from models.probes import PROBE_FAMILIES
from utils.export import CSV, JSON

SCAN_MI = "scan-mi"
BOUNDS = "bounds"
CROSSOVER = "crossover"
ENTANGLEMENT = "entanglement"
OPTIMIZE = "optimize"
DENSITY = "density"
COST = "cost"
ASYMPTOTES = "asymptotes"

COMMANDS = (SCAN_MI, BOUNDS, CROSSOVER, ENTANGLEMENT, OPTIMIZE, DENSITY, COST, ASYMPTOTES)

# Commands that integrate densities and so only exist for one or two phases
QUADRATURE_COMMANDS = (SCAN_MI, CROSSOVER, OPTIMIZE, COST, ASYMPTOTES)


@dataclass
class RunConfig:
    """
    Everything a command needs, collected from the flags.

    Attributes:
        command: Command name
        k: Number of phases
        n_values: Resource counts to process
        probes: Probe families
        tol: Quadrature tolerance
        out: Output path (standard output when None)
        fmt: "csv" or "json"; None picks the command's default
        seed: Seed of random starts
        radians: Angles given and printed in radians instead of turns
        budget: Integrand evaluation budget (None uses the default by k)
        cache: Sqlite results cache path
    """

    command: str
    k: int = 1
    n_values: List[int] = field(default_factory=list)
    probes: Tuple[str, ...] = PROBE_FAMILIES
    tol: float = QuadratureConfig.DEFAULT_TOL
    out: Optional[str] = None
    fmt: Optional[str] = None
    seed: int = OptimizerConfig.DEFAULT_SEED
    radians: bool = False
    budget: Optional[int] = None
    cache: Optional[str] = None

    @property
    def output_format(self) -> str:
        if self.fmt:
            return self.fmt
        return JSON if self.command == OPTIMIZE else CSV

    def to_dict(self) -> Dict:
        return asdict(self)
