"""Validation of CLI run configurations before any computation."""

from typing import Tuple

from models.probes import PROBE_FAMILIES
from utils.export import FORMATS, JSON


class RunConfigValidator:
    """Checks a RunConfig and explains the first problem found."""

    MAX_K = 10**6
    QUADRATURE_KS = (1, 2)

    @classmethod
    def validate(cls, config) -> Tuple[bool, str]:
        """
        Validate a run configuration.

        Args:
            config: RunConfig to check

        Returns:
            Tuple of (is_valid, message)
        """
        from cli.run_config import BOUNDS, COMMANDS, COST, CROSSOVER, OPTIMIZE, QUADRATURE_COMMANDS

        if config.command not in COMMANDS:
            return False, f"Unknown command '{config.command}'; choose from {', '.join(COMMANDS)}"

        if config.k < 1 or config.k > cls.MAX_K:
            return False, f"--k must be between 1 and {cls.MAX_K}, got {config.k}"

        if config.command in QUADRATURE_COMMANDS and config.k not in cls.QUADRATURE_KS:
            return False, (
                f"'{config.command}' integrates densities and supports --k 1 or 2 only, "
                f"got {config.k}; use 'bounds' for larger k"
            )

        if config.command == COST and config.k != 1:
            return False, "'cost' is defined for a single phase; use --k 1"

        if any(n < 0 for n in config.n_values):
            return False, "Resource counts must be non-negative; check --n / --n-range"

        if config.command == BOUNDS and any(n < 1 for n in config.n_values):
            return False, "'bounds' needs N >= 1; start --n-range at 1"

        if config.command == CROSSOVER and (not config.n_values or max(config.n_values) < 2):
            return False, "'crossover' needs a largest N of at least 2; pass --n-max"

        if config.command == OPTIMIZE and len(config.n_values) != 1:
            return False, "'optimize' works on one N; pass a single --n"

        unknown = [p for p in config.probes if p not in PROBE_FAMILIES]
        if unknown:
            return False, f"Unknown probe family {unknown[0]!r}; choose from {', '.join(PROBE_FAMILIES)}"

        if not config.tol > 0:
            return False, f"--tol must be positive, got {config.tol}"

        if config.fmt is not None and config.fmt not in FORMATS:
            return False, f"--format must be one of {', '.join(FORMATS)}"

        if config.command == OPTIMIZE and config.output_format != JSON:
            return False, "'optimize' writes a JSON report; use --format json"

        if config.budget is not None and config.budget <= 0:
            return False, f"--budget must be a positive number of evaluations, got {config.budget}"

        if config.seed < 0:
            return False, f"--seed must be non-negative, got {config.seed}"

        return True, "Configuration is valid"
