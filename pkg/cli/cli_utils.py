"""
CLI Utilities Module
Shared parsing, unit conversion and message styling for the commands
"""

import math
from typing import List, Optional, Sequence

import click

from models.errors import ValidationError

# Message colours
COLORS = {
    "error": "red",
    "warning": "yellow",
}

# Output schemas
SCAN_MI_COLUMNS = ["N", "probe", "k", "mi_bits", "err_est", "evals", "sql_bits", "hb_bits"]
SCAN_MI_INDEPENDENT_COLUMN = "independent_bits"
BOUNDS_COLUMNS = ["k", "N", "hb_bits", "hb_per_phase", "regime", "asymptote"]
CROSSOVER_COLUMNS = ["k", "N_star"]
ENTANGLEMENT_COLUMNS = ["k", "N", "eg_exact", "eg_asymptotic"]
COST_COLUMNS = ["N", "mode", "cost_value"]
ASYMPTOTE_COLUMNS = [
    "N", "probe", "k", "mi_bits", "reference_bits", "difference", "offset", "offset_exact",
]


def parse_n_range(text: Optional[str]) -> List[int]:
    """
    Parse a resource range.

    Accepts "a..b" (inclusive), "a..b:step" and comma lists "1,4,9".
    An empty string gives an empty list.

    Raises:
        ValidationError: on malformed input
    """
    if text is None:
        return []
    text = text.strip()
    if not text:
        return []
    try:
        if ".." in text:
            bounds, _, step = text.partition(":")
            first, last = (int(part) for part in bounds.split("..", 1))
            stride = int(step) if step else 1
            if stride <= 0:
                raise ValidationError(f"Range step must be positive in '{text}'")
            return list(range(first, last + 1, stride))
        return [int(part) for part in text.split(",") if part.strip()]
    except ValueError as exc:
        raise ValidationError(
            f"Cannot read N range '{text}'; use 'a..b', 'a..b:step' or '1,2,3'"
        ) from exc


def to_turns(values: Sequence[float], radians: bool) -> List[float]:
    """Convert input angles to turns."""
    if not radians:
        return [float(v) for v in values]
    return [float(v) / (2.0 * math.pi) for v in values]


def from_turns(value: float, radians: bool) -> float:
    """Convert a phase in turns to the output unit."""
    return value * 2.0 * math.pi if radians else value


def echo_error(message: str):
    click.secho(f"Error: {message}", fg=COLORS["error"], err=True)


def echo_warning(message: str):
    click.secho(f"Warning: {message}", fg=COLORS["warning"], err=True)

