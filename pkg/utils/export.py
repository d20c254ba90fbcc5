"""CSV and JSON writers with round-trip float formatting."""

import csv
import io
import json
import math
from typing import Any, Dict, Iterable, List, Optional, Sequence

import click
import numpy as np

from config import ExportConfig

CSV = "csv"
JSON = "json"
FORMATS = (CSV, JSON)


def format_value(value: Any) -> str:
    """Render a cell: floats with 17 significant digits, None as empty."""
    if value is None:
        return ""
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        return ExportConfig.FLOAT_FORMAT.format(float(value))
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return str(value)


def _plain(value: Any) -> Any:
    if isinstance(value, dict):
        return {k: _plain(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_plain(v) for v in value]
    if isinstance(value, np.ndarray):
        return [_plain(v) for v in value.tolist()]
    if isinstance(value, (np.bool_,)):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    return value


def render_csv(rows: Iterable[Dict[str, Any]], fieldnames: Sequence[str]) -> str:
    """CSV text with a header line; an empty row list gives the header only."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, delimiter=ExportConfig.CSV_DELIMITER, lineterminator="\n")
    writer.writerow(fieldnames)
    for row in rows:
        writer.writerow([format_value(row.get(name)) for name in fieldnames])
    return buffer.getvalue()


def render_json(payload: Any) -> str:
    """JSON text; floats keep their shortest round-trip repr."""
    return json.dumps(_plain(payload), indent=ExportConfig.JSON_INDENT, sort_keys=False) + "\n"


def render(rows: List[Dict[str, Any]], fieldnames: Sequence[str], fmt: str) -> str:
    """Render a table in the requested format."""
    if fmt == JSON:
        return render_json([{name: row.get(name) for name in fieldnames} for row in rows])
    return render_csv(rows, fieldnames)


def write_text(text: str, path: Optional[str]) -> None:
    """Write to path, or to standard output when path is None."""
    if path is None:
        click.echo(text, nl=False)
        return
    with open(path, "w", newline="", encoding=ExportConfig.CSV_ENCODING) as handle:
        handle.write(text)
