"""Tests for run configuration validation and CLI helpers."""

import math

import pytest

from cli.cli_utils import from_turns, parse_n_range, to_turns
from cli.run_config import (
    BOUNDS,
    COST,
    CROSSOVER,
    DENSITY,
    OPTIMIZE,
    SCAN_MI,
    RunConfig,
)
from models.errors import ValidationError
from utils.config_validator import RunConfigValidator
from utils.export import CSV, JSON, format_value, render, render_csv


class TestRunConfigValidator:
    """Test RunConfigValidator.validate."""

    @pytest.mark.unit
    def test_valid_scan(self):
        """Test a plain single-phase scan."""
        ok, message = RunConfigValidator.validate(RunConfig(SCAN_MI, k=1, n_values=[1, 2, 3]))
        assert ok
        assert message == "Configuration is valid"

    @pytest.mark.unit
    def test_unknown_command(self):
        """Test that unknown commands are refused."""
        ok, message = RunConfigValidator.validate(RunConfig("plot"))
        assert not ok
        assert "Unknown command" in message

    @pytest.mark.unit
    def test_quadrature_needs_small_k(self):
        """Test that quadrature commands refuse k=3 but bounds accepts it."""
        ok, message = RunConfigValidator.validate(RunConfig(SCAN_MI, k=3, n_values=[2]))
        assert not ok
        assert "--k 1 or 2" in message
        assert RunConfigValidator.validate(RunConfig(BOUNDS, k=3, n_values=[10]))[0]

    @pytest.mark.unit
    def test_cost_single_phase(self):
        """Test that cost needs k=1."""
        assert not RunConfigValidator.validate(RunConfig(COST, k=2, n_values=[2]))[0]

    @pytest.mark.unit
    @pytest.mark.parametrize(
        "config",
        [
            RunConfig(SCAN_MI, k=0, n_values=[1]),
            RunConfig(SCAN_MI, k=1, n_values=[-1]),
            RunConfig(BOUNDS, k=2, n_values=[0]),
            RunConfig(CROSSOVER, k=1, n_values=[1]),
            RunConfig(OPTIMIZE, k=1, n_values=[2, 3]),
            RunConfig(SCAN_MI, k=1, n_values=[1], probes=("noon",)),
            RunConfig(SCAN_MI, k=1, n_values=[1], tol=0.0),
            RunConfig(SCAN_MI, k=1, n_values=[1], tol=float("nan")),
            RunConfig(SCAN_MI, k=1, n_values=[1], fmt="xml"),
            RunConfig(OPTIMIZE, k=1, n_values=[2], fmt=CSV),
            RunConfig(SCAN_MI, k=1, n_values=[1], budget=0),
            RunConfig(OPTIMIZE, k=1, n_values=[2], seed=-1),
        ],
    )
    def test_invalid_configs(self, config):
        """Test that each malformed configuration is refused with a message."""
        ok, message = RunConfigValidator.validate(config)
        assert not ok
        assert message

    @pytest.mark.unit
    def test_output_format_defaults(self):
        """Test CSV by default and JSON for optimize."""
        assert RunConfig(DENSITY).output_format == CSV
        assert RunConfig(OPTIMIZE).output_format == JSON
        assert RunConfig(SCAN_MI, fmt=JSON).output_format == JSON


class TestParseNRange:
    """Test parse_n_range."""

    @pytest.mark.unit
    def test_forms(self):
        """Test ranges, stepped ranges and lists."""
        assert parse_n_range("1..4") == [1, 2, 3, 4]
        assert parse_n_range("2..10:4") == [2, 6, 10]
        assert parse_n_range("128,512, 2048") == [128, 512, 2048]

    @pytest.mark.unit
    def test_empty(self):
        """Test that empty and reversed ranges give no values."""
        assert parse_n_range("") == []
        assert parse_n_range(None) == []
        assert parse_n_range("5..4") == []

    @pytest.mark.unit
    @pytest.mark.parametrize("text", ["a..b", "1..", "1..5:0", "1;2"])
    def test_malformed(self, text):
        """Test that malformed ranges raise ValidationError."""
        with pytest.raises(ValidationError):
            parse_n_range(text)


class TestUnitsAndFormatting:
    """Test angle units and value formatting."""

    @pytest.mark.unit
    def test_turns_radians(self):
        """Test conversion both ways."""
        assert to_turns([math.pi], radians=True) == [0.5]
        assert to_turns([0.25], radians=False) == [0.25]
        assert from_turns(0.5, radians=True) == pytest.approx(math.pi)

    @pytest.mark.unit
    def test_format_value(self):
        """Test 17 significant digits, booleans and missing values."""
        assert format_value(0.1) == "0.10000000000000001"
        assert float(format_value(1 / 3)) == 1 / 3
        assert format_value(True) == "true"
        assert format_value(None) == ""
        assert format_value(7) == "7"

    @pytest.mark.unit
    def test_render_header_only(self):
        """Test that no rows still gives the header line."""
        assert render_csv([], ["N", "mi_bits"]) == "N,mi_bits\n"

    @pytest.mark.unit
    def test_render_json_rows(self):
        """Test that JSON output keeps the requested columns only."""
        text = render([{"N": 1, "mi_bits": 0.5, "extra": 1}], ["N", "mi_bits"], JSON)
        assert '"extra"' not in text
        assert '"mi_bits": 0.5' in text
