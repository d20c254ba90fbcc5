"""
Integration tests for the command-line interface.
Commands write to --out files so that log lines on standard error stay apart.
"""

import csv
import json

import pytest

from cli.commands import main
from database.results_store import ResultsStore
from utils.run_logger import RunEventType


def _read_csv(path):
    with open(path, newline="") as handle:
        return list(csv.DictReader(handle))


class TestScanMi:
    """Test the scan-mi command."""

    @pytest.mark.integration
    def test_single_phase_scan(self, runner, tmp_path):
        """Test one row per (N, probe) with the expected columns."""
        out = tmp_path / "scan.csv"
        result = runner.invoke(main, ["scan-mi", "--k", "1", "--n-range", "1..3", "--tol", "1e-8", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert len(rows) == 6
        assert list(rows[0].keys()) == ["N", "probe", "k", "mi_bits", "err_est", "evals", "sql_bits", "hb_bits"]
        first = rows[0]
        assert first["N"] == "1"
        assert float(first["mi_bits"]) == pytest.approx(0.4426950408889634, abs=1e-7)

    @pytest.mark.integration
    def test_two_phase_scan_has_independent_column(self, runner, tmp_path):
        """Test that k=2 adds the independent-estimation column, filled for even N."""
        out = tmp_path / "scan.csv"
        result = runner.invoke(main, ["scan-mi", "--k", "2", "--n", "2", "--n", "3", "--probe", "hb", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert "independent_bits" in rows[0]
        assert rows[0]["independent_bits"] != ""
        assert rows[1]["independent_bits"] == ""

    @pytest.mark.integration
    def test_empty_range_writes_header(self, runner, tmp_path):
        """Test that an empty N range gives a header-only file."""
        out = tmp_path / "scan.csv"
        result = runner.invoke(main, ["scan-mi", "--n-range", "5..4", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert out.read_text() == "N,probe,k,mi_bits,err_est,evals,sql_bits,hb_bits\n"

    @pytest.mark.integration
    def test_rerun_is_byte_identical(self, runner, tmp_path):
        """Test that two identical runs write identical files."""
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan-mi", "--k", "1", "--n-range", "1..4", "--tol", "1e-9"]
        assert runner.invoke(main, args + ["--out", str(first)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(second)]).exit_code == 0
        assert first.read_bytes() == second.read_bytes()

    @pytest.mark.integration
    def test_cache_reuse(self, runner, tmp_path):
        """Test that a second run is served from the cache with the same output."""
        cache = tmp_path / "cache.db"
        first, second = tmp_path / "a.csv", tmp_path / "b.csv"
        args = ["scan-mi", "--n-range", "1..2", "--probe", "hb", "--cache", str(cache)]
        assert runner.invoke(main, args + ["--out", str(first)]).exit_code == 0
        assert runner.invoke(main, args + ["--out", str(second)]).exit_code == 0
        assert first.read_bytes() == second.read_bytes()

        store = ResultsStore(str(cache))
        try:
            assert store.count("mi") == 2
            assert len(store.get_events(RunEventType.CACHE_HIT)) == 2
        finally:
            store.close()

    @pytest.mark.integration
    def test_validation_exit_code(self, runner):
        """Test exit code 2 for k=3 and for a malformed range."""
        assert runner.invoke(main, ["scan-mi", "--k", "3", "--n", "2"]).exit_code == 2
        assert runner.invoke(main, ["scan-mi", "--n-range", "1..x"]).exit_code == 2
        assert runner.invoke(main, ["scan-mi", "--n", "2", "--tol", "-1"]).exit_code == 2

    @pytest.mark.integration
    def test_budget_exit_code(self, runner, tmp_path):
        """Test exit code 3 when the evaluation budget runs out."""
        result = runner.invoke(main, ["scan-mi", "--n", "20", "--budget", "100", "--out", str(tmp_path / "x.csv")])
        assert result.exit_code == 3


class TestBoundsCommand:
    """Test the bounds command."""

    @pytest.mark.integration
    def test_bounds_rows(self, runner, tmp_path):
        """Test that the sweep lists the fixed-k, diagonal and fixed-N families."""
        out = tmp_path / "bounds.csv"
        result = runner.invoke(main, ["bounds", "--k", "2", "--fixed-n", "10", "--upper", "100", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert list(rows[0].keys()) == ["k", "N", "hb_bits", "hb_per_phase", "regime", "asymptote"]
        assert any(row["k"] == "100" and row["N"] == "100" for row in rows)

    @pytest.mark.integration
    def test_json_format(self, runner, tmp_path):
        """Test JSON output of the same table."""
        out = tmp_path / "bounds.json"
        result = runner.invoke(main, ["bounds", "--upper", "10", "--format", "json", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = json.loads(out.read_text())
        assert {"k", "N", "hb_bits"} <= set(rows[0])


class TestDensityCommand:
    """Test the density command."""

    @pytest.mark.integration
    def test_uniform_peak(self, runner, tmp_path):
        """Test that the uniform probe density peaks at N+1."""
        out = tmp_path / "density.csv"
        result = runner.invoke(main, ["density", "--k", "1", "--n", "4", "--probe", "hb", "--points", "64", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert len(rows) == 64
        assert max(float(row["density"]) for row in rows) == pytest.approx(5.0, abs=1e-12)

    @pytest.mark.integration
    def test_explicit_points_in_radians(self, runner, tmp_path):
        """Test explicit two-phase samples given in radians."""
        out = tmp_path / "density.csv"
        result = runner.invoke(
            main,
            ["density", "--k", "2", "--n", "3", "--probe", "hb", "--radians",
             "--gamma", "0", "--gamma", "0", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert list(rows[0].keys()) == ["gamma1", "gamma2", "density"]
        assert float(rows[0]["density"]) == pytest.approx(10.0, abs=1e-12)

    @pytest.mark.integration
    def test_closed_form_check_logs_defect(self, runner, tmp_path):
        """Test that checking the typeset closed form records a defect event."""
        cache = tmp_path / "cache.db"
        result = runner.invoke(
            main,
            ["density", "--k", "2", "--n", "3", "--points", "8", "--check-closed-form",
             "--cache", str(cache), "--out", str(tmp_path / "d.csv")],
        )
        assert result.exit_code == 0, result.output
        store = ResultsStore(str(cache))
        try:
            assert len(store.get_events(RunEventType.CLOSED_FORM_DEFECT)) == 1
        finally:
            store.close()

    @pytest.mark.integration
    def test_gamma_count_mismatch(self, runner):
        """Test that an odd number of --gamma values for k=2 exits with 2."""
        result = runner.invoke(main, ["density", "--k", "2", "--n", "3", "--gamma", "0.1"])
        assert result.exit_code == 2


class TestOtherCommands:
    """Test crossover, entanglement, optimize, cost and asymptotes."""

    @pytest.mark.integration
    def test_crossover(self, runner, tmp_path):
        """Test that the single-phase crossover is N*=10."""
        out = tmp_path / "cross.csv"
        result = runner.invoke(main, ["crossover", "--k", "1", "--n-max", "11", "--tol", "1e-7", "--out", str(out)])
        assert result.exit_code == 0, result.output
        assert _read_csv(out) == [{"k": "1", "N_star": "10"}]

    @pytest.mark.integration
    def test_crossover_budget_exit_code(self, runner, tmp_path):
        """Test that --budget reaches the crossover scan and exhaustion exits with 3."""
        result = runner.invoke(
            main, ["crossover", "--n-max", "5", "--budget", "100", "--out", str(tmp_path / "x.csv")]
        )
        assert result.exit_code == 3

    @pytest.mark.integration
    def test_entanglement(self, runner, tmp_path):
        """Test exact and asymptotic entanglement columns."""
        out = tmp_path / "eg.csv"
        result = runner.invoke(main, ["entanglement", "--k", "1", "--n", "2", "--n", "50", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert float(rows[0]["eg_exact"]) == pytest.approx(0.0286, abs=5e-4)
        assert float(rows[0]["eg_asymptotic"]) < 0
        assert float(rows[1]["eg_asymptotic"]) > 0

    @pytest.mark.integration
    def test_optimize_json(self, runner, tmp_path):
        """Test that optimize writes a JSON report."""
        out = tmp_path / "opt.json"
        result = runner.invoke(main, ["optimize", "--k", "1", "--n", "2", "--starts", "2", "--out", str(out)])
        assert result.exit_code == 0, result.output
        report = json.loads(out.read_text())
        assert report["N"] == 2
        assert len(report["amplitudes"]) == 3

    @pytest.mark.integration
    def test_optimize_capacity(self, runner):
        """Test that an oversized optimisation exits with 2."""
        assert runner.invoke(main, ["optimize", "--k", "2", "--n", "25"]).exit_code == 2

    @pytest.mark.integration
    def test_cost_both_modes(self, runner, tmp_path):
        """Test that both estimator modes give the same Holevo cost."""
        out = tmp_path / "cost.csv"
        result = runner.invoke(main, ["cost", "--n", "1", "--n", "4", "--tol", "1e-11", "--out", str(out)])
        assert result.exit_code == 0, result.output
        rows = _read_csv(out)
        assert [row["mode"] for row in rows] == ["continuous", "discrete"] * 2
        assert float(rows[0]["cost_value"]) == pytest.approx(1.0, abs=1e-9)
        assert float(rows[2]["cost_value"]) == pytest.approx(float(rows[3]["cost_value"]), abs=1e-9)

    @pytest.mark.integration
    def test_surprise_cost_not_comparable(self, runner):
        """Test that comparing modes for the surprise cost exits with 2."""
        assert runner.invoke(main, ["cost", "--n", "2", "--cost", "surprise"]).exit_code == 2

    @pytest.mark.integration
    def test_asymptotes(self, runner, tmp_path):
        """Test the difference and offset columns."""
        out = tmp_path / "asym.csv"
        result = runner.invoke(main, ["asymptotes", "--k", "1", "--n", "64", "--probe", "product", "--out", str(out)])
        assert result.exit_code == 0, result.output
        row = _read_csv(out)[0]
        assert float(row["difference"]) == pytest.approx(float(row["offset"]), abs=0.05)
        assert row["offset_exact"] == "true"

    @pytest.mark.integration
    def test_version(self, runner):
        """Test the version flag."""
        result = runner.invoke(main, ["--version"])
        assert result.exit_code == 0
        assert "phaseBits" in result.output
