"""Tests for the geometric measure of entanglement."""

import numpy as np
import pytest

from models.entanglement import (
    eg_asymptotic,
    eg_asymptotic_in_regime,
    geometric_entanglement,
    simplex_grid,
)
from models.errors import DomainError, UnsupportedError
from models.probes import ProbeState, equatorial_product, holland_burnett


def _permute_levels(probe, order):
    """Same amplitudes with the k+1 levels relabelled by order."""
    catalog = probe.catalog
    permuted = np.empty_like(probe.amplitudes)
    for position, label in enumerate(catalog):
        full = label.full()
        moved = tuple(full[level] for level in order)
        permuted[catalog.position(moved[1:])] = probe.amplitudes[position]
    return ProbeState.from_amplitudes(probe.k, probe.N, permuted)


class TestGeometricEntanglement:
    """Test geometric_entanglement."""

    @pytest.mark.unit
    def test_two_resource_uniform_probe(self):
        """Test E_G of the k=1, N=2 uniform probe and its maximiser p = (1/2, 1/2)."""
        result = geometric_entanglement(holland_burnett(1, 2))
        assert result.eg == pytest.approx(0.0286, abs=5e-4)
        assert result.argmax_probs[0] == pytest.approx(0.5, abs=1e-4)
        assert result.argmax_probs[1] == pytest.approx(0.5, abs=1e-4)

    @pytest.mark.unit
    @pytest.mark.parametrize("k,N", [(1, 5), (1, 40), (2, 6), (3, 3)])
    def test_product_probe_is_unentangled(self, k, N):
        """Test that the product probe has E_G ~ 0."""
        result = geometric_entanglement(equatorial_product(k, N))
        assert result.eg <= 1e-10
        assert np.allclose(result.argmax_probs, 1.0 / (k + 1), atol=1e-4)

    @pytest.mark.unit
    def test_range(self, hb_qutrit):
        """Test 0 <= E_G < 1 and that the maximiser is a probability vector."""
        result = geometric_entanglement(hb_qutrit)
        assert 0.0 <= result.eg < 1.0
        assert sum(result.argmax_probs) == pytest.approx(1.0, abs=1e-12)
        assert result.evaluations > 0

    @pytest.mark.unit
    @pytest.mark.parametrize("order", [(1, 0, 2), (2, 1, 0), (1, 2, 0)])
    def test_invariant_under_level_permutation(self, order, rng):
        """Test that relabelling the k+1 levels leaves E_G unchanged."""
        uniform = holland_burnett(2, 5)
        assert geometric_entanglement(_permute_levels(uniform, order)).eg == pytest.approx(
            geometric_entanglement(uniform).eg, abs=1e-9
        )

        skewed = ProbeState.from_amplitudes(2, 3, rng.uniform(0.2, 1.0, size=10))
        assert geometric_entanglement(_permute_levels(skewed, order)).eg == pytest.approx(
            geometric_entanglement(skewed).eg, abs=1e-7
        )

    @pytest.mark.unit
    def test_zero_resources(self):
        """Test that N=0 is a product state."""
        assert geometric_entanglement(holland_burnett(2, 0)).eg == 0.0

    @pytest.mark.unit
    def test_complex_probe_rejected(self, random_probe):
        """Test that complex amplitudes raise UnsupportedError."""
        with pytest.raises(UnsupportedError):
            geometric_entanglement(random_probe(1, 4))

    @pytest.mark.unit
    def test_global_phase_rejected(self, hb_qubit):
        """Test that a global phase makes the amplitudes unsupported."""
        with pytest.raises(UnsupportedError):
            geometric_entanglement(hb_qubit.with_global_phase(1.0))

    @pytest.mark.slow
    def test_qubit_asymptote(self):
        """Test that the separability fidelity of HB(1, 200) is within 2% of sqrt(2 pi N)/(N+1)."""
        fidelity = 1.0 - geometric_entanglement(holland_burnett(1, 200)).eg
        assert 0.98 <= fidelity / (1.0 - eg_asymptotic(1, 200)) <= 1.02

    @pytest.mark.slow
    def test_qutrit_asymptote(self):
        """Test that the separability fidelity of HB(2, 200) follows its asymptote within 2%."""
        fidelity = 1.0 - geometric_entanglement(holland_burnett(2, 200)).eg
        assert 0.98 <= fidelity / (1.0 - eg_asymptotic(2, 200)) <= 1.02


class TestAsymptoticEntanglement:
    """Test eg_asymptotic."""

    @pytest.mark.unit
    def test_qubit_formula(self):
        """Test 1 - sqrt(2 pi N)/(N+1) at N=100."""
        assert eg_asymptotic(1, 100) == pytest.approx(1 - np.sqrt(200 * np.pi) / 101, rel=1e-14)

    @pytest.mark.unit
    def test_qutrit_formula(self):
        """Test 1 - 8 pi N/(3 sqrt 3 M) at N=100."""
        M = 101 * 102 // 2
        expected = 1 - 8 * np.pi * 100 / (3 * np.sqrt(3) * M)
        assert eg_asymptotic(2, 100) == pytest.approx(expected, rel=1e-14)

    @pytest.mark.unit
    def test_out_of_regime_flag(self):
        """Test that small N gives a negative value and is flagged."""
        assert eg_asymptotic(1, 1) < 0
        assert not eg_asymptotic_in_regime(1, 1)
        assert eg_asymptotic_in_regime(1, 100)

    @pytest.mark.unit
    def test_invalid_arguments(self):
        """Test that N=0 and k=3 are refused."""
        with pytest.raises(DomainError):
            eg_asymptotic(1, 0)
        with pytest.raises(UnsupportedError):
            eg_asymptotic(3, 10)


class TestSimplexGrid:
    """Test the seeding lattice."""

    @pytest.mark.unit
    def test_rows_are_probability_vectors(self):
        """Test that every lattice row is non-negative and sums to one."""
        grid = simplex_grid(2, 8)
        assert grid.shape == (45, 3)
        assert np.all(grid >= -1e-15)
        assert np.allclose(grid.sum(axis=1), 1.0)
