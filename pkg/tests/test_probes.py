"""Tests for probe construction."""

import math

import numpy as np
import pytest

from models.errors import DomainError, UnsupportedError
from models.hilbert import enumerate_basis, multinomial_exact
from models.probes import (
    HOLLAND_BURNETT,
    PRODUCT,
    ProbeState,
    create_probe,
    equatorial_product,
    holland_burnett,
)


class TestProductProbe:
    """Test the equatorial product probe."""

    @pytest.mark.unit
    def test_amplitudes_match_multinomials(self):
        """Test c_n = sqrt(multinomial / 3^N) for k=2, N=6."""
        probe = equatorial_product(2, 6)
        for idx, amplitude in zip(probe.catalog, probe.amplitudes):
            expected = math.sqrt(multinomial_exact(6, idx) / 3**6)
            assert amplitude.real == pytest.approx(expected, rel=1e-12)
            assert amplitude.imag == 0.0

    @pytest.mark.unit
    @pytest.mark.parametrize("k,N", [(1, 1), (1, 50), (2, 30), (3, 8)])
    def test_normalised(self, k, N):
        """Test that the product probe has unit norm."""
        probe = equatorial_product(k, N)
        assert np.linalg.norm(probe.amplitudes) == pytest.approx(1.0, abs=1e-13)
        assert probe.family == PRODUCT

    @pytest.mark.unit
    def test_large_n_stays_finite(self):
        """Test that N=4096 does not overflow thanks to log-gamma weights."""
        probe = equatorial_product(1, 4096)
        assert np.all(np.isfinite(probe.amplitudes))
        assert np.linalg.norm(probe.amplitudes) == pytest.approx(1.0, abs=1e-12)


class TestUniformProbe:
    """Test the Holland-Burnett probe."""

    @pytest.mark.unit
    def test_uniform_amplitudes(self, hb_qutrit):
        """Test that every amplitude equals 1/sqrt(15) for k=2, N=4."""
        assert hb_qutrit.size == 15
        assert np.allclose(hb_qutrit.amplitudes, 1.0 / math.sqrt(15), atol=1e-15)
        assert hb_qutrit.family == HOLLAND_BURNETT

    @pytest.mark.unit
    def test_single_resource_coincides_with_product(self):
        """Test that for N=1 both families are the same state."""
        assert np.allclose(
            holland_burnett(2, 1).amplitudes, equatorial_product(2, 1).amplitudes, atol=1e-15
        )


class TestProbeState:
    """Test ProbeState validation and helpers."""

    @pytest.mark.unit
    def test_wrong_length_rejected(self):
        """Test that an amplitude vector of the wrong size raises DomainError."""
        with pytest.raises(DomainError):
            ProbeState(k=1, N=3, amplitudes=np.ones(3, dtype=complex) / math.sqrt(3))

    @pytest.mark.unit
    def test_unnormalised_rejected(self):
        """Test that a direct constructor call checks the norm."""
        with pytest.raises(DomainError):
            ProbeState(k=1, N=1, amplitudes=np.ones(2, dtype=complex))

    @pytest.mark.unit
    def test_from_amplitudes_normalises(self):
        """Test that from_amplitudes rescales the vector."""
        probe = ProbeState.from_amplitudes(1, 2, [1, 1, 1])
        assert np.allclose(probe.amplitudes, 1 / math.sqrt(3))

    @pytest.mark.unit
    def test_zero_vector_rejected(self):
        """Test that an all-zero vector is refused."""
        with pytest.raises(DomainError):
            ProbeState.from_amplitudes(1, 2, [0, 0, 0])

    @pytest.mark.unit
    def test_amplitudes_read_only(self, hb_qubit):
        """Test that probe amplitudes cannot be changed in place."""
        with pytest.raises(ValueError):
            hb_qubit.amplitudes[0] = 0

    @pytest.mark.unit
    def test_caller_array_stays_writable(self):
        """Test that building a probe freezes its own copy, not the caller's array."""
        vector = np.full(3, 1 / math.sqrt(3), dtype=complex)
        probe = ProbeState(k=1, N=2, amplitudes=vector)
        vector[0] = 0.0
        assert vector.flags.writeable
        assert probe.amplitudes[0] == pytest.approx(1 / math.sqrt(3))
        assert not probe.amplitudes.flags.writeable

    @pytest.mark.unit
    def test_catalog_shared_with_enumeration(self):
        """Test that probes reuse the cached catalog for their (k, N)."""
        assert equatorial_product(2, 4).catalog is enumerate_basis(2, 4)
        assert holland_burnett(2, 4).catalog is enumerate_basis(2, 4)

    @pytest.mark.unit
    def test_tensor_grid_places_amplitudes(self, product_qutrit):
        """Test that the tensor grid holds each amplitude at its label and zeros elsewhere."""
        grid = product_qutrit.tensor_grid()
        assert grid.shape == (5, 5)
        for idx, amplitude in zip(product_qutrit.catalog, product_qutrit.amplitudes):
            assert grid[idx.entries] == amplitude
        assert grid[4, 4] == 0
        assert np.sum(np.abs(grid) ** 2) == pytest.approx(1.0, abs=1e-14)

    @pytest.mark.unit
    def test_real_nonnegative_check(self, random_probe, hb_qubit):
        """Test is_real_nonnegative on named and random probes."""
        assert hb_qubit.is_real_nonnegative()
        assert not random_probe(1, 5).is_real_nonnegative()

    @pytest.mark.unit
    def test_create_probe_factory(self):
        """Test that create_probe dispatches by family name."""
        assert create_probe("HB", 1, 3).family == HOLLAND_BURNETT
        assert create_probe("product", 1, 3).family == PRODUCT
        with pytest.raises(UnsupportedError):
            create_probe("noon", 1, 3)
