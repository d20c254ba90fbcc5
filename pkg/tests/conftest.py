"""
Pytest Configuration and Shared Fixtures
Provides reusable probes, a temporary results store and a CLI runner
"""

import numpy as np
import pytest
from click.testing import CliRunner

from config import TestConfig
from database.results_store import ResultsStore
from models.probes import ProbeState, equatorial_product, holland_burnett


@pytest.fixture
def temp_store(tmp_path):
    """Create a temporary results store for testing."""
    store = ResultsStore(str(tmp_path / TestConfig.TEST_CACHE_PATH))
    yield store

    # Cleanup
    store.close()


@pytest.fixture
def memory_store():
    """Results store living in memory."""
    store = ResultsStore(":memory:")
    yield store
    store.close()


@pytest.fixture
def rng():
    """Seeded random generator."""
    return np.random.default_rng(TestConfig.TEST_SEED)


@pytest.fixture
def runner():
    """Click test runner."""
    return CliRunner()


@pytest.fixture
def hb_qubit():
    """Uniform single-phase probe with N=7."""
    return holland_burnett(1, 7)


@pytest.fixture
def product_qubit():
    """Product single-phase probe with N=7."""
    return equatorial_product(1, 7)


@pytest.fixture
def hb_qutrit():
    """Uniform two-phase probe with N=4."""
    return holland_burnett(2, 4)


@pytest.fixture
def product_qutrit():
    """Product two-phase probe with N=4."""
    return equatorial_product(2, 4)


@pytest.fixture
def random_probe(rng):
    """Factory for random complex probes."""

    def make(k, N):
        from models.hilbert import dimension

        size = dimension(k, N)
        vector = rng.normal(size=size) + 1j * rng.normal(size=size)
        return ProbeState.from_amplitudes(k, N, vector)

    return make
