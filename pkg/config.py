"""
Configuration file for phaseBits
Centralizes all numerical tolerances, budgets and output settings
"""


# Non-degenerate subspace
class HilbertConfig:
    """Limits for basis enumeration and combinatorics."""

    # Largest catalog that may be materialised in memory
    MAX_DIMENSION = 2**26

    # Recently enumerated catalogs kept in memory
    CATALOG_CACHE_SIZE = 16


# Conditional densities
class ChannelConfig:
    """Settings for the Holevo-POVM density evaluators."""

    # |sin(pi*gamma)| below this switches the Fejer kernel to the direct sum
    FEJER_SINGULAR_THRESHOLD = 1e-8

    # |S_x|, |S_y| or |S_(x-y)| below DOUBLE_SINGULAR_SCALE / (N+1) switches the
    # two-phase closed form to the direct sum (closed-form rounding grows like
    # eps / ((N+1) S)^2)
    DOUBLE_SINGULAR_SCALE = 2e-3

    # Evaluation points per block in direct summation
    DIRECT_SUM_CHUNK = 4096

    # Amplitudes below this fraction of the largest one are left out of
    # fast direct sums (their contribution is below double precision)
    AMPLITUDE_CUTOFF = 1e-18


# Adaptive quadrature
class QuadratureConfig:
    """Adaptive Gauss-Kronrod cubature settings."""

    DEFAULT_TOL = 1e-6

    # Initial mesh: this many cells between neighbouring kernel grid points j/(N+1)
    CELLS_PER_GRID_STEP = 4

    # Integrand evaluation budgets
    BUDGET_K1 = 10**7
    BUDGET_K2 = 10**9

    # Points handed to an integrand in a single call
    CHUNK_POINTS = 2**22

    # Deepest bisection level of a cell before giving up
    MAX_LEVEL = 40

    # Initial cells per axis for the estimator-phase integral of the discrete route
    DISCRETE_CELLS_PER_AXIS = 4


# Geometric measure of entanglement
class EntanglementConfig:
    """Closest-product-state search settings."""

    GRID_POINTS_PER_DIM = 64
    DEFAULT_TOL = 1e-12


# Probe optimisation
class OptimizerConfig:
    """Multi-start Nelder-Mead search over probe amplitudes."""

    MAX_DIMENSION = 200
    DEFAULT_STARTS = 4
    DEFAULT_SEED = 0
    MAX_ITER_PER_DIM = 400

    # Quadrature tolerance used inside the objective
    OBJECTIVE_TOL = 1e-9


# Heisenberg bound regimes
class BoundsConfig:
    """Thresholds on N/k used only to tag the reporting regime."""

    LARGE_RATIO = 10.0
    SMALL_RATIO = 0.1


# Export Configuration
class ExportConfig:
    """Export and reporting settings."""

    CSV_DELIMITER = ","
    CSV_ENCODING = "utf-8"

    # Round-trip precision for every float written
    FLOAT_FORMAT = "{:.17g}"

    JSON_INDENT = 2


# Logging Configuration
class LoggingConfig:
    """Run-event logging settings."""

    LOG_FORMAT = "%(asctime)s %(levelname)s %(name)s: %(message)s"
    DEFAULT_LEVEL = "INFO"


# Testing Configuration
class TestConfig:
    """Testing-related settings."""

    TEST_CACHE_PATH = "test_results.db"
    TEST_SEED = 12345


# Application Metadata
APP_NAME = "phaseBits"
APP_VERSION = "1.0"
APP_TAGLINE = "Digital estimation of many phases"
