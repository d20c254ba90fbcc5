"""Command-line surface of phaseBits."""

import functools
import sys
from typing import Dict, List

import click
import numpy as np

from config import APP_NAME, APP_TAGLINE, APP_VERSION, LoggingConfig, QuadratureConfig
from database.results_store import ResultsStore
from models.errors import (
    BudgetExceededError,
    CapacityError,
    DomainError,
    UnsupportedError,
    ValidationError,
)
from models.entanglement import eg_asymptotic, geometric_entanglement
from models.probes import HOLLAND_BURNETT, PROBE_FAMILIES, PRODUCT, create_probe
from models.results import QuadratureResult
from estimation import bounds as bounds_lib
from estimation.channel import ReducedDensity, closed_form_defect
from estimation.information import (
    CONTINUOUS,
    DISCRETE,
    CostFunction,
    bayes_cost,
    compare_cost_modes,
    independent_mi,
    mutual_information,
)
from estimation.optimizer import crossover as find_crossover
from estimation.optimizer import optimize_probe
from cli import cli_utils
from cli.run_config import (
    ASYMPTOTES,
    BOUNDS,
    COST,
    CROSSOVER,
    DENSITY,
    ENTANGLEMENT,
    OPTIMIZE,
    SCAN_MI,
    RunConfig,
)
from utils.config_validator import RunConfigValidator
from utils.export import FORMATS, render, render_json, write_text
from utils.run_logger import RunLogger, configure_logging

EXIT_VALIDATION = 2
EXIT_BUDGET = 3

# Relative defect above which the typeset two-phase form is reported
DEFECT_REPORT_THRESHOLD = 1e-9


class Run:
    """Validated configuration plus the logger and optional cache of one command."""

    def __init__(self, config: RunConfig):
        self.config = config
        self.store = ResultsStore(config.cache) if config.cache else None
        self.log = RunLogger(self.store, config.command)

    def cached(self, quantity: str, k: int, N: int, family: str, compute) -> QuadratureResult:
        """Serve a result from the cache or compute and store it."""
        tol = self.config.tol
        key = {"quantity": quantity, "k": k, "N": N, "family": family, "tol": tol}
        if self.store is not None:
            hit = self.store.get(quantity, k, N, family, tol)
            if hit is not None:
                self.log.log_cache_hit(key)
                return hit
        result = compute()
        if self.store is not None and self.store.put(quantity, k, N, family, tol, result):
            self.log.log_cache_stored(key)
        return result

    def mutual_information(self, family: str, k: int, N: int) -> QuadratureResult:
        return self.cached(
            "mi", k, N, family,
            lambda: mutual_information(create_probe(family, k, N), self.config.tol, self.config.budget),
        )

    def emit(self, rows: List[Dict], columns: List[str]):
        text = render(rows, columns, self.config.output_format)
        write_text(text, self.config.out)
        if self.config.out:
            self.log.log_output_written(self.config.out, len(rows))
        self.log.log_command_finished(len(rows))

    def close(self):
        if self.store is not None:
            self.store.close()


def run_command(builder):
    """
    Wrap a command body: build and validate the RunConfig, map errors to exit codes.

    The decorated function receives a Run and returns nothing.
    """

    def decorator(body):
        @functools.wraps(body)
        def wrapper(**options):
            try:
                config = builder(**options)
            except ValidationError as exc:
                cli_utils.echo_error(str(exc))
                sys.exit(EXIT_VALIDATION)
            is_valid, message = RunConfigValidator.validate(config)
            run = Run(config)
            if not is_valid:
                run.log.log_validation_failed(message)
                cli_utils.echo_error(message)
                run.close()
                sys.exit(EXIT_VALIDATION)
            run.log.log_command_started(config.to_dict())
            try:
                body(run, **options)
            except (ValidationError, DomainError, UnsupportedError, CapacityError) as exc:
                run.log.log_validation_failed(str(exc))
                cli_utils.echo_error(str(exc))
                sys.exit(EXIT_VALIDATION)
            except BudgetExceededError as exc:
                run.log.log_budget_exhausted(
                    str(exc), exc.partial.value, exc.partial.abs_error_estimate
                )
                cli_utils.echo_error(str(exc))
                sys.exit(EXIT_BUDGET)
            except OSError as exc:
                cli_utils.echo_error(str(exc))
                sys.exit(1)
            finally:
                run.close()

        return wrapper

    return decorator


def _common_options(func):
    """Flags shared by every command."""
    func = click.option("--out", type=click.Path(dir_okay=False), default=None,
                        help="Output file (standard output when omitted)")(func)
    func = click.option("--format", "fmt", type=click.Choice(FORMATS), default=None,
                        help="Output format")(func)
    func = click.option("--cache", type=click.Path(dir_okay=False), default=None,
                        help="Sqlite file caching computed results")(func)
    return func


def _quadrature_options(func):
    func = click.option("--tol", type=float, default=QuadratureConfig.DEFAULT_TOL, show_default=True,
                        help="Absolute quadrature tolerance in bits")(func)
    func = click.option("--budget", type=int, default=None,
                        help="Integrand evaluation budget (default depends on k)")(func)
    return func


def _probe_option(func):
    return click.option(
        "--probe", "probes", type=click.Choice(PROBE_FAMILIES), multiple=True,
        help="Probe family; repeat for several (default: all)",
    )(func)


@click.group(help=f"{APP_NAME}: {APP_TAGLINE}.")
@click.version_option(APP_VERSION, prog_name=APP_NAME)
@click.option("--log-level", default=LoggingConfig.DEFAULT_LEVEL, show_default=True,
              type=click.Choice(["DEBUG", "INFO", "WARNING", "ERROR"]),
              help="Verbosity of run events on standard error")
def main(log_level):
    configure_logging(log_level)


# ------------------------------------------------------------------ scan-mi

def _scan_config(k, n_range, n, probes, tol, budget, out, fmt, cache, **_):
    values = cli_utils.parse_n_range(n_range) if n_range is not None else list(n)
    return RunConfig(SCAN_MI, k=k, n_values=values, probes=tuple(probes) or PROBE_FAMILIES,
                     tol=tol, out=out, fmt=fmt, budget=budget, cache=cache)


@main.command("scan-mi")
@click.option("--k", type=int, default=1, show_default=True, help="Number of phases")
@click.option("--n-range", default=None, help="Resource counts, e.g. 1..30 or 2..20:2")
@click.option("--n", type=int, multiple=True, help="Single resource count (repeatable)")
@_probe_option
@_quadrature_options
@_common_options
@run_command(_scan_config)
def scan_mi(run: Run, **_):
    """Mutual information against N for each probe family."""
    config = run.config
    k = config.k
    columns = list(cli_utils.SCAN_MI_COLUMNS)
    if k > 1:
        columns.append(cli_utils.SCAN_MI_INDEPENDENT_COLUMN)

    rows = []
    total = len(config.n_values) * len(config.probes)
    for N in config.n_values:
        for family in config.probes:
            result = run.mutual_information(family, k, N)
            row = {
                "N": N,
                "probe": family,
                "k": k,
                "mi_bits": result.value,
                "err_est": result.abs_error_estimate,
                "evals": result.evaluations,
                "sql_bits": k * bounds_lib.sql(N) if N >= 1 else None,
                "hb_bits": bounds_lib.hb_k(k, N),
            }
            if k > 1 and N % k == 0:
                row[cli_utils.SCAN_MI_INDEPENDENT_COLUMN] = run.cached(
                    "independent_mi", k, N, family,
                    lambda: independent_mi(k, N, family, config.tol),
                ).value
            rows.append(row)
            run.log.log_progress(len(rows), total, f"N={N}, {family}")
    run.emit(rows, columns)


# ------------------------------------------------------------------- bounds

def _bounds_config(k, fixed_n, upper, out, fmt, cache, **_):
    return RunConfig(BOUNDS, k=max(k) if k else 1, n_values=list(fixed_n), out=out, fmt=fmt,
                     cache=cache)


@main.command("bounds")
@click.option("--k", type=int, multiple=True, help="Fixed phase counts swept over N (default 2 and 10)")
@click.option("--fixed-n", type=int, multiple=True, help="Fixed resource counts swept over k (default 10)")
@click.option("--upper", type=int, default=1000, show_default=True, help="Largest swept value")
@_common_options
@run_command(_bounds_config)
def bounds_cmd(run: Run, k, fixed_n, upper, **_):
    """Heisenberg bounds for the fixed-k, k = N and fixed-N families."""
    if upper < 1:
        raise ValidationError(f"--upper must be at least 1, got {upper}")
    rows = [
        {
            "k": report.k,
            "N": report.N,
            "hb_bits": report.hb,
            "hb_per_phase": report.hb_per_phase,
            "regime": report.regime,
            "asymptote": report.regime_asymptote,
        }
        for report in bounds_lib.hb_sweep(tuple(k) or (2, 10), tuple(fixed_n) or (10,), upper)
    ]
    run.emit(rows, cli_utils.BOUNDS_COLUMNS)


# ---------------------------------------------------------------- crossover

def _crossover_config(k, n_max, tol, budget, out, fmt, cache, **_):
    return RunConfig(CROSSOVER, k=k, n_values=[n_max], tol=tol, out=out, fmt=fmt,
                     budget=budget, cache=cache)


@main.command("crossover")
@click.option("--k", type=int, default=1, show_default=True, help="Number of phases")
@click.option("--n-max", type=int, default=30, show_default=True, help="Largest N examined")
@_quadrature_options
@_common_options
@run_command(_crossover_config)
def crossover_cmd(run: Run, **_):
    """First N where the uniform probe beats the product probe."""
    config = run.config
    result = find_crossover(config.k, config.n_values[0], tol=config.tol, budget=config.budget)
    if result.found and not result.stable:
        cli_utils.echo_warning(f"Ordering after N*={result.n_star} is not stable up to N_max")
    run.emit([{"k": config.k, "N_star": result.n_star}], cli_utils.CROSSOVER_COLUMNS)


# ------------------------------------------------------------- entanglement

def _entanglement_config(k, n_range, n, probes, out, fmt, cache, **_):
    values = cli_utils.parse_n_range(n_range) if n_range is not None else list(n)
    return RunConfig(ENTANGLEMENT, k=k, n_values=values,
                     probes=tuple(probes) or (HOLLAND_BURNETT,), out=out, fmt=fmt, cache=cache)


@main.command("entanglement")
@click.option("--k", type=int, default=1, show_default=True, help="Number of phases")
@click.option("--n-range", default=None, help="Resource counts, e.g. 1..200:10")
@click.option("--n", type=int, multiple=True, help="Single resource count (repeatable)")
@_probe_option
@_common_options
@run_command(_entanglement_config)
def entanglement_cmd(run: Run, **_):
    """Geometric entanglement of the probe next to its large-N approximation."""
    config = run.config
    rows = []
    for family in config.probes:
        for N in config.n_values:
            exact = geometric_entanglement(create_probe(family, config.k, N)).eg
            approx = None
            if family == HOLLAND_BURNETT and config.k in (1, 2) and N >= 1:
                approx = eg_asymptotic(config.k, N)
                if approx < 0:
                    run.log.log_out_of_regime("E_G asymptote", config.k, N, approx)
            rows.append({"k": config.k, "N": N, "eg_exact": exact, "eg_asymptotic": approx})
            run.log.log_progress(len(rows), len(config.n_values) * len(config.probes), f"N={N}")
    run.emit(rows, cli_utils.ENTANGLEMENT_COLUMNS)


# ----------------------------------------------------------------- optimize

def _optimize_config(k, n, tol, starts, seed, out, fmt, cache, **_):
    return RunConfig(OPTIMIZE, k=k, n_values=[n], tol=tol, seed=seed, out=out, fmt=fmt, cache=cache)


@main.command("optimize")
@click.option("--k", type=int, default=1, show_default=True, help="Number of phases")
@click.option("--n", type=int, required=True, help="Resource count")
@click.option("--tol", type=float, default=1e-9, show_default=True, help="Quadrature tolerance")
@click.option("--starts", type=int, default=4, show_default=True, help="Number of starting probes")
@click.option("--seed", type=int, default=0, show_default=True, help="Seed of the random starts")
@_common_options
@run_command(_optimize_config)
def optimize_cmd(run: Run, starts, **_):
    """Search for the probe with the largest mutual information."""
    config = run.config
    N = config.n_values[0]
    result = optimize_probe(config.k, N, tol=config.tol, starts=starts, seed=config.seed)
    if not result.converged:
        run.log.log_not_converged(config.k, N, result.best_mi)
    write_text(render_json(result.summary()), config.out)
    run.log.log_command_finished(1)


# ------------------------------------------------------------------ density

def _density_config(k, n, probes, points, gamma, radians, out, fmt, cache, **_):
    return RunConfig(DENSITY, k=k, n_values=[n], probes=tuple(probes[:1]) or (HOLLAND_BURNETT,),
                     radians=radians, out=out, fmt=fmt, cache=cache)


@main.command("density")
@click.option("--k", type=int, default=1, show_default=True, help="Number of phases (1 or 2)")
@click.option("--n", type=int, required=True, help="Resource count")
@_probe_option
@click.option("--points", type=int, default=512, show_default=True, help="Samples per axis")
@click.option("--gamma", type=float, multiple=True,
              help="Explicit sample (k values per point, in the chosen angle unit)")
@click.option("--radians", is_flag=True, help="Angles in radians instead of turns")
@click.option("--check-closed-form", is_flag=True,
              help="Report where the typeset two-phase closed form departs from the direct sum")
@_common_options
@run_command(_density_config)
def density_cmd(run: Run, points, gamma, check_closed_form, **_):
    """Sample the conditional density g(gamma)."""
    config = run.config
    k, N = config.k, config.n_values[0]
    if k not in (1, 2):
        raise ValidationError(f"'density' samples k=1 or k=2, got k={k}")
    if points < 1:
        raise ValidationError(f"--points must be positive, got {points}")
    probe = create_probe(config.probes[0], k, N)
    evaluator = ReducedDensity(probe)

    if gamma:
        if len(gamma) % k:
            raise ValidationError(f"--gamma needs {k} values per point, got {len(gamma)}")
        samples = np.array(cli_utils.to_turns(gamma, config.radians)).reshape(-1, k)
    else:
        axis = np.arange(points) / points
        mesh = np.meshgrid(*([axis] * k), indexing="ij")
        samples = np.stack([m.ravel() for m in mesh], axis=1)

    values = evaluator.points(samples)
    columns = ["gamma"] if k == 1 else ["gamma1", "gamma2"]
    rows = []
    for sample, value in zip(samples, values):
        row = {name: cli_utils.from_turns(float(c), config.radians) for name, c in zip(columns, sample)}
        row["density"] = float(value)
        rows.append(row)

    if check_closed_form and k == 2:
        defects = closed_form_defect(N, samples[:, 0], samples[:, 1])
        worst = int(np.nanargmax(np.where(np.isfinite(defects), defects, -1.0)))
        if defects[worst] > DEFECT_REPORT_THRESHOLD:
            run.log.log_closed_form_defect(N, float(samples[worst, 0]), float(samples[worst, 1]),
                                           float(defects[worst]))
    run.emit(rows, columns + ["density"])


# --------------------------------------------------------------------- cost

def _cost_config(n_range, n, probes, cost, mode, tol, budget, out, fmt, cache, **_):
    values = cli_utils.parse_n_range(n_range) if n_range is not None else list(n)
    return RunConfig(COST, k=1, n_values=values, probes=tuple(probes[:1]) or (HOLLAND_BURNETT,),
                     tol=tol, out=out, fmt=fmt, budget=budget, cache=cache)


@main.command("cost")
@click.option("--n-range", default=None, help="Resource counts, e.g. 1..16")
@click.option("--n", type=int, multiple=True, help="Single resource count (repeatable)")
@_probe_option
@click.option("--cost", type=click.Choice(["holevo-sine", "surprise"]), default="holevo-sine",
              show_default=True, help="Cost function")
@click.option("--mode", type=click.Choice([CONTINUOUS, DISCRETE, "both"]), default="both",
              show_default=True, help="Estimator on the circle, on the grid, or both")
@_quadrature_options
@_common_options
@run_command(_cost_config)
def cost_cmd(run: Run, cost, mode, **_):
    """Average Bayesian cost of the single-phase estimate."""
    config = run.config
    function = CostFunction.holevo_sine() if cost == "holevo-sine" else CostFunction.surprise()
    rows = []
    for N in config.n_values:
        probe = create_probe(config.probes[0], 1, N)
        if mode == "both":
            continuous, discrete = compare_cost_modes(probe, function, config.tol)
            rows.append({"N": N, "mode": CONTINUOUS, "cost_value": continuous.value})
            rows.append({"N": N, "mode": DISCRETE, "cost_value": discrete.value})
        else:
            result = bayes_cost(probe, function, mode, config.tol, config.budget)
            rows.append({"N": N, "mode": mode, "cost_value": result.value})
        run.log.log_progress(len(rows), len(config.n_values), f"N={N}")
    run.emit(rows, cli_utils.COST_COLUMNS)


# --------------------------------------------------------------- asymptotes

def _asymptotes_config(k, n_range, n, probes, tol, budget, out, fmt, cache, **_):
    values = cli_utils.parse_n_range(n_range) if n_range is not None else list(n)
    return RunConfig(ASYMPTOTES, k=k, n_values=values, probes=tuple(probes) or PROBE_FAMILIES,
                     tol=tol, out=out, fmt=fmt, budget=budget, cache=cache)


@main.command("asymptotes")
@click.option("--k", type=int, default=1, show_default=True, help="Number of phases")
@click.option("--n-range", default=None, help="Resource counts, e.g. 128,512,2048")
@click.option("--n", type=int, multiple=True, help="Single resource count (repeatable)")
@_probe_option
@_quadrature_options
@_common_options
@run_command(_asymptotes_config)
def asymptotes_cmd(run: Run, **_):
    """Mutual information minus its large-N reference, next to the limiting offset."""
    config = run.config
    k = config.k
    rows = []
    for family in config.probes:
        strategy = bounds_lib.PARALLEL if family == PRODUCT else bounds_lib.SEQUENTIAL
        offset = bounds_lib.asymptotic_offset(strategy, k)
        for N in config.n_values:
            if N < 1:
                raise DomainError("Asymptotic references need N >= 1")
            reference = k * (bounds_lib.sql(N) if family == PRODUCT else bounds_lib.hb(N))
            mi = run.mutual_information(family, k, N).value
            rows.append({
                "N": N,
                "probe": family,
                "k": k,
                "mi_bits": mi,
                "reference_bits": reference,
                "difference": mi - reference,
                "offset": offset.value,
                "offset_exact": offset.exact,
            })
            run.log.log_progress(len(rows), len(config.n_values) * len(config.probes), f"N={N}")
    run.emit(rows, cli_utils.ASYMPTOTE_COLUMNS)
