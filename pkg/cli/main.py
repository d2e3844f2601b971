"""Command-line interface for bglfrps."""

import json
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace
from datetime import datetime
from typing import Any, NoReturn, Optional

import click
import numpy as np
import typer

from bglfrps import (
    BglfrParams,
    BglfrpsParams,
    BglfrpsError,
    DomainError,
    UndefinedConditionalError,
    conditional_n_mean,
    density_grid,
    em_fit,
    goodness_of_fit,
    joint_cdf,
    joint_pdf,
    parse_family,
    sample,
)
from bglfrps.config import create_default_config, get_config, save_config
from bglfrps.data import FOOTBALL_SCALE, DatasetSpec, load_dataset, write_pairs
from bglfrps.errors import DegenerateDataError, IngestionError
from bglfrps.logging_ import clear_logs, get_recent_logs, log_fit_result
from bglfrps.powerseries import PowerSeriesFamily
from bglfrps.reference import DENSITY_PANELS, REFERENCE_FITS, reference_fit
from bglfrps.report import (
    ReproduceRow,
    fit_report_to_dict,
    format_density_grid,
    format_fit_report,
    format_reproduce_table,
)
from bglfrps.typing_ import Config

EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_NOT_CONVERGED = 3

DEFAULT_LATTICE = "0.1:2:20"

app = typer.Typer(
    name="bglfrps",
    help="Fit, simulate and evaluate bivariate GLFR-power series distributions",
    add_completion=False,
)


def _fail(message: str, code: int) -> NoReturn:
    typer.echo(f"✗ {message}", err=True)
    sys.exit(code)


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as f:
            f.write(text)
    else:
        typer.echo(text, nl=False)


def _run_config(
    max_iter: Optional[int], tol: Optional[float], tie_tol: Optional[float]
) -> Config:
    """Stored configuration with command-line overrides applied."""
    config = get_config()
    if max_iter is not None:
        config.max_iter = max_iter
    if tol is not None:
        config.tol = tol
    if tie_tol is not None:
        config.tie_tol = tie_tol
    return config


def _family(spec: str) -> PowerSeriesFamily:
    try:
        return parse_family(spec)
    except DomainError as e:
        _fail(str(e), EXIT_USAGE)


def _params(
    family: str,
    alpha1: float,
    alpha2: float,
    alpha3: float,
    beta: float,
    gamma: float,
    theta: float,
) -> BglfrpsParams:
    fam = _family(family)
    try:
        base = BglfrParams(alpha1, alpha2, alpha3, beta, gamma)
        if fam.is_degenerate:
            return BglfrpsParams.from_bglfr(base)
        return BglfrpsParams(base, fam, theta)
    except DomainError as e:
        _fail(str(e), EXIT_USAGE)


def _lattice(spec: str) -> np.ndarray:
    """`lo:hi:count` evenly spaced points."""
    try:
        lo, hi, count = spec.split(":")
        lo_f, hi_f, n = float(lo), float(hi), int(count)
    except ValueError:
        _fail(f"lattice must look like lo:hi:count, got {spec!r}", EXIT_USAGE)
    if not (0 <= lo_f < hi_f) or n < 1:
        _fail(f"lattice needs 0 <= lo < hi and count >= 1, got {spec!r}", EXIT_USAGE)
    return np.linspace(lo_f, hi_f, n)


_ALPHA1 = typer.Option(1.0, "--alpha1", help="Shape alpha1")
_ALPHA2 = typer.Option(1.0, "--alpha2", help="Shape alpha2")
_ALPHA3 = typer.Option(1.0, "--alpha3", help="Shape alpha3 (common component)")
_BETA = typer.Option(1.0, "--beta", help="Linear hazard rate")
_GAMMA = typer.Option(1.0, "--gamma", help="Quadratic hazard rate")
_THETA = typer.Option(0.5, "--theta", help="Power-series parameter")
_FAMILY = typer.Option(
    "geometric",
    "--family",
    "-f",
    help=(
        "geometric | poisson | logarithmic | binomial:k | negbinomial:k"
        " | poly:c1,c2,... | degenerate"
    ),
)
_TOL_HELP = "Relative log-likelihood tolerance"


@app.command()
def fit(
    data: str = typer.Option(
        "embedded", "--data", "-d", help="'embedded' or a CSV path"
    ),
    scale: float = typer.Option(
        1.0, "--scale", help="Multiply every value by this factor"
    ),
    family: str = _FAMILY,
    max_iter: Optional[int] = typer.Option(None, "--max-iter", help="EM iteration cap"),
    tol: Optional[float] = typer.Option(None, "--tol", help=_TOL_HELP),
    tie_tol: Optional[float] = typer.Option(
        None, "--tie-tol", help="Treat pairs closer than this as ties"
    ),
    no_polish: bool = typer.Option(
        False, "--no-polish", help="Skip the direct-likelihood polish"
    ),
    as_json: bool = typer.Option(False, "--json", help="Emit JSON instead of text"),
    out: Optional[str] = typer.Option(
        None, "--out", "-o", help="Write the report here"
    ),
) -> None:
    """Fit a BGLFRPS model by EM and report goodness of fit."""
    fam = _family(family)
    config = _run_config(max_iter, tol, tie_tol)
    if no_polish:
        config.polish = False

    try:
        spec = DatasetSpec(data, scale)
        observations = load_dataset(spec, tie_tol=config.tie_tol)
        report = em_fit(observations, fam, config=config)
        gof = goodness_of_fit(report, observations)
    except (IngestionError, DegenerateDataError, DomainError) as e:
        _fail(str(e), EXIT_DATA)

    if as_json:
        text = json.dumps(fit_report_to_dict(report, gof), indent=2) + "\n"
    else:
        text = format_fit_report(report, gof)
    _emit(text, out)

    if config.log_runs:
        log_fit_result(report, gof, "fit", {"data": data, "scale": scale})
    if not report.converged:
        typer.echo("✗ EM did not converge; reporting the best iterate", err=True)
        sys.exit(EXIT_NOT_CONVERGED)


@app.command()
def simulate(
    n: int = typer.Option(100, "--number", "-n", help="Number of pairs"),
    family: str = _FAMILY,
    alpha1: float = _ALPHA1,
    alpha2: float = _ALPHA2,
    alpha3: float = _ALPHA3,
    beta: float = _BETA,
    gamma: float = _GAMMA,
    theta: float = _THETA,
    seed: Optional[int] = typer.Option(None, "--seed", help="Random seed"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="CSV output path"),
) -> None:
    """Draw pairs and write them as CSV."""
    if n < 0:
        _fail(f"number of pairs must be >= 0, got {n}", EXIT_USAGE)
    p = _params(family, alpha1, alpha2, alpha3, beta, gamma, theta)
    rng = np.random.default_rng(get_config().seed if seed is None else seed)
    draws = sample(p, rng, n) if n > 0 else np.empty((0, 2))

    if out:
        with open(out, "w", encoding="utf-8") as f:
            write_pairs(draws, f)
    else:
        write_pairs(draws, sys.stdout)


@app.command(name="eval")
def evaluate(
    y1: float = typer.Option(..., "--y1", help="First coordinate"),
    y2: float = typer.Option(..., "--y2", help="Second coordinate"),
    family: str = _FAMILY,
    alpha1: float = _ALPHA1,
    alpha2: float = _ALPHA2,
    alpha3: float = _ALPHA3,
    beta: float = _BETA,
    gamma: float = _GAMMA,
    theta: float = _THETA,
) -> None:
    """Print the cdf, density and E(N | y) at one point."""
    p = _params(family, alpha1, alpha2, alpha3, beta, gamma, theta)
    try:
        typer.echo(f"cdf: {float(joint_cdf(p, y1, y2))!r}")
    except DomainError as e:
        _fail(str(e), EXIT_USAGE)

    if y1 > 0 and y2 > 0:
        density = joint_pdf(p, y1, y2)
        typer.echo(f"region: {density.region.value}")
        typer.echo(f"pdf: {density.value!r}")
        try:
            typer.echo(f"mean_n: {float(conditional_n_mean(p, y1, y2))!r}")
        except UndefinedConditionalError:
            typer.echo("mean_n: undefined")
    else:
        typer.echo("region: boundary")
        typer.echo("pdf: 0.0")
        typer.echo("mean_n: undefined")


@app.command()
def grid(
    panel: Optional[int] = typer.Option(
        None, "--panel", help="Reference density panel 1-4 (overrides parameters)"
    ),
    lattice: str = typer.Option(
        DEFAULT_LATTICE, "--grid", help="Lattice lo:hi:count used on both axes"
    ),
    family: str = typer.Option("poly:1" + ",0" * 18 + ",1", "--family", "-f"),
    alpha1: float = _ALPHA1,
    alpha2: float = _ALPHA2,
    alpha3: float = _ALPHA3,
    beta: float = _BETA,
    gamma: float = _GAMMA,
    theta: float = typer.Option(1.0, "--theta", help="Power-series parameter"),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write the grid here"),
) -> None:
    """Tabulate the density over a lattice plus the diagonal density."""
    if panel is not None:
        if panel not in DENSITY_PANELS:
            choices = sorted(DENSITY_PANELS)
            _fail(f"panel must be one of {choices}, got {panel}", EXIT_USAGE)
        p = DENSITY_PANELS[panel].params
    else:
        p = _params(family, alpha1, alpha2, alpha3, beta, gamma, theta)
    axis = _lattice(lattice)
    _emit(format_density_grid(density_grid(p, axis, axis)), out)


def _fit_reference(model: str, config: Config) -> ReproduceRow:
    ref = reference_fit(model)
    observations = load_dataset(
        DatasetSpec(scale=FOOTBALL_SCALE), tie_tol=config.tie_tol
    )
    report = em_fit(observations, ref.family, config=config)
    return ReproduceRow(ref, report, goodness_of_fit(report, observations))


@app.command()
def reproduce(
    jobs: int = typer.Option(
        1, "--jobs", "-j", help="Fit the models in this many processes"
    ),
    max_iter: Optional[int] = typer.Option(None, "--max-iter", help="EM iteration cap"),
    tol: Optional[float] = typer.Option(None, "--tol", help=_TOL_HELP),
    out: Optional[str] = typer.Option(None, "--out", "-o", help="Write the table here"),
) -> None:
    """Fit the six published sub-models to the scoring-time data side by side."""
    config = _run_config(max_iter, tol, None)
    models = [ref.model for ref in REFERENCE_FITS]

    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            rows = list(pool.map(_fit_reference, models, [config] * len(models)))
    else:
        rows = [_fit_reference(model, config) for model in models]

    _emit(format_reproduce_table(rows), out)
    if config.log_runs:
        for row in rows:
            context = {"model": row.reference.model}
            log_fit_result(row.report, row.gof, "reproduce", context)
    if not all(row.report.converged for row in rows):
        sys.exit(EXIT_NOT_CONVERGED)


@app.command()
def logs(
    n: int = typer.Option(20, "--number", "-n", help="Number of log entries to show"),
    clear: bool = typer.Option(False, "--clear", help="Clear all logs"),
) -> None:
    """Show recent fit logs."""
    if clear:
        removed = clear_logs()
        typer.echo(f"Removed {removed} log file(s).")
        return

    entries = get_recent_logs(n)
    if not entries:
        typer.echo("No logs found.")
        return

    typer.echo(
        f"{'Timestamp':<19}  {'Command':<9}  {'Family':<16}  {'loglik':>10}  {'AIC':>10}  Conv"
    )
    for entry in entries:
        ts = entry.get("ts", "unknown")
        try:
            ts = datetime.fromisoformat(ts.replace("Z", "+00:00")).strftime(
                "%Y-%m-%d %H:%M:%S"
            )
        except (ValueError, TypeError, AttributeError):
            pass
        loglik = entry.get("loglik")
        aic = entry.get("gof", {}).get("aic")
        converged = "✓" if entry.get("converged") else "✗"
        typer.echo(
            f"{ts:<19}  {entry.get('command', '?'):<9}  {entry.get('family', '?'):<16}  "
            f"{loglik if loglik is None else format(loglik, '.4f'):>10}  "
            f"{aic if aic is None else format(aic, '.4f'):>10}  {converged}"
        )


@app.command()
def config(
    show: bool = typer.Option(False, "--show", help="Show current configuration"),
    set_tol: Optional[float] = typer.Option(None, "--set-tol", help="Set EM tolerance"),
    set_max_iter: Optional[int] = typer.Option(
        None, "--set-max-iter", help="Set EM iteration cap"
    ),
    set_seed: Optional[int] = typer.Option(None, "--set-seed", help="Set default seed"),
    set_polish: Optional[bool] = typer.Option(
        None, "--set-polish/--unset-polish", help="Enable/disable the likelihood polish"
    ),
    set_log_runs: Optional[bool] = typer.Option(
        None, "--set-log-runs/--unset-log-runs", help="Enable/disable the run log"
    ),
) -> None:
    """Manage configuration."""
    current = get_config()

    if show:
        typer.echo("Current configuration:")
        for name, value in vars(current).items():
            typer.echo(f"  {name}: {value}")
        return

    updates: dict[str, Any] = {}
    if set_tol is not None:
        updates["tol"] = set_tol
    if set_max_iter is not None:
        updates["max_iter"] = set_max_iter
    if set_seed is not None:
        updates["seed"] = set_seed
    if set_polish is not None:
        updates["polish"] = set_polish
    if set_log_runs is not None:
        updates["log_runs"] = set_log_runs
    if not updates:
        typer.echo("Nothing to change; use --show to inspect the configuration.")
        return

    save_config(replace(current, **updates))
    for name, value in updates.items():
        typer.echo(f"{name} updated to {value}.")


def main() -> None:
    """Main entry point."""
    # Create default config on first run
    create_default_config()

    try:
        app(standalone_mode=False)
    except click.exceptions.UsageError as e:
        e.show()
        sys.exit(EXIT_USAGE)
    except click.exceptions.Abort:
        sys.exit(EXIT_USAGE)
    except BglfrpsError as e:
        typer.echo(f"✗ {e}", err=True)
        sys.exit(EXIT_DATA)


if __name__ == "__main__":
    main()
