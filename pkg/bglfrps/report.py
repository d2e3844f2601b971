"""Text and JSON renderings of fits, density grids and reproduction tables."""

from dataclasses import dataclass
from typing import Any, Optional

from .bglfrps import BglfrpsParams, DensityGrid
from .fitting import FitReport
from .gof import GofReport
from .reference import ReferenceFit
from .typing_ import Component

PARAMETER_NAMES = ("alpha1", "alpha2", "alpha3", "beta", "gamma", "theta")


def params_to_dict(p: BglfrpsParams) -> dict[str, Any]:
    b = p.base
    return {
        "family": p.family.spec,
        "alpha1": b.alpha1,
        "alpha2": b.alpha2,
        "alpha3": b.alpha3,
        "beta": b.beta,
        "gamma": b.gamma,
        "theta": None if p.family.is_degenerate else p.theta,
    }


def gof_to_dict(gof: GofReport) -> dict[str, Any]:
    out: dict[str, Any] = {
        "k": gof.k,
        "n": gof.n,
        "aic": gof.aic,
        "aicc": gof.aicc,
        "bic": gof.bic,
        "ks": {
            which.value: {"statistic": r.statistic, "p_value": r.p_value}
            for which, r in gof.ks.items()
        },
    }
    if gof.lrt is not None:
        out["lrt"] = {
            "statistic": gof.lrt.statistic,
            "df": gof.lrt.df,
            "p_value": gof.lrt.p_value,
            "nesting_violation": gof.lrt.nesting_violation,
        }
    return out


def fit_report_to_dict(
    report: FitReport, gof: Optional[GofReport] = None
) -> dict[str, Any]:
    """Stable-key document behind `--json` and the run log."""
    out: dict[str, Any] = {
        "family": report.family,
        "partition": {"m0": report.m0, "m1": report.m1, "m2": report.m2},
        "mle": params_to_dict(report.mle),
        "loglik": report.loglik,
        "iterations": report.iterations,
        "converged": report.converged,
        "polished": report.polished,
        "clamped": list(report.clamped),
        "n_params": report.n_params,
        "elapsed": report.elapsed,
        "loglik_trace": list(report.loglik_trace),
    }
    if gof is not None:
        out["gof"] = gof_to_dict(gof)
    return out


def _num(value: Optional[float]) -> str:
    return "-" if value is None else f"{value:.10g}"


def format_fit_report(report: FitReport, gof: Optional[GofReport] = None) -> str:
    """
    Flat `key: value` lines followed by a `trace:` block with one
    `iteration loglik` row per recorded iterate.
    """
    mle = params_to_dict(report.mle)
    lines = [
        f"family: {report.family}",
        f"m0: {report.m0}",
        f"m1: {report.m1}",
        f"m2: {report.m2}",
    ]
    lines += [f"{name}: {_num(mle[name])}" for name in PARAMETER_NAMES]
    lines += [
        f"loglik: {report.loglik:.10g}",
        f"iterations: {report.iterations}",
        f"converged: {str(report.converged).lower()}",
        f"polished: {str(report.polished).lower()}",
        f"clamped: {','.join(report.clamped) or 'none'}",
    ]
    if gof is not None:
        lines += [
            f"k: {gof.k}",
            f"aic: {gof.aic:.10g}",
            f"aicc: {gof.aicc:.10g}",
            f"bic: {gof.bic:.10g}",
        ]
        for which, r in gof.ks.items():
            key = which.value.lower()
            lines.append(f"ks_{key}: {r.statistic:.6f} ({r.p_value:.4f})")
        if gof.lrt is not None:
            lines.append(f"lrt: {gof.lrt.statistic:.6f} ({gof.lrt.p_value:.4f})")
    lines.append("trace:")
    lines += [f"  {i} {value:.10g}" for i, value in enumerate(report.loglik_trace)]
    return "\n".join(lines) + "\n"


def format_density_grid(grid: DensityGrid) -> str:
    """`y1<TAB>y2<TAB>f` rows over the lattice, then `y<TAB>f0` rows after `# diagonal`."""
    lines = ["# y1\ty2\tf"]
    for i, y1 in enumerate(grid.y1):
        for j, y2 in enumerate(grid.y2):
            lines.append(f"{y1:.6g}\t{y2:.6g}\t{grid.values[i, j]:.10g}")
    lines.append("# diagonal")
    lines.append("# y\tf0")
    for y, f0 in zip(grid.diagonal_y, grid.diagonal_values):
        lines.append(f"{y:.6g}\t{f0:.10g}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class ReproduceRow:
    reference: ReferenceFit
    report: FitReport
    gof: GofReport


def _row(label: str, ours: Optional[float], theirs: Optional[float]) -> str:
    if ours is None or theirs is None:
        delta = "-"
    else:
        delta = f"{ours - theirs:+.4f}"
    return f"  {label:<10} {_num(ours):>14} {_num(theirs):>14} {delta:>10}"


def format_reproduce_table(rows: list[ReproduceRow]) -> str:
    """Our value, the published value and their difference, model by model."""
    lines = []
    for row in rows:
        ref, report, gof = row.reference, row.report, row.gof
        mle = params_to_dict(report.mle)
        lines.append(
            f"{ref.model} ({report.family}) m0={report.m0} m1={report.m1} m2={report.m2}"
            f" converged={str(report.converged).lower()}"
        )
        lines.append(f"  {'statistic':<10} {'ours':>14} {'published':>14} {'delta':>10}")
        published = {
            "alpha1": ref.alpha1,
            "alpha2": ref.alpha2,
            "alpha3": ref.alpha3,
            "beta": ref.beta,
            "gamma": ref.gamma,
            "theta": ref.theta,
        }
        for name in PARAMETER_NAMES:
            lines.append(_row(name, mle[name], published[name]))
        lines.append(_row("loglik", report.loglik, ref.loglik))
        lines.append(_row("aic", gof.aic, ref.aic))
        lines.append(_row("aicc", gof.aicc, ref.aicc))
        lines.append(_row("bic", gof.bic, ref.bic))
        for which in Component:
            ours = gof.ks[which]
            stat, p = ref.ks[which]
            lines.append(_row(f"ks_{which.value.lower()}", ours.statistic, stat))
            lines.append(_row("  p-value", ours.p_value, p))
        # the published LRT row is printed, not regenerated
        lines.append(_row("lrt", None, ref.lrt))
        lines.append("")
    return "\n".join(lines)
