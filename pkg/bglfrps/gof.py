"""Model selection and goodness-of-fit statistics."""

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy.special import gammaincc, kolmogorov

from .bglfrps import marginal
from .errors import DegenerateDataError, DomainError
from .fitting import BivariateSample, FitReport
from .glfrps import glfrps_cdf
from .typing_ import Component, UnivariateCdf


@dataclass(frozen=True)
class InformationCriteria:
    aic: float
    aicc: float
    bic: float


@dataclass(frozen=True)
class KsResult:
    statistic: float
    p_value: float
    n: int


@dataclass(frozen=True)
class LrtResult:
    statistic: float
    df: int
    p_value: float
    nesting_violation: bool = False


@dataclass
class GofReport:
    """Information criteria and K-S tests of one fitted model."""

    k: int
    n: int
    criteria: InformationCriteria
    ks: dict[Component, KsResult] = field(default_factory=dict)
    lrt: Optional[LrtResult] = None

    @property
    def aic(self) -> float:
        return self.criteria.aic

    @property
    def aicc(self) -> float:
        return self.criteria.aicc

    @property
    def bic(self) -> float:
        return self.criteria.bic


def information_criteria(loglik: float, k: int, n: int) -> InformationCriteria:
    """
    AIC = -2 l + 2k, AICC = AIC + 2k(k + 1)/(n - k - 1), BIC = -2 l + k log n.

    Raises:
        DomainError: If n < 1, k < 0, or n <= k + 1 and the AICC correction
            is undefined
    """
    if n < 1:
        raise DomainError("n", n, "need at least one observation")
    if k < 0:
        raise DomainError("k", k, "parameter count cannot be negative")
    if k > 0 and n <= k + 1:
        raise DomainError("n", n, f"AICC needs more than {k + 1} observations")
    aic = -2.0 * loglik + 2.0 * k
    correction = 2.0 * k * (k + 1) / (n - k - 1) if k > 0 else 0.0
    return InformationCriteria(aic, aic + correction, -2.0 * loglik + k * math.log(n))


def empirical_cdf(data: Sequence[float]) -> Callable[[float], float]:
    """Right-continuous step function stepping by 1/n at each sorted point."""
    values = np.sort(np.asarray(data, dtype=float))
    n = values.size

    def ecdf(x: float) -> float:
        return float(np.searchsorted(values, x, side="right")) / n

    return ecdf


def ks_test(data: Sequence[float], cdf: UnivariateCdf) -> KsResult:
    """
    One-sample Kolmogorov-Smirnov distance with its asymptotic p-value.

    Raises:
        DegenerateDataError: If data is empty
    """
    x = np.sort(np.asarray(data, dtype=float))
    n = x.size
    if n == 0:
        raise DegenerateDataError("K-S test needs at least one observation")
    f = np.asarray(cdf(x), dtype=float)
    i = np.arange(1, n + 1)
    statistic = float(max(np.max(i / n - f), np.max(f - (i - 1) / n)))
    p_value = float(np.clip(kolmogorov(math.sqrt(n) * statistic), 0.0, 1.0))
    return KsResult(statistic, p_value, n)


def lrt(loglik_null: float, loglik_alt: float, df: int) -> LrtResult:
    """
    Likelihood-ratio statistic 2(l_alt - l_null) with its chi-square p-value.

    A negative statistic means the models are not nested as claimed; it is
    reported as is with p = 1 and the nesting_violation flag set.
    """
    if df < 1:
        raise DomainError("df", df, "degrees of freedom must be positive")
    statistic = 2.0 * (loglik_alt - loglik_null)
    if statistic < 0:
        return LrtResult(statistic, df, 1.0, nesting_violation=True)
    return LrtResult(statistic, df, float(gammaincc(df / 2.0, statistic / 2.0)))


def _component_data(sample: BivariateSample, which: Component) -> np.ndarray:
    if which is Component.Y1:
        return sample.y1
    if which is Component.Y2:
        return sample.y2
    return sample.maxima


def goodness_of_fit(
    report: FitReport,
    sample: BivariateSample,
    null_loglik: Optional[float] = None,
    df: int = 1,
) -> GofReport:
    """
    Information criteria of a fit plus K-S tests of Y1, Y2 and max(Y1, Y2)
    against the fitted marginal laws.

    If null_loglik is given the report also carries the LRT of the fit
    against that nested model.
    """
    ks = {}
    for which in Component:
        law = marginal(report.mle, which)
        ks[which] = ks_test(
            _component_data(sample, which), lambda x, law=law: glfrps_cdf(law, x)
        )
    return GofReport(
        k=report.n_params,
        n=sample.m,
        criteria=information_criteria(report.loglik, report.n_params, sample.m),
        ks=ks,
        lrt=lrt(null_loglik, report.loglik, df) if null_loglik is not None else None,
    )
