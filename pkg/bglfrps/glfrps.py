"""Univariate GLFR-power series distribution.

The law of the maximum of N i.i.d. GLFR variables with N power-series
distributed: F(x) = C(theta F_G(x)) / C(theta). It is the marginal law of
each component of a BGLFRPS pair and of their maximum.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError
from .glfr import GlfrParams, as_scalar, log_cdf, log_density
from .powerseries import PowerSeriesFamily
from .typing_ import ArrayLike


@dataclass(frozen=True)
class GlfrpsParams:
    glfr: GlfrParams
    family: PowerSeriesFamily
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", self.family.check_theta(self.theta))


def glfrps_cdf(p: GlfrpsParams, x: ArrayLike) -> ArrayLike:
    """
    C(theta F_G(x)) / C(theta).

    Raises:
        DomainError: If any x is negative
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("x", as_scalar(x), "GLFRPS cdf needs x >= 0")
    g = p.glfr
    z = p.theta * np.exp(log_cdf(x, g.alpha, g.beta, g.gamma))
    return as_scalar(p.family.c(z) / p.family.c(p.theta))


def glfrps_logpdf(p: GlfrpsParams, x: ArrayLike) -> ArrayLike:
    """log(theta f_G(x) C'(theta F_G(x)) / C(theta)); -inf for x <= 0."""
    g = p.glfr
    z = p.theta * np.exp(log_cdf(x, g.alpha, g.beta, g.gamma))
    with np.errstate(divide="ignore", invalid="ignore"):
        out = (
            math.log(p.theta)
            - math.log(float(p.family.c(p.theta)))
            + log_density(x, g.alpha, g.beta, g.gamma)
            + np.log(p.family.derivatives(z).c1)
        )
    return as_scalar(np.where(np.asarray(x) > 0, out, -np.inf))


def glfrps_pdf(p: GlfrpsParams, x: ArrayLike) -> ArrayLike:
    return as_scalar(np.exp(glfrps_logpdf(p, x)))
