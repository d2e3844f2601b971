"""Univariate generalized linear failure rate (GLFR) distribution.

F(x) = (1 - exp(-beta x - gamma x^2 / 2))^alpha. The array-level helpers
take the shape as a separate argument so that shapes such as n * alpha or
alpha1 + alpha3 can be broadcast without building parameter objects.
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .typing_ import ArrayLike

LN2 = math.log(2.0)


@dataclass(frozen=True)
class GlfrParams:
    """Shape alpha, linear hazard beta and quadratic hazard gamma."""

    alpha: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        check_rates(self.beta, self.gamma)
        if not self.alpha > 0 or not math.isfinite(self.alpha):
            raise DomainError("alpha", self.alpha, "shape must be positive")


def check_rates(beta: float, gamma: float) -> None:
    """beta, gamma >= 0 and not both zero."""
    if not (beta >= 0 and math.isfinite(beta)):
        raise DomainError("beta", beta, "must be finite and nonnegative")
    if not (gamma >= 0 and math.isfinite(gamma)):
        raise DomainError("gamma", gamma, "must be finite and nonnegative")
    if beta + gamma <= 0:
        raise DomainError("beta+gamma", beta + gamma, "beta and gamma cannot both be 0")


def cumulative_hazard(x: ArrayLike, beta: float, gamma: float) -> np.ndarray:
    """beta x + gamma x^2 / 2."""
    x = np.asarray(x, dtype=float)
    with np.errstate(invalid="ignore"):
        h = beta * x + 0.5 * gamma * x * x
    return np.where(np.isposinf(x), np.inf, h)


def log_base_cdf(x: ArrayLike, beta: float, gamma: float) -> np.ndarray:
    """Q(x) = log(1 - exp(-H(x))), the log cdf for alpha = 1."""
    h = cumulative_hazard(x, beta, gamma)
    with np.errstate(divide="ignore", over="ignore", invalid="ignore"):
        return np.where(
            h > LN2, np.log1p(-np.exp(-h)), np.log(-np.expm1(-np.minimum(h, LN2)))
        )


def log_base_density(x: ArrayLike, beta: float, gamma: float) -> np.ndarray:
    """log((beta + gamma x) exp(-H(x))), -inf for x <= 0."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(beta + gamma * x) - cumulative_hazard(x, beta, gamma)
    return np.where(x > 0, out, -np.inf)


def log_cdf(x: ArrayLike, alpha: ArrayLike, beta: float, gamma: float) -> np.ndarray:
    q = log_base_cdf(x, beta, gamma)
    with np.errstate(invalid="ignore"):
        return np.where(np.asarray(x) > 0, alpha * q, -np.inf)


def log_density(
    x: ArrayLike, alpha: ArrayLike, beta: float, gamma: float
) -> np.ndarray:
    """log f_G(x; alpha), -inf for x <= 0."""
    x = np.asarray(x, dtype=float)
    q = log_base_cdf(x, beta, gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        out = np.log(alpha) + log_base_density(x, beta, gamma) + (alpha - 1.0) * q
    return np.where(x > 0, out, -np.inf)


def quantile(u: ArrayLike, alpha: ArrayLike, beta: float, gamma: float) -> np.ndarray:
    """Inverse cdf without argument checks."""
    u = np.asarray(u, dtype=float)
    with np.errstate(divide="ignore"):
        t = -np.log1p(-(u ** (1.0 / np.asarray(alpha, dtype=float))))
    # 2t / (beta + sqrt(beta^2 + 2 gamma t)) is (-beta + sqrt(...)) / gamma
    # without the cancellation, and reduces to t / beta when gamma = 0
    return 2.0 * t / (beta + np.sqrt(beta * beta + 2.0 * gamma * t))


def as_scalar(value: np.ndarray) -> ArrayLike:
    return float(value) if np.ndim(value) == 0 else value


def glfr_cdf(p: GlfrParams, x: ArrayLike) -> ArrayLike:
    """
    (1 - exp(-beta x - gamma x^2 / 2))^alpha.

    Raises:
        DomainError: If any x is negative
    """
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(np.isnan(x)):
        raise DomainError("x", as_scalar(x), "GLFR cdf needs x >= 0")
    return as_scalar(np.exp(log_cdf(x, p.alpha, p.beta, p.gamma)))


def glfr_logpdf(p: GlfrParams, x: ArrayLike) -> ArrayLike:
    """log density; -inf for x <= 0."""
    return as_scalar(log_density(x, p.alpha, p.beta, p.gamma))


def glfr_pdf(p: GlfrParams, x: ArrayLike) -> ArrayLike:
    """alpha (beta + gamma x) e^{-H} (1 - e^{-H})^(alpha - 1); 0 for x <= 0."""
    return as_scalar(np.exp(log_density(x, p.alpha, p.beta, p.gamma)))


def glfr_quantile(p: GlfrParams, u: ArrayLike) -> ArrayLike:
    """
    Inverse of glfr_cdf.

    Raises:
        DomainError: If any u is outside (0, 1)
    """
    u = np.asarray(u, dtype=float)
    if np.any(~((u > 0) & (u < 1))):
        raise DomainError("u", as_scalar(u), "probability must lie in (0, 1)")
    return as_scalar(quantile(u, p.alpha, p.beta, p.gamma))


def uniforms(rng: np.random.Generator, size: Optional[int] = None) -> ArrayLike:
    """Uniform draws on (0, 1), never exactly 0."""
    return rng.uniform(np.finfo(float).tiny, 1.0, size)


def glfr_sample(
    p: GlfrParams, rng: np.random.Generator, size: Optional[int] = None
) -> ArrayLike:
    """Inverse-transform draws from GLFR(alpha, beta, gamma)."""
    return as_scalar(quantile(uniforms(rng, size), p.alpha, p.beta, p.gamma))
