"""Bivariate GLFR distribution built by trivariate reduction.

Y1 = max(Z1, Z3), Y2 = max(Z2, Z3) with independent Z_i ~ GLFR(alpha_i)
sharing beta and gamma. Its densities are the C(theta) = theta member of the
compound class and live in the bglfrps module.
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np

from .errors import DomainError
from .glfr import as_scalar, check_rates, log_cdf, quantile, uniforms
from .typing_ import ArrayLike


@dataclass(frozen=True)
class BglfrParams:
    alpha1: float
    alpha2: float
    alpha3: float
    beta: float
    gamma: float

    def __post_init__(self) -> None:
        for name in ("alpha1", "alpha2"):
            value = getattr(self, name)
            if not value > 0 or not math.isfinite(value):
                raise DomainError(name, value, "shape must be positive")
        if not self.alpha3 >= 0 or not math.isfinite(self.alpha3):
            raise DomainError("alpha3", self.alpha3, "shape must be nonnegative")
        check_rates(self.beta, self.gamma)

    @property
    def alpha_sum(self) -> float:
        return self.alpha1 + self.alpha2 + self.alpha3

    def scaled(self, c: float) -> "BglfrParams":
        """Shapes multiplied by c: the law of the componentwise max of c pairs."""
        return BglfrParams(
            c * self.alpha1, c * self.alpha2, c * self.alpha3, self.beta, self.gamma
        )


def log_bglfr_cdf(
    y1: ArrayLike,
    y2: ArrayLike,
    alpha1: ArrayLike,
    alpha2: ArrayLike,
    alpha3: ArrayLike,
    beta: float,
    gamma: float,
) -> np.ndarray:
    """log F_BG(y1, y2) with broadcastable shapes; no argument checks."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    lower = log_cdf(y1, alpha1 + alpha3, beta, gamma) + log_cdf(y2, alpha2, beta, gamma)
    upper = log_cdf(y1, alpha1, beta, gamma) + log_cdf(y2, alpha2 + alpha3, beta, gamma)
    return np.where(y1 <= y2, lower, upper)


def check_pair(y1: ArrayLike, y2: ArrayLike) -> tuple[np.ndarray, np.ndarray]:
    """Both coordinates >= 0."""
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    for name, y in (("y1", y1), ("y2", y2)):
        if np.any(y < 0) or np.any(np.isnan(y)):
            raise DomainError(name, as_scalar(y), "coordinates must be >= 0")
    return y1, y2


def bglfr_cdf(p: BglfrParams, y1: ArrayLike, y2: ArrayLike) -> ArrayLike:
    """
    F_G(y1; a1 + a3) F_G(y2; a2) if y1 <= y2, else F_G(y1; a1) F_G(y2; a2 + a3).

    Raises:
        DomainError: If a coordinate is negative
    """
    y1, y2 = check_pair(y1, y2)
    return as_scalar(
        np.exp(
            log_bglfr_cdf(y1, y2, p.alpha1, p.alpha2, p.alpha3, p.beta, p.gamma)
        )
    )


def draw_pairs(
    alpha1: ArrayLike,
    alpha2: ArrayLike,
    alpha3: ArrayLike,
    beta: float,
    gamma: float,
    rng: np.random.Generator,
    size: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Trivariate-reduction draws; ties are exact when Z3 exceeds Z1 and Z2."""
    z1 = quantile(uniforms(rng, size), alpha1, beta, gamma)
    z2 = quantile(uniforms(rng, size), alpha2, beta, gamma)
    if np.all(np.asarray(alpha3) == 0):
        return z1, z2
    z3 = quantile(uniforms(rng, size), alpha3, beta, gamma)
    # alpha3 == 0 entries have z3 == 0 and never win the maximum
    return np.maximum(z1, z3), np.maximum(z2, z3)


def bglfr_sample(
    p: BglfrParams, rng: np.random.Generator, size: Optional[int] = None
) -> Union[tuple[float, float], np.ndarray]:
    """
    Draw (max(Z1, Z3), max(Z2, Z3)).

    Returns:
        One (y1, y2) tuple, or an array of shape (size, 2)
    """
    y1, y2 = draw_pairs(
        p.alpha1, p.alpha2, p.alpha3, p.beta, p.gamma, rng, 1 if size is None else size
    )
    if size is None:
        return float(y1[0]), float(y2[0])
    return np.column_stack((y1, y2))


def tie_probability(p: BglfrParams) -> float:
    """P(Y1 = Y2) = a3 / (a1 + a2 + a3)."""
    return p.alpha3 / p.alpha_sum


def lower_probability(p: BglfrParams) -> float:
    """P(Y1 < Y2) = a2 / (a1 + a2 + a3): Z2 is the largest of the three."""
    return p.alpha2 / p.alpha_sum
