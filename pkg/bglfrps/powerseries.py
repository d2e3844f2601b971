"""Zero-truncated power-series laws for the latent count N.

A family is fixed by its coefficients a_n >= 0 (n >= 1) and the series
C(theta) = sum a_n theta^n, finite on (0, s). All evaluators accept numpy
arrays for the argument of C so the bivariate densities can be vectorized
over a whole sample.
"""

import math
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import NamedTuple, Optional, Union

import numpy as np
from numpy.polynomial import polynomial as npoly
from scipy.special import gammaln

from .errors import DomainError
from .search import brent_root
from .typing_ import ArrayLike, FamilyName

THETA_FLOOR = 1e-8
THETA_CEILING = 1e12
SERIES_TOL = 1e-12
SAMPLING_TOL = 1e-15
SERIES_CAP = 100_000


class CDerivatives(NamedTuple):
    """C and its first three derivatives at one or more points."""

    c: ArrayLike
    c1: ArrayLike
    c2: ArrayLike
    c3: ArrayLike


class ThetaSolution(NamedTuple):
    """Root of the mean-matching equation."""

    theta: float
    clamped: bool


def _log_comb(n: np.ndarray, k: np.ndarray) -> np.ndarray:
    """log binomial(n, k), -inf outside 0 <= k <= n."""
    n = np.asarray(n, dtype=float)
    k = np.asarray(k, dtype=float)
    valid = (k >= 0) & (k <= n)
    with np.errstate(invalid="ignore"):
        out = gammaln(n + 1) - gammaln(k + 1) - gammaln(n - k + 1)
    return np.where(valid, out, -np.inf)


class PowerSeriesFamily(ABC):
    """A zero-truncated power-series mixing law."""

    name: FamilyName

    @property
    def support_bound(self) -> float:
        """Radius s of the interval (0, s) on which C is finite."""
        return math.inf

    @property
    def max_degree(self) -> Optional[int]:
        """Largest n with a_n > 0, or None for infinite support."""
        return None

    @property
    def min_index(self) -> int:
        """Smallest n with a_n > 0."""
        return 1

    @property
    def is_degenerate(self) -> bool:
        """True when N == 1 almost surely, i.e. C(theta) is proportional to theta."""
        return self.max_degree == 1

    @property
    @abstractmethod
    def spec(self) -> str:
        """Family selection string understood by parse_family."""

    @abstractmethod
    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        """log a_n, -inf where a_n == 0."""

    @abstractmethod
    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        """C, C', C'', C''' without domain checks."""

    def coefficient(self, n: ArrayLike) -> np.ndarray:
        return np.exp(self.log_coefficient(n))

    def derivatives(self, z: ArrayLike) -> CDerivatives:
        """C, C', C'', C''' at z (scalar or array), z in [0, s)."""
        z = np.asarray(z, dtype=float)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return self._derivatives(z)

    def c(self, z: ArrayLike) -> np.ndarray:
        return self.derivatives(z).c

    def log_derivative(self, theta: float) -> float:
        """C'(theta) / C(theta)."""
        d = self.derivatives(theta)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            return float(d.c1 / d.c)

    def check_theta(self, theta: float) -> float:
        """Validate theta in the open interval (0, s)."""
        theta = float(theta)
        if not (0.0 < theta < self.support_bound) or math.isnan(theta):
            raise DomainError(
                "theta", theta, f"must lie in (0, {self.support_bound}) for {self.spec}"
            )
        return theta

    def __str__(self) -> str:
        return self.spec


@dataclass(frozen=True)
class Geometric(PowerSeriesFamily):
    name = FamilyName.GEOMETRIC

    @property
    def support_bound(self) -> float:
        return 1.0

    @property
    def spec(self) -> str:
        return "geometric"

    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return np.where(n >= 1, 0.0, -np.inf)

    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        w = 1.0 / (1.0 - z)
        return CDerivatives(z * w, w**2, 2.0 * w**3, 6.0 * w**4)


@dataclass(frozen=True)
class Poisson(PowerSeriesFamily):
    name = FamilyName.POISSON

    @property
    def spec(self) -> str:
        return "poisson"

    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return np.where(n >= 1, -gammaln(n + 1), -np.inf)

    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        e = np.exp(z)
        return CDerivatives(np.expm1(z), e, e, e)

    def log_derivative(self, theta: float) -> float:
        # e^theta / (e^theta - 1) without overflowing for large theta
        return 1.0 / -math.expm1(-theta)


@dataclass(frozen=True)
class Logarithmic(PowerSeriesFamily):
    name = FamilyName.LOGARITHMIC

    @property
    def support_bound(self) -> float:
        return 1.0

    @property
    def spec(self) -> str:
        return "logarithmic"

    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(n >= 1, -np.log(n), -np.inf)

    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        w = 1.0 / (1.0 - z)
        return CDerivatives(-np.log1p(-z), w, w**2, 2.0 * w**3)


@dataclass(frozen=True)
class Binomial(PowerSeriesFamily):
    """Truncated binomial with a fixed number of replicas k."""

    k: int = 10
    name = FamilyName.BINOMIAL

    def __post_init__(self) -> None:
        if int(self.k) != self.k or self.k < 1:
            raise DomainError("k", self.k, "binomial k must be a positive integer")

    @property
    def max_degree(self) -> Optional[int]:
        return int(self.k)

    @property
    def spec(self) -> str:
        return f"binomial:{self.k}"

    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return np.where(n >= 1, _log_comb(self.k, n), -np.inf)

    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        k = self.k
        w = 1.0 + z
        return CDerivatives(
            np.expm1(k * np.log1p(z)),
            k * w ** (k - 1),
            k * (k - 1) * w ** (k - 2),
            k * (k - 1) * (k - 2) * w ** (k - 3),
        )


@dataclass(frozen=True)
class NegativeBinomial(PowerSeriesFamily):
    """Truncated negative binomial with a fixed number of successes k."""

    k: int = 2
    name = FamilyName.NEGATIVE_BINOMIAL

    def __post_init__(self) -> None:
        if int(self.k) != self.k or self.k < 1:
            raise DomainError(
                "k", self.k, "negative binomial k must be a positive integer"
            )

    @property
    def support_bound(self) -> float:
        return 1.0

    @property
    def min_index(self) -> int:
        return int(self.k)

    @property
    def spec(self) -> str:
        return f"negbinomial:{self.k}"

    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        n = np.asarray(n, dtype=float)
        return np.where(n >= 1, _log_comb(n - 1, self.k - 1), -np.inf)

    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        k = self.k
        w = 1.0 / (1.0 - z)
        # z**(k-2) and z**(k-3) are folded into the polynomial factors for small k
        if k == 1:
            c2_poly = np.full_like(z, 2.0)
            c3_poly = np.full_like(z, 6.0)
        elif k == 2:
            c2_poly = k * (k + 2.0 * z - 1.0)
            c3_poly = k * (6.0 + 6.0 * z)
        else:
            c2_poly = k * (k + 2.0 * z - 1.0) * z ** (k - 2)
            c3_poly = (
                k
                * (k * k + 6.0 * k * z + 6.0 * z * z - 3.0 * k - 6.0 * z + 2.0)
                * z ** (k - 3)
            )
        return CDerivatives(
            (z * w) ** k,
            k * z ** (k - 1) * w ** (k + 1),
            c2_poly * w ** (k + 2),
            c3_poly * w ** (k + 3),
        )


@dataclass(frozen=True)
class CustomPolynomial(PowerSeriesFamily):
    """C(theta) = sum_{n=1}^{d} a_n theta^n with user coefficients (a_1, ..., a_d)."""

    coefficients: tuple[float, ...] = (1.0,)
    name = FamilyName.CUSTOM_POLYNOMIAL

    def __post_init__(self) -> None:
        coefs = tuple(float(a) for a in self.coefficients)
        if not coefs or any(a < 0 or not math.isfinite(a) for a in coefs):
            raise DomainError(
                "coefficients", self.coefficients, "must be finite and nonnegative"
            )
        if all(a == 0 for a in coefs):
            raise DomainError(
                "coefficients", self.coefficients, "at least one must be positive"
            )
        # trailing zeros carry no information
        while coefs[-1] == 0:
            coefs = coefs[:-1]
        object.__setattr__(self, "coefficients", coefs)

    @property
    def max_degree(self) -> Optional[int]:
        return len(self.coefficients)

    @property
    def min_index(self) -> int:
        return next(i + 1 for i, a in enumerate(self.coefficients) if a > 0)

    @property
    def spec(self) -> str:
        return "poly:" + ",".join(f"{a:g}" for a in self.coefficients)

    def log_coefficient(self, n: ArrayLike) -> np.ndarray:
        n = np.asarray(n)
        table = np.concatenate(([0.0], np.asarray(self.coefficients)))
        idx = np.clip(n.astype(int), 0, len(table) - 1)
        a = np.where((n >= 1) & (n < len(table)), table[idx], 0.0)
        with np.errstate(divide="ignore"):
            return np.log(a)

    def _derivatives(self, z: np.ndarray) -> CDerivatives:
        coefs = np.concatenate(([0.0], np.asarray(self.coefficients)))
        d1 = npoly.polyder(coefs, 1)
        d2 = npoly.polyder(coefs, 2) if len(coefs) > 2 else np.zeros(1)
        d3 = npoly.polyder(coefs, 3) if len(coefs) > 3 else np.zeros(1)
        return CDerivatives(
            npoly.polyval(z, coefs),
            npoly.polyval(z, d1),
            npoly.polyval(z, d2),
            npoly.polyval(z, d3),
        )


DEGENERATE = CustomPolynomial((1.0,))

# C(theta) = theta + theta^20, the density-figure family
FIGURE_FAMILY = CustomPolynomial((1.0,) + (0.0,) * 18 + (1.0,))


def parse_family(spec: str) -> PowerSeriesFamily:
    """
    Parse a family selection string.

    Grammar: geometric | poisson | logarithmic | binomial[:k] |
    negbinomial[:k] | poly:c1,c2,... | degenerate

    Raises:
        DomainError: If the string is not a valid family
    """
    text = spec.strip().lower()
    head, _, tail = text.partition(":")
    try:
        if head == "geometric" and not tail:
            return Geometric()
        if head == "poisson" and not tail:
            return Poisson()
        if head in ("logarithmic", "log") and not tail:
            return Logarithmic()
        if head == "binomial":
            return Binomial(int(tail) if tail else 10)
        if head in ("negbinomial", "negativebinomial", "nb"):
            return NegativeBinomial(int(tail) if tail else 2)
        if head in ("poly", "polynomial") and tail:
            return CustomPolynomial(tuple(float(c) for c in tail.split(",")))
        if head in ("degenerate", "bglfr") and not tail:
            return DEGENERATE
    except ValueError as e:
        if isinstance(e, DomainError):
            raise
        raise DomainError("family", spec, f"malformed family parameter: {e}") from None
    raise DomainError(
        "family",
        spec,
        "expected geometric | poisson | logarithmic | binomial:k | "
        "negbinomial:k | poly:c1,c2,...",
    )


def c_derivatives(family: PowerSeriesFamily, theta: float) -> CDerivatives:
    """
    C, C', C'', C''' at theta.

    Raises:
        DomainError: If theta is outside (0, s) or the values overflow
    """
    theta = family.check_theta(theta)
    values = family.derivatives(theta)
    if not all(math.isfinite(float(v)) for v in values):
        raise DomainError("theta", theta, f"C derivatives overflow for {family.spec}")
    return CDerivatives(*(float(v) for v in values))


def _mean(family: PowerSeriesFamily, theta: float) -> float:
    return theta * family.log_derivative(theta)


def log_pmf(
    family: PowerSeriesFamily, theta: float, n: Union[int, np.ndarray]
) -> np.ndarray:
    """log P(N = n); no argument checks."""
    n = np.asarray(n)
    with np.errstate(divide="ignore"):
        log_c = np.log(family.c(theta))
    return family.log_coefficient(n) + n * math.log(theta) - log_c


def pmf(
    family: PowerSeriesFamily, theta: float, n: Union[int, np.ndarray]
) -> ArrayLike:
    """
    P(N = n) = a_n theta^n / C(theta) for n >= 1.

    Raises:
        DomainError: If n < 1 or theta is outside (0, s)
    """
    theta = family.check_theta(theta)
    n_arr = np.asarray(n)
    if np.any(n_arr < 1) or np.any(n_arr != np.floor(n_arr)):
        raise DomainError("n", n, "count must be a positive integer")
    p = np.exp(log_pmf(family, theta, n_arr))
    return float(p) if p.ndim == 0 else p


def pmf_table(
    family: PowerSeriesFamily,
    theta: float,
    tol: float = SERIES_TOL,
    cap: int = SERIES_CAP,
) -> tuple[np.ndarray, np.ndarray]:
    """
    Support points and probabilities up to the truncation index.

    Finite families stop at their degree. Infinite families stop at the
    first n past the mode whose probability falls below tol, or at cap.
    """
    theta = family.check_theta(theta)
    degree = family.max_degree
    last = degree if degree is not None else cap
    n = np.arange(1, last + 1)
    p = np.exp(log_pmf(family, theta, n))
    if degree is None:
        mode = int(np.argmax(p))
        below = np.nonzero(p[mode:] < tol)[0]
        if below.size:
            stop = mode + int(below[0]) + 1
            n, p = n[:stop], p[:stop]
    return n, p


def mean(family: PowerSeriesFamily, theta: float) -> float:
    """E N = theta C'(theta) / C(theta)."""
    theta = family.check_theta(theta)
    value = _mean(family, theta)
    if not math.isfinite(value):
        raise DomainError("theta", theta, f"mean overflows for {family.spec}")
    return value


def solve_theta_for_mean(
    family: PowerSeriesFamily, target_mean: float
) -> ThetaSolution:
    """
    Solve theta C'(theta) / C(theta) = target_mean.

    The mean is increasing in theta, so the root is unique. Targets at or
    below the smallest attainable mean return the lower clamp; targets
    beyond the supremum of a bounded mean return the upper clamp.

    Raises:
        DomainError: If target_mean < 1 or is not finite
    """
    target = float(target_mean)
    if not math.isfinite(target) or target < 1.0:
        raise DomainError("target_mean", target_mean, "mean of N must be >= 1")

    lo = THETA_FLOOR
    if target <= _mean(family, lo) + 1e-12:
        return ThetaSolution(lo, True)

    s = family.support_bound
    if math.isfinite(s):
        hi = s - THETA_FLOOR
        if _mean(family, hi) < target:
            return ThetaSolution(hi, True)
    else:
        hi = 1.0
        while True:
            value = _mean(family, hi)
            if not math.isfinite(value) or hi >= THETA_CEILING:
                return ThetaSolution(lo if not math.isfinite(value) else hi, True)
            if value >= target:
                break
            lo, hi = hi, 2.0 * hi

    root = brent_root(lambda t: _mean(family, t) - target, (lo, hi))
    return ThetaSolution(root, False)


def sample_n(
    family: PowerSeriesFamily,
    theta: float,
    rng: np.random.Generator,
    size: Optional[int] = None,
) -> Union[int, np.ndarray]:
    """Draw N by inverting the cumulative pmf (tail cutoff 1e-15)."""
    n, p = pmf_table(family, theta, tol=SAMPLING_TOL)
    cdf = np.cumsum(p)
    u = rng.random(size)
    idx = np.minimum(np.searchsorted(cdf, u, side="right"), len(n) - 1)
    draws = n[idx]
    return int(draws) if size is None else draws
