"""Bivariate GLFR-power series (BGLFRPS) distribution.

(Y1, Y2) is the componentwise maximum of N i.i.d. BGLFR pairs, N drawn from a
zero-truncated power-series law. The distribution has an absolutely continuous
part off the diagonal and a singular part on y1 == y2.

Every density is accumulated in log space. Given the latent A = F_BG(y1, y2)
and z = theta * A, the two off-diagonal densities share the factor
z C''(z) + C'(z) and the diagonal density uses C'(z).
"""

import math
from dataclasses import dataclass
from typing import Optional, Union

import numpy as np
from numpy.polynomial import legendre
from scipy import integrate
from scipy.special import xlogy

from .bglfr import BglfrParams, check_pair, draw_pairs, log_bglfr_cdf
from .errors import DomainError, UndefinedConditionalError
from .glfr import GlfrParams, as_scalar, log_cdf, quantile
from .glfr import log_density as glfr_log_density
from .glfrps import GlfrpsParams
from .powerseries import (
    DEGENERATE,
    SERIES_TOL,
    PowerSeriesFamily,
    mean,
    pmf_table,
    sample_n,
)
from .typing_ import ArrayLike, Component, Region

# upper integration limit sits at this tail probability of max(Y1, Y2)
MASS_TAIL = 1e-10
# Gauss-Legendre order across each triangle in total_mass
MASS_NODES = 64


@dataclass(frozen=True)
class BglfrpsParams:
    base: BglfrParams
    family: PowerSeriesFamily
    theta: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "theta", self.family.check_theta(self.theta))

    @classmethod
    def from_bglfr(cls, base: BglfrParams) -> "BglfrpsParams":
        """The BGLFR law as the C(theta) = theta member of the class."""
        return cls(base, DEGENERATE, 1.0)

    @property
    def log_c_theta(self) -> float:
        return math.log(float(self.family.c(self.theta)))


@dataclass(frozen=True)
class JointDensityValue:
    """
    Density at one point.

    Lower and Upper values are densities w.r.t. planar Lebesgue measure,
    Diagonal values w.r.t. length on the line y1 == y2.
    """

    region: Region
    value: float


@dataclass(frozen=True)
class SplitResult:
    """Absolutely continuous and singular parts at one point with their weights."""

    absolute: float
    singular: float
    absolute_weight: float
    singular_weight: float


@dataclass(frozen=True)
class MassBreakdown:
    lower: float
    upper: float
    diagonal: float

    @property
    def total(self) -> float:
        return self.lower + self.upper + self.diagonal


def region_of(y1: float, y2: float) -> Region:
    """Exact comparison; tolerant tie detection is the caller's job."""
    if y1 < y2:
        return Region.LOWER
    if y1 > y2:
        return Region.UPPER
    return Region.DIAGONAL


def _branch_shapes(
    b: BglfrParams, y1: np.ndarray, y2: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Shapes of the (y1, y2) factors: (a1 + a3, a2) when y1 <= y2, else (a1, a2 + a3)."""
    le = y1 <= y2
    return (
        np.where(le, b.alpha1 + b.alpha3, b.alpha1),
        np.where(le, b.alpha2, b.alpha2 + b.alpha3),
    )


def latent_argument(p: BglfrpsParams, y1: ArrayLike, y2: ArrayLike) -> np.ndarray:
    """z = theta * F_BG(y1, y2), the argument of C in every formula."""
    b = p.base
    return p.theta * np.exp(
        log_bglfr_cdf(y1, y2, b.alpha1, b.alpha2, b.alpha3, b.beta, b.gamma)
    )


def log_ac_density(p: BglfrpsParams, y1: ArrayLike, y2: ArrayLike) -> np.ndarray:
    """
    log f1 (y1 <= y2) or log f2 (y1 > y2).

    Points on the diagonal get the f1 formula, which is what density lattices
    show; use log_density for region-correct values.
    """
    b = p.base
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    s1, s2 = _branch_shapes(b, y1, y2)
    z = p.theta * np.exp(
        log_cdf(y1, s1, b.beta, b.gamma) + log_cdf(y2, s2, b.beta, b.gamma)
    )
    d = p.family.derivatives(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (
            math.log(p.theta)
            - p.log_c_theta
            + glfr_log_density(y1, s1, b.beta, b.gamma)
            + glfr_log_density(y2, s2, b.beta, b.gamma)
            + np.log(z * d.c2 + d.c1)
        )


def log_singular_density(p: BglfrpsParams, y: ArrayLike) -> np.ndarray:
    """log f0(y) = log(theta a3 / (C(theta) S) f_G(y; S) C'(theta F_G(y; S))), S = a1 + a2 + a3."""
    b = p.base
    total = b.alpha_sum
    z = p.theta * np.exp(log_cdf(y, total, b.beta, b.gamma))
    with np.errstate(divide="ignore", invalid="ignore"):
        return (
            np.log(p.theta * b.alpha3 / total)
            - p.log_c_theta
            + glfr_log_density(y, total, b.beta, b.gamma)
            + np.log(p.family.derivatives(z).c1)
        )


def log_density(p: BglfrpsParams, y1: ArrayLike, y2: ArrayLike) -> np.ndarray:
    """
    Region-dispatched log density over arrays: log f0 where y1 == y2 exactly,
    log f1 / log f2 elsewhere, -inf where a coordinate is <= 0.
    """
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    out = np.where(y1 == y2, log_singular_density(p, y1), log_ac_density(p, y1, y2))
    return np.where((y1 > 0) & (y2 > 0), out, -np.inf)


def joint_cdf(p: BglfrpsParams, y1: ArrayLike, y2: ArrayLike) -> ArrayLike:
    """
    C(theta F_BG(y1, y2)) / C(theta).

    Raises:
        DomainError: If a coordinate is negative
    """
    y1, y2 = check_pair(y1, y2)
    z = latent_argument(p, y1, y2)
    return as_scalar(p.family.c(z) / float(p.family.c(p.theta)))


def joint_pdf(p: BglfrpsParams, y1: float, y2: float) -> JointDensityValue:
    """
    Density at one point with its region.

    Raises:
        DomainError: If a coordinate is not positive
    """
    for name, y in (("y1", y1), ("y2", y2)):
        if not y > 0:
            raise DomainError(name, y, "density needs positive coordinates")
    value = float(np.exp(log_density(p, y1, y2)))
    return JointDensityValue(region_of(y1, y2), value)


def ac_singular_split(p: BglfrpsParams, y1: float, y2: float) -> SplitResult:
    """
    Decompose the density as (a1 + a2)/S g_a + a3/S g_s.

    g_a is the normalized absolutely continuous density (zero on the
    diagonal) and g_s the normalized density of the common value on the
    diagonal (zero elsewhere).

    Raises:
        DomainError: If a coordinate is not positive
    """
    b = p.base
    total = b.alpha_sum
    weight_ac = (b.alpha1 + b.alpha2) / total
    weight_s = b.alpha3 / total
    point = joint_pdf(p, y1, y2)
    if point.region is Region.DIAGONAL:
        singular = 0.0 if b.alpha3 == 0 else point.value / weight_s
        return SplitResult(0.0, singular, weight_ac, weight_s)
    return SplitResult(point.value / weight_ac, 0.0, weight_ac, weight_s)


def marginal(p: BglfrpsParams, which: Component) -> GlfrpsParams:
    """GLFRPS law of Y1 (a1 + a3), Y2 (a2 + a3) or max(Y1, Y2) (a1 + a2 + a3)."""
    b = p.base
    shape = {
        Component.Y1: b.alpha1 + b.alpha3,
        Component.Y2: b.alpha2 + b.alpha3,
        Component.MAX: b.alpha_sum,
    }[which]
    return GlfrpsParams(GlfrParams(shape, b.beta, b.gamma), p.family, p.theta)


def conditional_cdf_given_le(p: BglfrpsParams, y1: ArrayLike, y2: float) -> ArrayLike:
    """
    P(Y1 <= y1 | Y2 <= y2) = F(y1, y2) / F_Y2(y2).

    Raises:
        UndefinedConditionalError: If P(Y2 <= y2) == 0
    """
    y1, y2_arr = check_pair(y1, y2)
    b = p.base
    z = p.theta * np.exp(log_cdf(y2_arr, b.alpha2 + b.alpha3, b.beta, b.gamma))
    denominator = p.family.c(z)
    if not np.all(denominator > 0):
        raise UndefinedConditionalError(f"P(Y2 <= {y2}) is zero")
    return as_scalar(p.family.c(latent_argument(p, y1, y2_arr)) / denominator)


def _normalizers(
    p: BglfrpsParams, y1: np.ndarray, y2: np.ndarray, z: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """(k, B): conditional pmf normalizer and its first-moment counterpart."""
    d = p.family.derivatives(z)
    diagonal = y1 == y2
    k = np.where(diagonal, d.c1, z * d.c2 + d.c1)
    moment = np.where(
        diagonal,
        z * d.c2 + d.c1,
        z * z * d.c3 + 3.0 * z * d.c2 + d.c1,
    )
    return k, moment


def _check_positive_density(p: BglfrpsParams, y1: np.ndarray, y2: np.ndarray) -> None:
    if np.any(y1 <= 0) or np.any(y2 <= 0):
        raise UndefinedConditionalError("conditioning point has zero density")
    if np.any((y1 == y2) & (p.base.alpha3 == 0)):
        raise UndefinedConditionalError("diagonal has zero density when alpha3 = 0")


def conditional_n_pmf(
    p: BglfrpsParams, y1: float, y2: float, n: Union[int, np.ndarray]
) -> ArrayLike:
    """
    P(N = n | Y1 = y1, Y2 = y2).

    Off the diagonal this is n^2 a_n z^(n-1) / (z C''(z) + C'(z)), on it
    n a_n z^(n-1) / C'(z), with z = theta F_BG(y1, y2).

    Raises:
        DomainError: If n < 1
        UndefinedConditionalError: If the point has zero density
    """
    n_arr = np.asarray(n)
    if np.any(n_arr < 1) or np.any(n_arr != np.floor(n_arr)):
        raise DomainError("n", n, "count must be a positive integer")
    y1_arr = np.asarray(y1, dtype=float)
    y2_arr = np.asarray(y2, dtype=float)
    _check_positive_density(p, y1_arr, y2_arr)

    z = latent_argument(p, y1_arr, y2_arr)
    k, _ = _normalizers(p, y1_arr, y2_arr, z)
    power = 1.0 if y1 == y2 else 2.0
    with np.errstate(divide="ignore"):
        log_p = (
            power * np.log(n_arr)
            + p.family.log_coefficient(n_arr)
            + xlogy(n_arr - 1, z)
            - np.log(k)
        )
    return as_scalar(np.exp(log_p))


def expected_count(p: BglfrpsParams, y1: ArrayLike, y2: ArrayLike) -> np.ndarray:
    """
    E(N | y) over arrays without argument checks.

    Points where the normalizer vanishes get the smallest support index,
    the limit of the conditional law as z goes to 0.
    """
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    z = latent_argument(p, y1, y2)
    k, moment = _normalizers(p, y1, y2, z)
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = moment / k
    return np.where((k > 0) & np.isfinite(ratio), ratio, float(p.family.min_index))


def conditional_n_mean(p: BglfrpsParams, y1: ArrayLike, y2: ArrayLike) -> ArrayLike:
    """
    E(N | Y1 = y1, Y2 = y2).

    (z^2 C''' + 3 z C'' + C') / (z C'' + C') off the diagonal and
    (z C'' + C') / C' on it.

    Raises:
        UndefinedConditionalError: If a point has zero density
    """
    y1 = np.asarray(y1, dtype=float)
    y2 = np.asarray(y2, dtype=float)
    _check_positive_density(p, y1, y2)
    return as_scalar(expected_count(p, y1, y2))


def sample(
    p: BglfrpsParams, rng: np.random.Generator, size: Optional[int] = None
) -> Union[tuple[float, float], np.ndarray]:
    """
    Draw N, then one BGLFR(n a1, n a2, n a3) pair per draw.

    Returns:
        One (y1, y2) tuple, or an array of shape (size, 2); ties are exact
    """
    b = p.base
    count = 1 if size is None else size
    n = np.atleast_1d(sample_n(p.family, p.theta, rng, count)).astype(float)
    y1, y2 = draw_pairs(
        n * b.alpha1, n * b.alpha2, n * b.alpha3, b.beta, b.gamma, rng, count
    )
    if size is None:
        return float(y1[0]), float(y2[0])
    return np.column_stack((y1, y2))


def limit_theta_zero_reference(p: BglfrpsParams) -> BglfrParams:
    """As theta -> 0+ the law tends to BGLFR(c a1, c a2, c a3) with c = min{n : a_n > 0}."""
    return p.base.scaled(p.family.min_index)


def series_joint_cdf(
    p: BglfrpsParams, y1: float, y2: float, tol: float = SERIES_TOL
) -> float:
    """sum_n P(N = n) F_BG(y1, y2; n a1, n a2, n a3), truncated at tol."""
    b = p.base
    n, weights = pmf_table(p.family, p.theta, tol)
    log_f = log_bglfr_cdf(
        y1, y2, n * b.alpha1, n * b.alpha2, n * b.alpha3, b.beta, b.gamma
    )
    return float(np.sum(weights * np.exp(log_f)))


def series_joint_pdf(
    p: BglfrpsParams, y1: float, y2: float, tol: float = SERIES_TOL
) -> float:
    """sum_n P(N = n) times the BGLFR(n a) density in the region of (y1, y2)."""
    b = p.base
    n, weights = pmf_table(p.family, p.theta, tol)
    if y1 == y2:
        total = b.alpha_sum
        terms = (b.alpha3 / total) * np.exp(
            glfr_log_density(y1, n * total, b.beta, b.gamma)
        )
    else:
        s1, s2 = _branch_shapes(b, np.asarray(y1), np.asarray(y2))
        terms = np.exp(
            glfr_log_density(y1, n * s1, b.beta, b.gamma)
            + glfr_log_density(y2, n * s2, b.beta, b.gamma)
        )
    return float(np.sum(weights * terms))


def mass_upper_limit(p: BglfrpsParams, tail: float = MASS_TAIL) -> float:
    """A point beyond which max(Y1, Y2), hence either margin, leaves about `tail` of mass."""
    b = p.base
    shape = b.alpha_sum
    expected_n = mean(p.family, p.theta)
    return float(quantile(1.0 - tail / expected_n, shape, b.beta, b.gamma))


def _triangle_mass(
    p: BglfrpsParams, inner_shape: float, outer_shape: float, top: float, lower: bool
) -> float:
    """
    Mass of one off-diagonal triangle, cut where the max law reaches `top`.

    The outer coordinate is s = G(y_out; a1 + a2 + a3) and the inner one is
    u = G(y_in; inner_shape) / G(y_out; inner_shape), so the integrand is
    bounded and smooth on [0, 1] x [0, top]. The u direction uses fixed
    Gauss-Legendre nodes, the s direction adaptive vector quadrature.
    """
    if inner_shape <= 0 or outer_shape <= 0:
        return 0.0
    b = p.base
    total = b.alpha_sum
    nodes, weights = legendre.leggauss(MASS_NODES)
    u = 0.5 * (nodes + 1.0)

    def column(s: float) -> np.ndarray:
        y_out = quantile(s, total, b.beta, b.gamma)
        log_reach = log_cdf(y_out, inner_shape, b.beta, b.gamma)
        y_in = quantile(u * np.exp(log_reach), inner_shape, b.beta, b.gamma)
        y1, y2 = (y_in, y_out) if lower else (y_out, y_in)
        log_f = log_ac_density(p, y1, y2)
        with np.errstate(invalid="ignore"):
            log_jacobian = (
                log_reach
                - glfr_log_density(y_in, inner_shape, b.beta, b.gamma)
                - glfr_log_density(y_out, total, b.beta, b.gamma)
            )
            out = np.exp(log_f + log_jacobian)
        return np.where(np.isfinite(out) & (y_in > 0), out, 0.0)

    values, _ = integrate.quad_vec(column, 0.0, top, epsabs=1e-11, epsrel=1e-9)
    return float(0.5 * np.dot(weights, values))


def total_mass(p: BglfrpsParams, upper: Optional[float] = None) -> MassBreakdown:
    """
    Integrate f1 below the diagonal, f2 above it and f0 along it over [0, upper]^2.

    Each triangle is integrated separately since the density is smooth
    inside a region but not across the diagonal.
    """
    b = p.base
    hi = mass_upper_limit(p) if upper is None else upper
    top = float(np.exp(log_cdf(hi, b.alpha_sum, b.beta, b.gamma)))
    lower = _triangle_mass(p, b.alpha1 + b.alpha3, b.alpha2, top, lower=True)
    upper_part = _triangle_mass(p, b.alpha2 + b.alpha3, b.alpha1, top, lower=False)
    if b.alpha3 == 0:
        diagonal = 0.0
    else:
        diagonal, _ = integrate.quad(
            lambda y: float(np.exp(log_singular_density(p, y))), 0.0, hi, limit=200
        )
    return MassBreakdown(float(lower), float(upper_part), float(diagonal))


@dataclass(frozen=True)
class DensityGrid:
    """Density lattice plus the singular density along the diagonal."""

    y1: np.ndarray
    y2: np.ndarray
    values: np.ndarray  # values[i, j] at (y1[i], y2[j])
    diagonal_y: np.ndarray
    diagonal_values: np.ndarray


def density_grid(
    p: BglfrpsParams, y1_grid: np.ndarray, y2_grid: np.ndarray
) -> DensityGrid:
    """
    Absolutely continuous density over a lattice and f0 over the union of
    both axes. Lattice points on the diagonal take the f1 formula.
    """
    y1_grid = np.asarray(y1_grid, dtype=float)
    y2_grid = np.asarray(y2_grid, dtype=float)
    g1, g2 = np.meshgrid(y1_grid, y2_grid, indexing="ij")
    log_f = np.where((g1 > 0) & (g2 > 0), log_ac_density(p, g1, g2), -np.inf)
    diagonal_y = np.unique(np.concatenate((y1_grid, y2_grid)))
    diagonal_y = diagonal_y[diagonal_y > 0]
    return DensityGrid(
        y1=y1_grid,
        y2=y2_grid,
        values=np.exp(log_f),
        diagonal_y=diagonal_y,
        diagonal_values=np.exp(log_singular_density(p, diagonal_y)),
    )
