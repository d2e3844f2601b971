"""Tests for the power-series families of N."""

import math
import warnings

import numpy as np
import pytest

from bglfrps.errors import DomainError
from bglfrps.powerseries import (
    DEGENERATE,
    FIGURE_FAMILY,
    Binomial,
    CustomPolynomial,
    Geometric,
    Logarithmic,
    NegativeBinomial,
    Poisson,
    c_derivatives,
    mean,
    parse_family,
    pmf,
    pmf_table,
    sample_n,
    solve_theta_for_mean,
)

FAMILIES = [
    (Geometric(), 0.6),
    (Poisson(), 2.0),
    (Logarithmic(), 0.8),
    (Binomial(10), 0.23),
    (NegativeBinomial(2), 0.72),
    (NegativeBinomial(3), 0.4),
    (NegativeBinomial(1), 0.5),
    (FIGURE_FAMILY, 0.9),
]


@pytest.mark.parametrize("family,theta", FAMILIES, ids=lambda v: str(v))
def test_derivatives_match_finite_differences(family, theta):
    """Each derivative matches a central difference of the one below it."""
    h = 1e-5
    lo, hi = family.derivatives(theta - h), family.derivatives(theta + h)
    d = family.derivatives(theta)
    assert d.c1 == pytest.approx((hi.c - lo.c) / (2 * h), rel=1e-6)
    assert d.c2 == pytest.approx((hi.c1 - lo.c1) / (2 * h), rel=1e-6)
    assert d.c3 == pytest.approx((hi.c2 - lo.c2) / (2 * h), rel=1e-5, abs=1e-8)


@pytest.mark.parametrize("family,theta", FAMILIES, ids=lambda v: str(v))
def test_series_matches_closed_form(family, theta):
    """sum a_n theta^n reproduces C(theta)."""
    n = np.arange(1, 400)
    series = np.sum(np.exp(family.log_coefficient(n) + n * math.log(theta)))
    assert series == pytest.approx(float(family.c(theta)), rel=1e-10)


@pytest.mark.parametrize("family,theta", FAMILIES, ids=lambda v: str(v))
def test_pmf_table_sums_to_one(family, theta):
    """The truncated pmf carries all but a negligible tail."""
    _, p = pmf_table(family, theta)
    assert np.sum(p) == pytest.approx(1.0, abs=1e-10)


def test_closed_form_values():
    """Spot values of C and its derivatives."""
    assert c_derivatives(Geometric(), 0.5) == pytest.approx((1.0, 4.0, 16.0, 96.0))
    assert c_derivatives(Logarithmic(), 0.5).c == pytest.approx(math.log(2.0))
    assert c_derivatives(Poisson(), 1.0).c == pytest.approx(math.e - 1.0)
    assert c_derivatives(Binomial(10), 1.0).c == pytest.approx(2.0**10 - 1.0)
    nb = c_derivatives(NegativeBinomial(2), 0.5)
    assert nb.c == pytest.approx(1.0)
    assert nb.c2 == pytest.approx((2 + 4 * 0.5) / 0.5**4)
    assert nb.c3 == pytest.approx((12 + 12 * 0.5) / 0.5**5)


def test_coefficients():
    """Coefficients of the named families."""
    assert Geometric().coefficient(7) == pytest.approx(1.0)
    assert Poisson().coefficient(4) == pytest.approx(1 / 24)
    assert Logarithmic().coefficient(5) == pytest.approx(0.2)
    assert Binomial(10).coefficient(3) == pytest.approx(120.0)
    assert Binomial(10).coefficient(11) == 0.0
    assert NegativeBinomial(2).coefficient(1) == 0.0
    assert NegativeBinomial(2).coefficient(5) == pytest.approx(4.0)


def test_support_bounds_and_minimum_index():
    """Radii of convergence and smallest support points."""
    assert Geometric().support_bound == 1.0
    assert Logarithmic().support_bound == 1.0
    assert NegativeBinomial(2).support_bound == 1.0
    assert math.isinf(Poisson().support_bound)
    assert math.isinf(Binomial(10).support_bound)
    assert Geometric().min_index == 1
    assert NegativeBinomial(2).min_index == 2
    assert CustomPolynomial((0.0, 0.0, 1.0)).min_index == 3


def test_check_theta_rejects_out_of_support():
    """theta must lie in (0, s)."""
    with pytest.raises(DomainError):
        Geometric().check_theta(1.0)
    with pytest.raises(DomainError):
        Poisson().check_theta(0.0)
    with pytest.raises(DomainError):
        Logarithmic().check_theta(float("nan"))
    assert Poisson().check_theta(50.0) == 50.0


def test_pmf_values():
    """P(N = n) for geometric and Poisson laws."""
    theta = 0.3
    assert pmf(Geometric(), theta, 3) == pytest.approx((1 - theta) * theta**2)
    assert pmf(Poisson(), 1.0, 2) == pytest.approx(0.5 / (math.e - 1.0))
    assert pmf(NegativeBinomial(2), 0.5, 1) == 0.0
    with pytest.raises(DomainError):
        pmf(Geometric(), theta, 0)
    with pytest.raises(DomainError):
        pmf(Geometric(), theta, 1.5)


def test_mean():
    """E N = theta C'(theta) / C(theta)."""
    assert mean(Geometric(), 0.5) == pytest.approx(2.0)
    assert mean(Poisson(), 2.0) == pytest.approx(2.0 * math.exp(2.0) / math.expm1(2.0))
    assert mean(DEGENERATE, 3.0) == pytest.approx(1.0)


def test_solve_theta_for_mean_geometric_closed_form():
    """For the geometric law E N = 1 / (1 - theta)."""
    solution = solve_theta_for_mean(Geometric(), 2.0)
    assert solution.theta == pytest.approx(0.5, abs=1e-12)
    assert not solution.clamped


@pytest.mark.parametrize("family,theta", FAMILIES[:6], ids=lambda v: str(v))
def test_solve_theta_for_mean_round_trips(family, theta):
    """Solving for the mean at theta recovers theta."""
    solution = solve_theta_for_mean(family, mean(family, theta))
    assert solution.theta == pytest.approx(theta, rel=1e-8)
    assert mean(family, solution.theta) == pytest.approx(mean(family, theta), rel=1e-10)


def test_solve_theta_for_mean_clamps():
    """Unattainable targets return a flagged clamp."""
    low = solve_theta_for_mean(Geometric(), 1.0)
    assert low.clamped and low.theta == pytest.approx(1e-8)
    # the truncated binomial mean never exceeds k
    high = solve_theta_for_mean(Binomial(10), 50.0)
    assert high.clamped
    with pytest.raises(DomainError):
        solve_theta_for_mean(Geometric(), 0.5)


def test_poisson_mean_for_large_theta():
    """Past exp overflow the mean is still theta / (1 - e^-theta) and the root is found."""
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        assert mean(Poisson(), 1000.0) == pytest.approx(1000.0)
        solution = solve_theta_for_mean(Poisson(), 800.0)
    assert not solution.clamped
    assert solution.theta == pytest.approx(800.0, rel=1e-10)


def test_parse_family():
    """Family selection strings."""
    assert parse_family("geometric") == Geometric()
    assert parse_family("Poisson") == Poisson()
    assert parse_family("log") == Logarithmic()
    assert parse_family("binomial") == Binomial(10)
    assert parse_family("binomial:5") == Binomial(5)
    assert parse_family("nb:3") == NegativeBinomial(3)
    assert parse_family("negbinomial") == NegativeBinomial(2)
    assert parse_family("degenerate").is_degenerate
    assert parse_family("poly:1" + ",0" * 18 + ",1") == FIGURE_FAMILY
    for spec in ("", "weibull", "binomial:x", "poly:", "poly:-1", "poly:0,0", "geometric:2"):
        with pytest.raises(DomainError):
            parse_family(spec)


def test_custom_polynomial_strips_trailing_zeros():
    """Trailing zero coefficients do not change the degree."""
    family = CustomPolynomial((1.0, 2.0, 0.0, 0.0))
    assert family.coefficients == (1.0, 2.0)
    assert family.max_degree == 2
    assert family.spec == "poly:1,2"
    assert FIGURE_FAMILY.max_degree == 20
    assert DEGENERATE.is_degenerate and not FIGURE_FAMILY.is_degenerate


def test_sample_n_matches_pmf(rng):
    """Empirical mean of N tracks E N."""
    draws = sample_n(Poisson(), 2.0, rng, 20000)
    assert draws.min() >= 1
    expected = mean(Poisson(), 2.0)
    assert draws.mean() == pytest.approx(expected, abs=4 * draws.std() / math.sqrt(20000))
    assert np.all(sample_n(NegativeBinomial(2), 0.3, rng, 1000) >= 2)
    assert isinstance(sample_n(Geometric(), 0.3, rng), int)
