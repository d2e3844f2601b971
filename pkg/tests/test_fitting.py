"""Tests for EM fitting."""

import math

import numpy as np
import pytest

from bglfrps.bglfr import BglfrParams
from bglfrps.bglfrps import BglfrpsParams, joint_pdf, sample
from bglfrps.errors import BracketError, DegenerateDataError, DomainError
from bglfrps.fitting import (
    BivariateSample,
    EmState,
    TieWeights,
    e_step,
    em_fit,
    em_step,
    initial_params,
    m_step_alphas,
    m_step_theta,
    observed_loglik,
    pseudo_loglik,
    pseudo_profile_objective,
    tie_weights,
)
from bglfrps.powerseries import DEGENERATE, Geometric, Poisson
from bglfrps.reference import REFERENCE_FITS, reference_fit
from bglfrps.search import brent_root, nelder_mead, nelder_mead_2d
from bglfrps.typing_ import Config

FAST = Config(max_iter=200, polish_max_iter=4000, log_runs=False)


def test_football_partition(football):
    """24 ties, 16 pairs with y1 < y2, 2 with y1 > y2."""
    assert (football.m0, football.m1, football.m2) == (24, 16, 2)
    assert football.m == 42


def test_sample_validation():
    """Empty and non-positive samples are rejected."""
    with pytest.raises(DegenerateDataError):
        BivariateSample(np.array([]), np.array([]))
    with pytest.raises(DomainError):
        BivariateSample(np.array([0.1, 0.0]), np.array([0.2, 0.3]))
    with pytest.raises(DomainError):
        BivariateSample(np.array([0.1, np.inf]), np.array([0.2, 0.3]))
    with pytest.raises(DomainError):
        BivariateSample(np.array([0.1, 0.2]), np.array([0.2]))


def test_from_pairs_tie_tolerance():
    """Pairs within tie_tol collapse onto their midpoint."""
    pairs = [(0.10, 0.11), (0.2, 0.2), (0.3, 0.5)]
    exact = BivariateSample.from_pairs(pairs)
    assert (exact.m0, exact.m1, exact.m2) == (1, 2, 0)
    coarse = BivariateSample.from_pairs(pairs, tie_tol=0.02)
    assert (coarse.m0, coarse.m1, coarse.m2) == (2, 1, 0)
    assert coarse.y1[0] == coarse.y2[0] == pytest.approx(0.105)
    assert coarse.pairs()[2] == (0.3, 0.5)


def test_observed_loglik_at_published_fits(football):
    """Log-likelihood at the published estimates matches the published value."""
    for model in ("BGLFRG", "BGLFR"):
        ref = reference_fit(model)
        assert observed_loglik(ref.params, football) == pytest.approx(ref.loglik, abs=0.01)


def test_observed_loglik_sums_region_densities(football):
    """Each observation contributes the log density of its region."""
    p = reference_fit("BGLFRP").params
    expected = sum(math.log(joint_pdf(p, a, b).value) for a, b in football.pairs())
    assert observed_loglik(p, football) == pytest.approx(expected, rel=1e-12)


def test_observed_loglik_without_common_component():
    """A tie has zero density when alpha3 = 0."""
    s = BivariateSample(np.array([0.1, 0.2]), np.array([0.1, 0.3]))
    p = BglfrpsParams(BglfrParams(1.0, 1.0, 0.0, 1.0, 1.0), Geometric(), 0.5)
    assert observed_loglik(p, s) == -math.inf


def test_e_step(football):
    """b = 1 for the degenerate family and b >= 1 otherwise."""
    assert e_step(reference_fit("BGLFR").params, football) == pytest.approx(1.0)
    b = e_step(reference_fit("BGLFRG").params, football)
    assert b.shape == (42,)
    assert np.all(b >= 1.0)


def test_tie_weights():
    """u1 = a1 / (a1 + a3) and v1 = a2 / (a2 + a3)."""
    w = tie_weights(BglfrParams(1.0, 3.0, 1.0, 1.0, 1.0))
    assert w == pytest.approx((0.5, 0.5, 0.75, 0.25))


def test_m_step_alphas_is_stationary(football):
    """The closed-form shapes maximize the pseudo log-likelihood."""
    ref = reference_fit("BGLFRG")
    p = ref.params
    b = e_step(p, football)
    w = tie_weights(p.base)
    update = m_step_alphas(football, b, w, p.base.beta, p.base.gamma)
    assert not any(update.clamped)
    alphas = [update.alpha1, update.alpha2, update.alpha3]

    def at(values):
        base = BglfrParams(*values, p.base.beta, p.base.gamma)
        return pseudo_loglik(BglfrpsParams(base, p.family, p.theta), football, b, w)

    h = 1e-6
    for j in range(3):
        up = list(alphas)
        down = list(alphas)
        up[j] *= 1 + h
        down[j] *= 1 - h
        derivative = (at(up) - at(down)) / (2 * h * alphas[j])
        assert derivative == pytest.approx(0.0, abs=1e-3)


def test_m_step_alphas_stationary_on_synthetic_configurations(rng):
    """Partials in the shapes vanish at the update for random b, weights and rates."""
    truth = BglfrpsParams(BglfrParams(0.5, 1.0, 1.5, 1.0, 1.0), Geometric(), 0.5)
    for _ in range(20):
        draws = sample(truth, rng, 60)
        s = BivariateSample(draws[:, 0], draws[:, 1])
        b = rng.uniform(1.0, 3.0, s.m)
        u1, v1 = rng.uniform(0.1, 0.9, 2)
        w = TieWeights(u1, 1 - u1, v1, 1 - v1)
        beta, gamma = rng.uniform(0.2, 3.0, 2)
        update = m_step_alphas(s, b, w, beta, gamma)
        alphas = [update.alpha1, update.alpha2, update.alpha3]

        def at(values):
            p = BglfrpsParams(BglfrParams(*values, beta, gamma), Geometric(), 0.5)
            return pseudo_loglik(p, s, b, w)

        counts = (
            s.m1 * w.u1 + s.m2,
            s.m1 + s.m2 * w.v1,
            s.m0 + s.m1 * w.u2 + s.m2 * w.v2,
        )
        h = 1e-4
        for j in range(3):
            up = list(alphas)
            down = list(alphas)
            up[j] *= 1 + h
            down[j] *= 1 - h
            derivative = (at(up) - at(down)) / (2 * h * alphas[j])
            # both terms of the partial have size count_j / alpha_j
            assert abs(derivative) <= 1e-5 * counts[j] / alphas[j]


def test_m_step_alphas_flags_the_floor():
    """All ties leave nothing for alpha1 and alpha2, which clamp to the floor."""
    s = BivariateSample(np.array([0.1, 0.2, 0.3]), np.array([0.1, 0.2, 0.3]))
    update = m_step_alphas(s, np.ones(3), TieWeights(0.5, 0.5, 0.5, 0.5), 1.0, 0.1)
    assert update.clamped == (True, True, False)
    assert update.alpha1 == pytest.approx(1e-8)
    assert update.alpha3 > 0


def test_m_step_theta():
    """Geometric with mean b of 2 gives theta = 0.5; the degenerate family keeps 1."""
    assert m_step_theta(Geometric(), 2.0).theta == pytest.approx(0.5, abs=1e-10)
    assert m_step_theta(DEGENERATE, 3.0).theta == 1.0
    low = m_step_theta(Geometric(), 0.8)
    assert low.clamped


def test_pseudo_profile_objective_rejects_bad_rates(football):
    """Negative or all-zero rates score -inf."""
    p = reference_fit("BGLFRG").params
    b = e_step(p, football)
    w = tie_weights(p.base)
    assert pseudo_profile_objective(-1.0, 0.1, football, b, w, p.family, p.theta) == -math.inf
    assert pseudo_profile_objective(0.0, 0.0, football, b, w, p.family, p.theta) == -math.inf
    value = pseudo_profile_objective(12.0, 2e-4, football, b, w, p.family, p.theta)
    assert math.isfinite(value)


def test_initial_params(football):
    """The starting point is valid and has a finite log-likelihood."""
    for family in (Geometric(), Poisson(), DEGENERATE):
        p = initial_params(football, family)
        assert p.base.beta == pytest.approx(
            1 / np.mean(np.concatenate((football.y1, football.y2)))
        )
        assert math.isfinite(observed_loglik(p, football))


def test_em_step_does_not_lose_much(football):
    """One step from the published fit stays close to the published likelihood."""
    p = reference_fit("BGLFRG").params
    loglik = observed_loglik(p, football)
    state = EmState(p, e_step(p, football), tie_weights(p.base), loglik, 0)
    hits: set[str] = set()
    after = em_step(state, football, FAST, hits)
    assert after.iteration == 1
    assert after.loglik > state.loglik - 0.5


def test_em_fit_needs_six_observations():
    """Five observations are not enough."""
    s = BivariateSample.from_pairs([(0.1, 0.2)] * 5)
    with pytest.raises(DegenerateDataError):
        em_fit(s, Geometric())


MODELS = [ref.model for ref in REFERENCE_FITS]


@pytest.mark.slow
@pytest.mark.parametrize("model", MODELS)
def test_em_fit_reaches_published_likelihood(model, fitted_model):
    """Each of the six fits lands within 0.1 of the published log-likelihood in under a minute."""
    ref = reference_fit(model)
    report, seconds = fitted_model(model)
    assert seconds < 60.0
    assert report.loglik == pytest.approx(ref.loglik, abs=0.10)
    assert (report.m0, report.m1, report.m2) == (24, 16, 2)
    assert report.n_params == ref.n_params
    # the reported estimate is the best iterate
    assert report.loglik == pytest.approx(max(report.loglik_trace))


@pytest.mark.slow
@pytest.mark.parametrize("model", MODELS)
def test_em_fit_is_stationary(model, fitted_model, football):
    """Every partial of the log-likelihood vanishes at the estimate unless it sits on a bound."""
    report, _ = fitted_model(model)
    assert report.loglik == pytest.approx(observed_loglik(report.mle, football))
    b = report.mle.base
    values = {
        "alpha1": b.alpha1,
        "alpha2": b.alpha2,
        "alpha3": b.alpha3,
        "beta": b.beta,
        "gamma": b.gamma,
    }
    if not report.mle.family.is_degenerate:
        values["theta"] = report.mle.theta

    def at(name, value):
        shifted = dict(values, **{name: value})
        theta = shifted.pop("theta", 1.0)
        base = BglfrParams(**shifted)
        return observed_loglik(BglfrpsParams(base, report.mle.family, theta), football)

    for name, value in values.items():
        h = 1e-5 * value
        partial = (at(name, value + h) - at(name, value - h)) / (2 * h)
        on_bound = name in report.clamped or (value < 1e-6 and partial < 0)
        assert abs(partial) < 1e-2 or on_bound, f"d loglik / d {name} = {partial}"


@pytest.mark.slow
def test_em_fit_geometric_parameters(fitted_model):
    """BGLFRG estimates land near the published column."""
    ref = reference_fit("BGLFRG")
    report, _ = fitted_model("BGLFRG")
    assert report.loglik >= 38.30
    b = report.mle.base
    pairs = ((b.alpha1, ref.alpha1), (b.alpha2, ref.alpha2), (b.alpha3, ref.alpha3))
    for ours, theirs in pairs:
        assert ours == pytest.approx(theirs, rel=0.10)
    assert b.beta == pytest.approx(ref.beta, rel=0.10)
    assert report.mle.theta == pytest.approx(ref.theta, rel=0.10)
    assert b.gamma == pytest.approx(ref.gamma, abs=5e-4)


@pytest.mark.slow
def test_em_fit_recovers_simulated_parameters():
    """A fit to 2000 simulated BGLFRP pairs recovers the tie weight and beta."""
    truth = BglfrpsParams(BglfrParams(0.06, 0.4, 0.7, 11.5, 2e-4), Poisson(), 2.0)
    draws = sample(truth, np.random.default_rng(2014), 2000)
    s = BivariateSample(draws[:, 0], draws[:, 1])
    report = em_fit(s, Poisson(), config=Config(log_runs=False))
    b = report.mle.base
    assert b.alpha3 / b.alpha_sum == pytest.approx(0.7 / 1.16, abs=0.05)
    assert b.beta == pytest.approx(11.5, rel=0.15)


def test_em_fit_with_short_budget(football):
    """A capped run still reports its best iterate and does not converge."""
    report = em_fit(
        football,
        Geometric(),
        config=Config(max_iter=1, polish=False, log_runs=False),
    )
    assert report.iterations == 1
    assert not report.polished
    assert len(report.loglik_trace) == 2
    assert report.loglik == max(report.loglik_trace)


def test_nelder_mead_finds_maximum():
    """-(x - 3)^2 - (y + 1)^2 peaks at (3, -1)."""
    found = nelder_mead_2d(lambda x: -((x[0] - 3) ** 2) - (x[1] + 1) ** 2, (0.0, 0.0))
    assert found.argmax == pytest.approx([3.0, -1.0], abs=1e-6)
    assert found.converged


def test_nelder_mead_ignores_non_finite_values():
    """Points scoring -inf or nan never win."""

    def objective(x):
        if x[0] < 0:
            return -math.inf
        return -((x[0] - 1) ** 2) - x[1] ** 2 - x[2] ** 2

    found = nelder_mead(objective, (0.5, 0.5, 0.5), max_iter=2000)
    assert found.argmax == pytest.approx([1.0, 0.0, 0.0], abs=1e-5)


def test_nelder_mead_2d_rejects_wrong_dimension():
    """Only two coordinates are accepted."""
    with pytest.raises(ValueError):
        nelder_mead_2d(lambda x: 0.0, (0.0, 0.0, 0.0))


def test_brent_root():
    """Cube root of two, and a bracket without a sign change."""
    assert brent_root(lambda x: x**3 - 2, (1.0, 2.0)) == pytest.approx(2 ** (1 / 3), abs=1e-12)
    with pytest.raises(BracketError):
        brent_root(lambda x: x * x + 1, (-1.0, 1.0))
