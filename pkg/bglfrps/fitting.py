"""Maximum likelihood fitting of BGLFRPS models by EM.

The latent count N and the latent assignment of ties between Z1, Z2 and Z3
are treated as missing data. Each outer iteration replaces N by its
conditional mean b_i, splits the continuous observations between the
competing latent maxima with the fractions u and v, maximizes the resulting
pseudo log-likelihood over (beta, gamma) with the shapes profiled out in
closed form, and finally solves for theta.
"""

import math
import time
from dataclasses import dataclass, field
from typing import NamedTuple, Optional, Sequence

import numpy as np
from scipy import optimize
from scipy.special import expit, logit, xlogy

from .bglfr import BglfrParams
from .bglfrps import BglfrpsParams, expected_count, log_density
from .errors import DegenerateDataError, DomainError
from .glfr import GlfrParams, cumulative_hazard, log_base_cdf
from .glfrps import GlfrpsParams, glfrps_logpdf
from .powerseries import PowerSeriesFamily, ThetaSolution, solve_theta_for_mean
from .search import SearchResult, brent_root, nelder_mead, nelder_mead_2d
from .typing_ import Config

__all__ = [
    "AlphaUpdate",
    "BivariateSample",
    "EmState",
    "FitReport",
    "SearchResult",
    "TieWeights",
    "brent_root",
    "e_step",
    "em_fit",
    "em_step",
    "initial_params",
    "m_step_alphas",
    "m_step_theta",
    "nelder_mead",
    "nelder_mead_2d",
    "observed_loglik",
    "pseudo_loglik",
    "pseudo_profile_objective",
    "tie_weights",
]

MIN_OBSERVATIONS = 6
ALPHA_BOUNDS = (1e-8, 1e4)
BETA_BOUNDS = (1e-8, 1e6)
GAMMA_BOUNDS = (1e-8, 1e8)
THETA_MARGIN = 1e-8
INITIAL_GAMMA = 1e-4
INITIAL_ALPHA_FLOOR = 1e-3
# simplex tolerances of the direct-likelihood polish, in log/logit coordinates
POLISH_XATOL = 1e-10
POLISH_FATOL = 1e-12
POLISH_RESTARTS = 1


@dataclass(frozen=True, eq=False)
class BivariateSample:
    """
    Observed pairs split into ties (I0), y1 < y2 (I1) and y1 > y2 (I2).

    Membership always follows exact comparison of the stored coordinates.
    """

    y1: np.ndarray
    y2: np.ndarray

    def __post_init__(self) -> None:
        y1 = np.asarray(self.y1, dtype=float)
        y2 = np.asarray(self.y2, dtype=float)
        if y1.ndim != 1 or y1.shape != y2.shape:
            raise DomainError("pairs", (y1.shape, y2.shape), "need two equal 1-D arrays")
        if y1.size == 0:
            raise DegenerateDataError("sample is empty")
        if np.any(~(y1 > 0)) or np.any(~(y2 > 0)) or not np.all(np.isfinite(y1 + y2)):
            bad = np.concatenate((y1, y2))
            bad = bad[~((bad > 0) & np.isfinite(bad))][0]
            raise DomainError("pairs", float(bad), "observations must be positive and finite")
        object.__setattr__(self, "y1", y1)
        object.__setattr__(self, "y2", y2)

    @classmethod
    def from_pairs(
        cls, pairs: Sequence[tuple[float, float]], tie_tol: float = 0.0
    ) -> "BivariateSample":
        """
        Build a sample from (y1, y2) pairs.

        Pairs closer than tie_tol are recorded as ties at their midpoint.
        """
        arr = np.asarray(pairs, dtype=float).reshape(-1, 2)
        y1, y2 = arr[:, 0].copy(), arr[:, 1].copy()
        if tie_tol > 0:
            close = (np.abs(y1 - y2) <= tie_tol) & (y1 != y2)
            mid = 0.5 * (y1 + y2)
            y1[close] = mid[close]
            y2[close] = mid[close]
        return cls(y1, y2)

    @property
    def ties(self) -> np.ndarray:
        return self.y1 == self.y2

    @property
    def lower(self) -> np.ndarray:
        return self.y1 < self.y2

    @property
    def upper(self) -> np.ndarray:
        return self.y1 > self.y2

    @property
    def m0(self) -> int:
        return int(np.count_nonzero(self.ties))

    @property
    def m1(self) -> int:
        return int(np.count_nonzero(self.lower))

    @property
    def m2(self) -> int:
        return int(np.count_nonzero(self.upper))

    @property
    def m(self) -> int:
        return int(self.y1.size)

    @property
    def maxima(self) -> np.ndarray:
        return np.maximum(self.y1, self.y2)

    def pairs(self) -> list[tuple[float, float]]:
        return [(float(a), float(b)) for a, b in zip(self.y1, self.y2)]

    def scaled(self, factor: float) -> "BivariateSample":
        return BivariateSample(self.y1 * factor, self.y2 * factor)


class TieWeights(NamedTuple):
    """Fractions splitting Y1 between Z1 and Z3 (u) and Y2 between Z2 and Z3 (v)."""

    u1: float
    u2: float
    v1: float
    v2: float


class AlphaUpdate(NamedTuple):
    alpha1: float
    alpha2: float
    alpha3: float
    clamped: tuple[bool, bool, bool]


@dataclass(frozen=True)
class EmState:
    """One EM iterate with the quantities its E-step produced."""

    params: BglfrpsParams
    b: np.ndarray
    weights: TieWeights
    loglik: float
    iteration: int


@dataclass
class FitReport:
    mle: BglfrpsParams
    loglik: float
    iterations: int
    converged: bool
    loglik_trace: list[float]
    m0: int
    m1: int
    m2: int
    family: str
    n_params: int
    clamped: list[str] = field(default_factory=list)
    polished: bool = False
    elapsed: float = 0.0

    @property
    def m(self) -> int:
        return self.m0 + self.m1 + self.m2


def tie_weights(base: BglfrParams) -> TieWeights:
    u1 = base.alpha1 / (base.alpha1 + base.alpha3)
    v1 = base.alpha2 / (base.alpha2 + base.alpha3)
    return TieWeights(u1, 1.0 - u1, v1, 1.0 - v1)


def observed_loglik(p: BglfrpsParams, s: BivariateSample) -> float:
    """
    Sum of log f0 over ties, log f1 over y1 < y2 and log f2 over y1 > y2.

    Returns -inf when any observation has zero density or the sum is not finite.
    """
    total = float(np.sum(log_density(p, s.y1, s.y2)))
    return total if math.isfinite(total) else -math.inf


def e_step(p: BglfrpsParams, s: BivariateSample) -> np.ndarray:
    """b_i = E(N | y_1i, y_2i), never below 1."""
    return np.maximum(expected_count(p, s.y1, s.y2), 1.0)


class _HazardTerms(NamedTuple):
    q1: np.ndarray
    q2: np.ndarray
    log_hazard: np.ndarray  # per observation, summed over its distinct coordinates


def _hazard_terms(s: BivariateSample, beta: float, gamma: float) -> _HazardTerms:
    q1 = log_base_cdf(s.y1, beta, gamma)
    q2 = log_base_cdf(s.y2, beta, gamma)
    with np.errstate(divide="ignore", invalid="ignore"):
        lh1 = np.log(beta + gamma * s.y1) - cumulative_hazard(s.y1, beta, gamma) - q1
        lh2 = np.log(beta + gamma * s.y2) - cumulative_hazard(s.y2, beta, gamma) - q2
    return _HazardTerms(q1, q2, np.where(s.ties, lh1, lh1 + lh2))


def _shape_sums(
    s: BivariateSample, b: np.ndarray, weights: TieWeights, terms: _HazardTerms
) -> tuple[np.ndarray, np.ndarray]:
    """Counts multiplying log alpha_j and the sums multiplying alpha_j."""
    m0, m1, m2 = s.m0, s.m1, s.m2
    counts = np.array(
        [
            m1 * weights.u1 + m2,
            m1 + m2 * weights.v1,
            m0 + m1 * weights.u2 + m2 * weights.v2,
        ]
    )
    bq1 = b * terms.q1
    bq2 = b * terms.q2
    sums = np.array(
        [
            np.sum(bq1),
            np.sum(bq2),
            np.sum(np.where(s.upper, bq2, bq1)),
        ]
    )
    return counts, sums


def m_step_alphas(
    s: BivariateSample,
    b: np.ndarray,
    weights: TieWeights,
    beta: float,
    gamma: float,
) -> AlphaUpdate:
    """
    Closed-form maximizers of the pseudo log-likelihood in the shapes.

    alpha_j = count_j / (-sum_j) where sum_j collects b_i Q(y) over the
    coordinates whose cdf carries alpha_j. Results outside ALPHA_BOUNDS are
    clamped and flagged.

    Raises:
        DegenerateDataError: If a denominator is not strictly negative
    """
    counts, sums = _shape_sums(s, b, weights, _hazard_terms(s, beta, gamma))
    if not np.all(sums < 0) or not np.all(np.isfinite(sums)):
        raise DegenerateDataError(f"shape update denominators {sums.tolist()} are not negative")
    raw = counts / (-sums)
    clipped = np.clip(raw, *ALPHA_BOUNDS)
    flags = tuple(bool(c != r) for c, r in zip(clipped, raw))
    return AlphaUpdate(float(clipped[0]), float(clipped[1]), float(clipped[2]), flags)


def m_step_theta(family: PowerSeriesFamily, mean_b: float) -> ThetaSolution:
    """Solve theta C'(theta) / C(theta) = mean of b; theta stays at 1 for C(theta) = theta."""
    if family.is_degenerate:
        return ThetaSolution(1.0, False)
    return solve_theta_for_mean(family, max(float(mean_b), 1.0))


def _theta_terms(
    family: PowerSeriesFamily, theta: float, s: BivariateSample, b: np.ndarray
) -> float:
    return math.log(theta) * float(np.sum(b)) - s.m * math.log(float(family.c(theta)))


def pseudo_loglik(
    p: BglfrpsParams, s: BivariateSample, b: np.ndarray, weights: TieWeights
) -> float:
    """
    Expected complete-data log-likelihood with N replaced by b and the
    latent maxima split by weights, up to terms free of the parameters.
    """
    base = p.base
    terms = _hazard_terms(s, base.beta, base.gamma)
    counts, sums = _shape_sums(s, b, weights, terms)
    alphas = np.array([base.alpha1, base.alpha2, base.alpha3])
    value = (
        _theta_terms(p.family, p.theta, s, b)
        + float(np.sum(terms.log_hazard))
        + float(np.sum(xlogy(counts, alphas)))
        + float(np.dot(alphas, sums))
    )
    return value if math.isfinite(value) else -math.inf


def pseudo_profile_objective(
    beta: float,
    gamma: float,
    s: BivariateSample,
    b: np.ndarray,
    weights: TieWeights,
    family: PowerSeriesFamily,
    theta: float,
) -> float:
    """
    Pseudo log-likelihood at (beta, gamma) with the shapes at their
    closed-form maximizers. -inf where (beta, gamma) is invalid.
    """
    if not (beta >= 0 and gamma >= 0 and beta + gamma > 0):
        return -math.inf
    if not (math.isfinite(beta) and math.isfinite(gamma)):
        return -math.inf
    try:
        update = m_step_alphas(s, b, weights, beta, gamma)
        p = BglfrpsParams(
            BglfrParams(update.alpha1, update.alpha2, update.alpha3, beta, gamma),
            family,
            theta,
        )
    except (DegenerateDataError, DomainError):
        return -math.inf
    return pseudo_loglik(p, s, b, weights)


def _initial_theta(family: PowerSeriesFamily) -> float:
    if family.is_degenerate:
        return 1.0
    return 0.5 * min(family.support_bound, 2.0)


def _max_law_shape(
    s: BivariateSample,
    family: PowerSeriesFamily,
    beta: float,
    gamma: float,
    theta: float,
) -> float:
    """Shape of the GLFRPS law of max(Y1, Y2) by grid search refined with a bounded scalar search."""
    maxima = s.maxima

    def loglik(log_alpha: float) -> float:
        p = GlfrpsParams(GlfrParams(math.exp(log_alpha), beta, gamma), family, theta)
        value = float(np.sum(glfrps_logpdf(p, maxima)))
        return value if math.isfinite(value) else -math.inf

    grid = np.linspace(math.log(1e-2), math.log(1e2), 41)
    values = [loglik(x) for x in grid]
    i = int(np.argmax(values))
    lo, hi = grid[max(i - 1, 0)], grid[min(i + 1, len(grid) - 1)]
    res = optimize.minimize_scalar(
        lambda x: -loglik(x),
        bounds=(lo, hi),
        method="bounded",
    )
    best = res.x if res.success and -res.fun >= values[i] else grid[i]
    return math.exp(float(best))


def initial_params(s: BivariateSample, family: PowerSeriesFamily) -> BglfrpsParams:
    """
    Starting point of the EM loop.

    beta from the grand mean of all coordinates, a small gamma, theta at
    the middle of (0, min(s, 2)), and the shapes from the law of the
    maximum split in proportion to the tie and non-tie counts.
    """
    beta = 1.0 / float(np.mean(np.concatenate((s.y1, s.y2))))
    gamma = INITIAL_GAMMA
    theta = _initial_theta(family)
    shape = _max_law_shape(s, family, beta, gamma, theta)
    off = shape * (s.m1 + s.m2) / (2 * s.m)
    alpha3 = shape * s.m0 / s.m
    base = BglfrParams(
        max(off, INITIAL_ALPHA_FLOOR),
        max(off, INITIAL_ALPHA_FLOOR),
        max(alpha3, INITIAL_ALPHA_FLOOR),
        beta,
        gamma,
    )
    return BglfrpsParams(base, family, theta)


def _clip(
    value: float, bounds: tuple[float, float], name: str, hits: set[str]
) -> float:
    clipped = min(max(value, bounds[0]), bounds[1])
    if clipped != value:
        hits.add(name)
    return clipped


def em_step(
    state: EmState, s: BivariateSample, config: Config, hits: Optional[set[str]] = None
) -> EmState:
    """One pass of E-step, (beta, gamma) profile search, shape and theta updates."""
    hits = hits if hits is not None else set()
    p = state.params
    family = p.family
    b = e_step(p, s)
    weights = tie_weights(p.base)

    def objective(x: np.ndarray) -> float:
        return pseudo_profile_objective(
            math.exp(x[0]), math.exp(x[1]), s, b, weights, family, p.theta
        )

    start = (math.log(p.base.beta), math.log(max(p.base.gamma, GAMMA_BOUNDS[0])))
    found = nelder_mead_2d(objective, start, max_iter=config.inner_max_iter)
    beta = _clip(math.exp(found.argmax[0]), BETA_BOUNDS, "beta", hits)
    gamma = _clip(math.exp(found.argmax[1]), GAMMA_BOUNDS, "gamma", hits)

    update = m_step_alphas(s, b, weights, beta, gamma)
    for name, flagged in zip(("alpha1", "alpha2", "alpha3"), update.clamped):
        if flagged:
            hits.add(name)
    theta = m_step_theta(family, float(np.mean(b)))
    if theta.clamped:
        hits.add("theta")
    margin = family.support_bound - THETA_MARGIN
    params = BglfrpsParams(
        BglfrParams(update.alpha1, update.alpha2, update.alpha3, beta, gamma),
        family,
        min(max(theta.theta, THETA_MARGIN), margin),
    )
    return EmState(params, b, weights, observed_loglik(params, s), state.iteration + 1)


def _encode(p: BglfrpsParams) -> np.ndarray:
    b = p.base
    x = [math.log(b.alpha1), math.log(b.alpha2), math.log(b.alpha3)]
    x += [math.log(b.beta), math.log(max(b.gamma, GAMMA_BOUNDS[0]))]
    if not p.family.is_degenerate:
        s = p.family.support_bound
        x.append(float(logit(p.theta / s)) if math.isfinite(s) else math.log(p.theta))
    return np.array(x)


def _decode(x: np.ndarray, family: PowerSeriesFamily, hits: set[str]) -> BglfrpsParams:
    a1, a2, a3 = (
        _clip(math.exp(v), ALPHA_BOUNDS, name, hits)
        for v, name in zip(x[:3], ("alpha1", "alpha2", "alpha3"))
    )
    beta = _clip(math.exp(x[3]), BETA_BOUNDS, "beta", hits)
    gamma = _clip(math.exp(x[4]), GAMMA_BOUNDS, "gamma", hits)
    if family.is_degenerate:
        theta = 1.0
    else:
        s = family.support_bound
        raw = s * float(expit(x[5])) if math.isfinite(s) else math.exp(x[5])
        upper = s - THETA_MARGIN if math.isfinite(s) else math.inf
        theta = _clip(raw, (THETA_MARGIN, upper), "theta", hits)
    return BglfrpsParams(BglfrParams(a1, a2, a3, beta, gamma), family, theta)


def polish(
    p: BglfrpsParams, s: BivariateSample, max_iter: int
) -> tuple[BglfrpsParams, float, set[str]]:
    """Maximize the observed log-likelihood directly from p over all free parameters."""

    def objective(x: np.ndarray) -> float:
        try:
            with np.errstate(over="ignore"):
                return observed_loglik(_decode(x, p.family, set()), s)
        except (DomainError, OverflowError):
            return -math.inf

    def search(start: np.ndarray) -> SearchResult:
        return nelder_mead(objective, start, max_iter, POLISH_XATOL, POLISH_FATOL)

    found = search(_encode(p))
    # restart from the best point with a fresh simplex
    for _ in range(POLISH_RESTARTS):
        run = search(found.argmax)
        if run.value > found.value:
            found = run
    hits: set[str] = set()
    best = _decode(found.argmax, p.family, hits)
    return best, observed_loglik(best, s), hits


def em_fit(
    sample: BivariateSample,
    family: PowerSeriesFamily,
    init: Optional[BglfrpsParams] = None,
    config: Optional[Config] = None,
) -> FitReport:
    """
    Fit a BGLFRPS model by EM, then optionally polish by direct maximization.

    The loop stops when the relative change of the observed log-likelihood
    falls below config.tol or after config.max_iter iterations. The reported
    estimate is the best iterate seen, not necessarily the last.

    Args:
        sample: Observed pairs
        family: Power-series family of N
        init: Starting parameters (defaults to initial_params)
        config: Tolerances and iteration caps

    Returns:
        FitReport with the best estimate and the log-likelihood trace

    Raises:
        DegenerateDataError: If the sample has fewer than six observations
    """
    config = config or Config()
    if sample.m < MIN_OBSERVATIONS:
        raise DegenerateDataError(
            f"need at least {MIN_OBSERVATIONS} observations, got {sample.m}"
        )
    started = time.time()

    params = init if init is not None else initial_params(sample, family)
    loglik = observed_loglik(params, sample)
    state = EmState(params, e_step(params, sample), tie_weights(params.base), loglik, 0)
    trace = [loglik]
    best = state
    hits: set[str] = set()
    converged = False

    while state.iteration < config.max_iter:
        previous = state.loglik
        state = em_step(state, sample, config, hits)
        trace.append(state.loglik)
        if state.loglik > best.loglik:
            best = state
        if math.isfinite(state.loglik) and math.isfinite(previous):
            if abs(state.loglik - previous) / (abs(previous) + 1.0) < config.tol:
                converged = True
                break

    mle, loglik = best.params, best.loglik
    polished = False
    if config.polish:
        candidate, value, polish_hits = polish(mle, sample, config.polish_max_iter)
        if value > loglik:
            mle, loglik, polished = candidate, value, True
            trace.append(value)
            hits |= polish_hits

    return FitReport(
        mle=mle,
        loglik=loglik,
        iterations=state.iteration,
        converged=converged,
        loglik_trace=trace,
        m0=sample.m0,
        m1=sample.m1,
        m2=sample.m2,
        family=family.spec,
        n_params=5 if family.is_degenerate else 6,
        clamped=sorted(hits),
        polished=polished,
        elapsed=time.time() - started,
    )
