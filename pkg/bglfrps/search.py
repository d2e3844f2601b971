"""Derivative-free maximization and bracketed root finding."""

import math
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from .errors import BracketError
from .typing_ import Objective

XATOL = 1e-8
FATOL = 1e-8
SIMPLEX_MAX_ITER = 500
ROOT_MAX_ITER = 200
ROOT_XTOL = 1e-14


@dataclass(frozen=True)
class SearchResult:
    """Outcome of a maximization."""

    argmax: np.ndarray
    value: float
    converged: bool
    restarted: bool
    evaluations: int


def nelder_mead(
    objective: Objective,
    start: Sequence[float],
    max_iter: int = SIMPLEX_MAX_ITER,
    xatol: float = XATOL,
    fatol: float = FATOL,
) -> SearchResult:
    """
    Maximize an objective with the Nelder-Mead simplex.

    Non-finite objective values rank below every finite one. If the first
    run does not converge, the search restarts once from a perturbed copy
    of its best point.

    Args:
        objective: Function of a 1-D array to maximize
        start: Starting point
        max_iter: Iteration cap per run
        xatol: Absolute tolerance on the simplex size
        fatol: Absolute tolerance on objective spread

    Returns:
        SearchResult with the best point found
    """

    def loss(x: np.ndarray) -> float:
        value = objective(x)
        return -value if math.isfinite(value) else math.inf

    x0 = np.asarray(start, dtype=float)
    options = {
        "maxiter": max_iter,
        "maxfev": 2 * max_iter,
        "xatol": xatol,
        "fatol": fatol,
        "adaptive": x0.size > 2,
    }
    res = optimize.minimize(loss, x0, method="Nelder-Mead", options=options)
    evaluations = int(res.nfev)
    restarted = False
    if not res.success:
        restarted = True
        perturbed = res.x + 0.05 * np.where(res.x != 0, np.abs(res.x), 1.0)
        retry = optimize.minimize(
            loss, perturbed, method="Nelder-Mead", options=options
        )
        evaluations += int(retry.nfev)
        if retry.fun <= res.fun:
            res = retry
        else:
            res = optimize.OptimizeResult(x=res.x, fun=res.fun, success=retry.success)

    return SearchResult(
        argmax=np.asarray(res.x, dtype=float),
        value=-float(res.fun),
        converged=bool(res.success),
        restarted=restarted,
        evaluations=evaluations,
    )


def nelder_mead_2d(
    objective: Objective,
    start: Sequence[float],
    max_iter: int = SIMPLEX_MAX_ITER,
) -> SearchResult:
    """Two-coordinate Nelder-Mead maximization, see nelder_mead."""
    if len(start) != 2:
        raise ValueError(f"expected a 2-D start point, got {len(start)} coordinates")
    return nelder_mead(objective, start, max_iter=max_iter)


def brent_root(
    fn: Callable[[float], float],
    bracket: tuple[float, float],
    xtol: float = ROOT_XTOL,
    max_iter: int = ROOT_MAX_ITER,
) -> float:
    """
    Root of fn inside a sign-changing bracket (Brent's method).

    Raises:
        BracketError: If fn does not change sign on the bracket
    """
    lower, upper = bracket
    f_lower, f_upper = fn(lower), fn(upper)
    if f_lower == 0.0:
        return float(lower)
    if f_upper == 0.0:
        return float(upper)
    if np.sign(f_lower) == np.sign(f_upper) or not (
        math.isfinite(f_lower) and math.isfinite(f_upper)
    ):
        raise BracketError(lower, upper, f_lower, f_upper)
    return float(optimize.brentq(fn, lower, upper, xtol=xtol, maxiter=max_iter))
