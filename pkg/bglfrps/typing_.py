"""Type definitions and enums for bglfrps."""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Union

import numpy as np


class FamilyName(Enum):
    """Named zero-truncated power-series families."""

    GEOMETRIC = "geometric"
    POISSON = "poisson"
    LOGARITHMIC = "logarithmic"
    BINOMIAL = "binomial"
    NEGATIVE_BINOMIAL = "negbinomial"
    CUSTOM_POLYNOMIAL = "poly"


class Region(Enum):
    """Where a point sits relative to the diagonal."""

    LOWER = "Lower"  # y1 < y2
    UPPER = "Upper"  # y1 > y2
    DIAGONAL = "Diagonal"  # y1 == y2


class Component(Enum):
    """Univariate functionals of a bivariate observation."""

    Y1 = "Y1"
    Y2 = "Y2"
    MAX = "Max"


@dataclass
class Config:
    """Configuration for fitting and run logging."""

    tol: float = 1e-6
    max_iter: int = 1000
    inner_max_iter: int = 500
    polish: bool = True
    polish_max_iter: int = 20000
    tie_tol: float = 0.0
    seed: int = 2014
    log_runs: bool = True


# Type aliases
ArrayLike = Union[float, np.ndarray]
Objective = Callable[[np.ndarray], float]
UnivariateCdf = Callable[[np.ndarray], np.ndarray]
