"""
bglfrps - Bivariate generalized linear failure rate-power series distributions.

This package provides the distribution functions, samplers and EM fitting of
the BGLFRPS class together with goodness-of-fit statistics and a run log.
"""

from .bglfr import BglfrParams, bglfr_cdf, bglfr_sample
from .bglfrps import (
    BglfrpsParams,
    DensityGrid,
    JointDensityValue,
    ac_singular_split,
    conditional_cdf_given_le,
    conditional_n_mean,
    conditional_n_pmf,
    density_grid,
    joint_cdf,
    joint_pdf,
    limit_theta_zero_reference,
    marginal,
    sample,
    total_mass,
)
from .errors import (
    BglfrpsError,
    BracketError,
    DegenerateDataError,
    DomainError,
    IngestionError,
    UndefinedConditionalError,
)
from .fitting import BivariateSample, FitReport, em_fit, observed_loglik
from .glfr import GlfrParams, glfr_cdf, glfr_pdf, glfr_quantile, glfr_sample
from .glfrps import GlfrpsParams, glfrps_cdf, glfrps_pdf
from .gof import GofReport, goodness_of_fit, information_criteria, ks_test, lrt
from .powerseries import (
    Binomial,
    CustomPolynomial,
    Geometric,
    Logarithmic,
    NegativeBinomial,
    Poisson,
    PowerSeriesFamily,
    parse_family,
)
from .typing_ import Component, Config, FamilyName, Region
from .version import __version__

__all__ = [
    "__version__",
    "BglfrParams",
    "BglfrpsParams",
    "BglfrpsError",
    "Binomial",
    "BivariateSample",
    "BracketError",
    "Component",
    "Config",
    "CustomPolynomial",
    "DegenerateDataError",
    "DensityGrid",
    "DomainError",
    "FamilyName",
    "FitReport",
    "Geometric",
    "GlfrParams",
    "GlfrpsParams",
    "GofReport",
    "IngestionError",
    "JointDensityValue",
    "Logarithmic",
    "NegativeBinomial",
    "Poisson",
    "PowerSeriesFamily",
    "Region",
    "UndefinedConditionalError",
    "ac_singular_split",
    "bglfr_cdf",
    "bglfr_sample",
    "conditional_cdf_given_le",
    "conditional_n_mean",
    "conditional_n_pmf",
    "density_grid",
    "em_fit",
    "glfr_cdf",
    "glfr_pdf",
    "glfr_quantile",
    "glfr_sample",
    "glfrps_cdf",
    "glfrps_pdf",
    "goodness_of_fit",
    "information_criteria",
    "joint_cdf",
    "joint_pdf",
    "ks_test",
    "limit_theta_zero_reference",
    "lrt",
    "marginal",
    "observed_loglik",
    "parse_family",
    "sample",
    "total_mass",
]
