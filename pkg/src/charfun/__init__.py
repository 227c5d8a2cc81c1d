"""Exact distributions of multivariate test statistics by numerical inversion
of their characteristic functions.
"""
from ._backend import BACKEND
from .cf import (
    BartlettCoefficients,
    CharacteristicFunction,
    StatisticSpec,
    bartlett_coefficients,
    product,
    shift_scale,
)
from .errors import CharfunError, ConvergenceError, DomainError, MomentError, PoleError
from .inversion import (
    DistributionResult,
    InversionOptions,
    ResolvedGrid,
    cf2dist,
    chi2_quantile,
    estimate_moments,
    invert_cdf,
    invert_pdf,
    quantile,
    resolve_grid,
    wilks_chi2_approx_quantile,
)

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "BartlettCoefficients",
    "CharacteristicFunction",
    "CharfunError",
    "ConvergenceError",
    "DistributionResult",
    "DomainError",
    "InversionOptions",
    "MomentError",
    "PoleError",
    "ResolvedGrid",
    "StatisticSpec",
    "bartlett_coefficients",
    "cf2dist",
    "chi2_quantile",
    "estimate_moments",
    "invert_cdf",
    "invert_pdf",
    "product",
    "quantile",
    "resolve_grid",
    "shift_scale",
    "wilks_chi2_approx_quantile",
]
