"""Scalar kernels: Pochhammer symbols, Gamma ratios and pFq summation."""

from .gamma import (gamma_quotient, gamma_ratio, gen_binomial, log_gamma,
                    log_pochhammer, pochhammer)
from .hypergeometric import (ConvergenceClass, SeriesParams, convergence_class,
                             gauss2f1_at_minus1, gauss2f1_terminating_at_minus1,
                             hyper_terms, pfq)
from .summation import EvalConfig, EvalResult, sum_accelerated, sum_series

__all__ = [
    "ConvergenceClass", "EvalConfig", "EvalResult", "SeriesParams",
    "convergence_class", "gamma_quotient", "gamma_ratio", "gauss2f1_at_minus1",
    "gauss2f1_terminating_at_minus1", "gen_binomial", "hyper_terms",
    "log_gamma", "log_pochhammer", "pfq", "pochhammer", "sum_accelerated",
    "sum_series",
]
