"""Hadamard convolution and the hypergeometric operators f -> z F(z) * f(z)."""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass

import numpy as np

from .classes import PowerSeries
from .errors import DomainError, PoleError, RangeError
from .identities import CubicSplit, QuarticSplit
from .numerics import SeriesParams

DEFAULT_TERMS = 64
#: Switch to log-space coefficients above this magnitude.
LOG_SWITCH = 1e280
LOG_MAX = math.log(np.finfo(float).max)


class OperatorFamily(enum.Enum):
    CUBIC = "cubic"
    QUARTIC = "quartic"
    GENERIC = "generic"


@dataclass(frozen=True)
class OperatorSpec:
    family: OperatorFamily
    params: CubicSplit | QuarticSplit | SeriesParams

    def __post_init__(self) -> None:
        expected = {OperatorFamily.CUBIC: CubicSplit,
                    OperatorFamily.QUARTIC: QuarticSplit,
                    OperatorFamily.GENERIC: SeriesParams}[self.family]
        if type(self.params) is not expected:
            raise DomainError(f"{self.family.value} operator needs {expected.__name__} parameters")

    def series_params(self) -> SeriesParams:
        if isinstance(self.params, SeriesParams):
            return self.params
        return self.params.series_params()

    @classmethod
    def cubic(cls, a: float, b: float, c: float) -> "OperatorSpec":
        return cls(OperatorFamily.CUBIC, CubicSplit(a, b, c))

    @classmethod
    def quartic(cls, a: float, b: float, c: float) -> "OperatorSpec":
        return cls(OperatorFamily.QUARTIC, QuarticSplit(a, b, c))


def hadamard(f: PowerSeries, g: PowerSeries) -> PowerSeries:
    """Coefficientwise product, truncated to the shorter series."""
    n = min(f.degree, g.degree)
    return PowerSeries(f.coefficients[:n] * g.coefficients[:n])


def _ratio(upper, lower, m: int) -> float:
    """t_{m+1}/t_m for the pFq term at unit argument."""
    num = 1.0
    for x in upper:
        num *= x + m
    den = float(m + 1)
    for y in lower:
        den *= y + m
    if den == 0.0:
        raise PoleError(f"denominator Pochhammer vanishes at index {m + 1}")
    return num / den


def operator_coefficients(spec: OperatorSpec, n_terms: int = DEFAULT_TERMS) -> PowerSeries:
    """Coefficients A_1..A_N of z pFq(z): A_1 = 1, A_{n+1} = t_n."""
    if n_terms < 1:
        raise DomainError("need at least one coefficient")
    params = spec.series_params()
    upper, lower = params.numerator, params.denominator
    out = np.zeros(n_terms)
    out[0] = 1.0
    value, sign, log_mag, in_log = 1.0, 1.0, 0.0, False
    for m in range(n_terms - 1):
        r = _ratio(upper, lower, m)
        if r == 0.0:
            break  # terminating series: remaining coefficients stay 0
        if not in_log:
            value *= r
            if abs(value) <= LOG_SWITCH:
                out[m + 1] = value
                continue
            # continue in log space from the last stored coefficient
            in_log = True
            sign = math.copysign(1.0, out[m]) * math.copysign(1.0, r)
            log_mag = math.log(abs(out[m])) + math.log(abs(r))
        else:
            sign *= math.copysign(1.0, r)
            log_mag += math.log(abs(r))
        if log_mag > LOG_MAX:
            raise RangeError(f"operator coefficient A_{m + 2} overflows a double")
        out[m + 1] = sign * math.exp(log_mag)
    tail = None
    if out[-1] != 0.0:
        r_next = abs(_ratio(upper, lower, n_terms - 1))
        if r_next < 1:
            tail = abs(out[-1]) * r_next / (1 - r_next)
    return PowerSeries(out, tail_bound=tail)


def apply_operator(spec: OperatorSpec, f: PowerSeries, n_terms: int | None = None) -> PowerSeries:
    """Coefficients A_n a_n of z F(z) * f(z), up to z^N."""
    n = f.degree if n_terms is None else n_terms
    coeffs = operator_coefficients(spec, n)
    out = hadamard(coeffs, f)
    return PowerSeries(out.coefficients, tail_bound=coeffs.tail_bound)
