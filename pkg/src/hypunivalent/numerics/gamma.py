"""Pochhammer symbols, Gamma ratios and generalized binomial coefficients."""

from __future__ import annotations

import itertools
import math
import sys
from collections.abc import Sequence

from ..errors import DomainError, PoleError, RangeError


def _check_order(n: int) -> None:
    if n < 0 or int(n) != n:
        raise DomainError(f"order must be a non-negative integer, got {n!r}")


def pochhammer(a: float, n: int) -> float:
    """Rising factorial (a)_n = a (a+1) ... (a+n-1)."""
    _check_order(n)
    out = 1.0
    for k in range(int(n)):
        out *= a + k
        if math.isinf(out):
            raise RangeError(f"({a})_{n} overflows; use log_pochhammer")
    return out


def log_gamma(x: float) -> float:
    """ln Gamma(x) for x > 0."""
    if not x > 0:
        raise DomainError(f"log_gamma requires a positive argument, got {x!r}")
    return math.lgamma(x)


def log_pochhammer(a: float, n: int) -> float:
    """ln (a)_n for a > 0, via a difference of log-Gamma values."""
    _check_order(n)
    if not a > 0:
        raise DomainError(f"log_pochhammer requires a > 0, got {a!r}")
    if n == 0:
        return 0.0
    return log_gamma(a + n) - log_gamma(a)


#: Above this argument math.gamma overflows a double.
GAMMA_DIRECT_MAX = 171.0


def gamma_ratio(num_args: Sequence[float], den_args: Sequence[float]) -> float:
    """prod Gamma(num_args) / prod Gamma(den_args), all arguments positive.

    Moderate arguments use interleaved direct quotients, which keep a few ulp
    of relative accuracy; exponentiating a sum of log-Gamma values loses
    about ulp(ln Gamma) instead. Large arguments fall back to log space.
    """
    for x in (*num_args, *den_args):
        if not x > 0:
            raise DomainError(f"gamma_ratio requires positive arguments, got {x!r}")
    if max((*num_args, *den_args), default=0.0) < GAMMA_DIRECT_MAX:
        out = 1.0
        for x, y in itertools.zip_longest(num_args, den_args):
            out *= (math.gamma(x) if x is not None else 1.0) / (
                math.gamma(y) if y is not None else 1.0)
        if math.isfinite(out) and abs(out) >= sys.float_info.min:
            return out
    total = 0.0
    for x in num_args:
        total += log_gamma(x)
    for x in den_args:
        total -= log_gamma(x)
    try:
        return math.exp(total)
    except OverflowError as exc:
        raise RangeError("Gamma ratio overflows a double") from exc


def gamma_quotient(x: float, y: float) -> float:
    """Gamma(x)/Gamma(y) for real x, y that are not poles.

    Arguments at or below zero are lifted by the recurrence
    Gamma(x) = Gamma(x+m) / (x)_m before taking the log-space ratio.
    """
    for v in (x, y):
        if v <= 0 and v == math.floor(v):
            raise PoleError(f"Gamma has a pole at {v!r}")
    m = 0
    while min(x, y) + m <= 0:
        m += 1
    ratio = gamma_ratio([x + m], [y + m])
    if m:
        ratio *= pochhammer(y, m) / pochhammer(x, m)
    return ratio


def gen_binomial(a: float, n: int) -> float:
    """Generalized binomial coefficient C(-a, n) = (-1)^n (a)_n / n!."""
    _check_order(n)
    out = 1.0
    for k in range(int(n)):
        out *= -(a + k) / (k + 1)
    return out
