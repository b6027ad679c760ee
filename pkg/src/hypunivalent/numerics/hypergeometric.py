"""Generalized hypergeometric series on the real segment [-1, 1]."""

from __future__ import annotations

import enum
import math
from collections.abc import Iterator, Sequence
from dataclasses import dataclass

import numpy as np
from scipy.special import bernoulli, zeta

from ..errors import DivergenceError, DomainError, PoleError
from .summation import (EvalConfig, EvalResult, _Neumaier, sum_accelerated,
                        sum_series)

MAX_PARAMS = 8


def _is_nonpositive_int(x: float) -> bool:
    return x <= 0 and x == math.floor(x)


@dataclass(frozen=True)
class SeriesParams:
    """Upper (numerator) and lower (denominator) parameter lists of pFq."""

    numerator: tuple[float, ...]
    denominator: tuple[float, ...]

    def __init__(self, numerator: Sequence[float] = (), denominator: Sequence[float] = ()):
        num = tuple(float(x) for x in numerator)
        den = tuple(float(x) for x in denominator)
        if len(num) > MAX_PARAMS or len(den) > MAX_PARAMS:
            raise DomainError(f"at most {MAX_PARAMS} parameters per list")
        for x in num + den:
            if not math.isfinite(x):
                raise DomainError(f"non-finite parameter {x!r}")
        for x in den:
            if _is_nonpositive_int(x):
                raise PoleError(f"denominator parameter {x!r} is a non-positive integer")
        object.__setattr__(self, "numerator", num)
        object.__setattr__(self, "denominator", den)

    @property
    def p(self) -> int:
        return len(self.numerator)

    @property
    def q(self) -> int:
        return len(self.denominator)

    @property
    def excess(self) -> float:
        """Sum of lower minus sum of upper parameters."""
        return sum(self.denominator) - sum(self.numerator)

    def terminates(self) -> bool:
        return any(_is_nonpositive_int(x) for x in self.numerator)


class ConvergenceClass(enum.Enum):
    ABSOLUTE = "Absolute"
    CONDITIONAL = "Conditional"
    DIVERGENT = "Divergent"


def convergence_class(params: SeriesParams, z: float) -> ConvergenceClass:
    """Classify the series at real z.

    p <= q, or p = q+1 with |z| < 1: absolute. On |z| = 1 with p = q+1 the
    parameter excess s decides: s > 0 absolute, and at z = -1 only,
    -1 < s <= 0 conditional. Everything else diverges. Terminating series
    are classified by the same rule.
    """
    if params.p <= params.q:
        return ConvergenceClass.ABSOLUTE
    if params.p == params.q + 1:
        if abs(z) < 1:
            return ConvergenceClass.ABSOLUTE
        if abs(z) == 1:
            s = params.excess
            if s > 0:
                return ConvergenceClass.ABSOLUTE
            if z == -1 and s > -1:
                return ConvergenceClass.CONDITIONAL
    return ConvergenceClass.DIVERGENT


def hyper_terms(upper: Sequence[float], lower: Sequence[float], z: float) -> Iterator[float]:
    """Terms of sum prod(upper)_n / prod(lower)_n z^n / n! by running ratio.

    The iterator stops after the last non-zero term of a terminating series.
    """
    t = 1.0
    n = 0
    while True:
        yield t
        num = z
        for x in upper:
            num *= x + n
        if num == 0.0:
            return
        den = float(n + 1)
        for y in lower:
            den *= y + n
        if den == 0.0:
            raise PoleError(f"denominator Pochhammer vanishes at index {n + 1}")
        t *= num / den
        n += 1


def _bernoulli_poly(m: int, x: float, bern: np.ndarray) -> float:
    return sum(math.comb(m, j) * bern[j] * x ** (m - j) for j in range(m + 1))


def _log_term_expansion(upper, lower, order: int) -> list[float]:
    """Coefficients e_m with t(n) ~ C n^{-s-1} sum_m e_m n^{-m}.

    From the Bernoulli-polynomial expansion of ln Gamma(n + x).
    """
    bern = bernoulli(order + 1)
    d = [0.0]
    for k in range(1, order + 1):
        tot = sum(_bernoulli_poly(k + 1, x, bern) for x in upper)
        tot -= sum(_bernoulli_poly(k + 1, y, bern) for y in lower)
        tot -= _bernoulli_poly(k + 1, 1.0, bern)
        d.append(float((-1) ** (k + 1) * tot / (k * (k + 1))))
    e = [1.0]
    for m in range(1, order + 1):
        e.append(sum(k * d[k] * e[m - k] for k in range(1, m + 1)) / m)
    return e


TAIL_ORDER = 24


def _sum_unit_argument(params: SeriesParams, cfg: EvalConfig, label: str) -> EvalResult:
    """Sum a p = q+1 series at z = 1 using an asymptotic tail.

    Partial sum to N-1 plus t_N-scaled Hurwitz zeta sums for the tail; N is
    doubled until the smallest tail-expansion term meets the tolerance.
    """
    upper, lower = params.numerator, params.denominator
    s = params.excess
    scale = max([1.0] + [abs(x) for x in upper + lower])
    e = _log_term_expansion(upper, lower, TAIL_ORDER)
    terms = hyper_terms(upper, lower, 1.0)
    acc = _Neumaier()
    used = 0
    n_target = max(cfg.min_terms, 32, int(math.ceil(4 * scale)))
    while True:
        n_target = min(n_target, cfg.max_terms)
        t_n = None
        for t in terms:
            if used == n_target:
                t_n = t
                break
            acc.add(t)
            used += 1
        if t_n is None:
            # terminated before reaching N
            return EvalResult(acc.value, used, True, 0.0, label)
        N = float(n_target)
        head = sum(em * N ** -m for m, em in enumerate(e))
        scale_c = t_n * N ** (s + 1) / head
        tail = _Neumaier()
        err = math.inf
        prev = math.inf
        for m, em in enumerate(e):
            piece = scale_c * em * float(zeta(s + 1 + m, N))
            if abs(piece) > prev and m > 2:
                break
            tail.add(piece)
            prev = abs(piece)
            err = abs(piece)
            if err <= 0.1 * cfg.rel_tol * abs(acc.value + tail.value):
                break
        value = acc.value + tail.value
        if err <= cfg.rel_tol * abs(value):
            return EvalResult(value, used, True, err, label)
        if n_target >= cfg.max_terms:
            return EvalResult(value, used, False, err, label)
        acc.add(t_n)
        used += 1
        n_target *= 2


def pfq(params: SeriesParams, z: float, cfg: EvalConfig | None = None,
        label: str = "") -> EvalResult:
    """Evaluate pFq(params; z) for real z in [-1, 1]."""
    cfg = cfg or EvalConfig()
    z = float(z)
    if not -1.0 <= z <= 1.0:
        raise DomainError(f"z must lie in [-1, 1], got {z!r}")
    if z == 0.0:
        return EvalResult(1.0, 1, True, 0.0, label)
    cls = convergence_class(params, z)
    if cls is ConvergenceClass.DIVERGENT and not params.terminates():
        raise DivergenceError(
            f"series diverges at z={z!r} (p={params.p}, q={params.q}, "
            f"excess={params.excess!r})")
    upper, lower = params.numerator, params.denominator
    if params.terminates() or abs(z) < 1 or params.p <= params.q:
        return sum_series(hyper_terms(upper, lower, z), cfg, label)
    if z == 1.0:
        return _sum_unit_argument(params, cfg, label)
    return sum_accelerated(hyper_terms(upper, lower, z), cfg, label)


def gauss2f1_terminating_at_minus1(n: int, b: float, c: float) -> float:
    """Finite sum 2F1(-n, b; c; -1) = sum_k (-n)_k (b)_k / ((c)_k k!) (-1)^k."""
    if n < 0 or int(n) != n:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    total = 1.0
    t = 1.0
    for k in range(int(n)):
        den = (c + k) * (k + 1)
        if den == 0.0:
            raise PoleError(f"(c)_k vanishes for c={c!r}, k={k + 1}")
        t *= (k - n) * (b + k) / den * -1.0
        total += t
    return total


def gauss2f1_at_minus1(a: float, b: float, c: float, cfg: EvalConfig | None = None,
                       label: str = "") -> EvalResult:
    """2F1(a, b; c; -1) through the Pfaff transformation.

    2F1(a,b;c;-1) = 2^-a 2F1(a, c-b; c; 1/2), a geometrically convergent
    series; it coincides with the (Abel) sum of the alternating series.
    """
    cfg = cfg or EvalConfig()
    if _is_nonpositive_int(c):
        raise PoleError(f"c={c!r} is a non-positive integer")
    res = sum_series(hyper_terms((a, c - b), (c,), 0.5), cfg, label)
    return res.scaled(2.0 ** -a)
