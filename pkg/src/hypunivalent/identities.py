"""Summation formulas for the cubic (4F3) and quartic (5F4) parameter splits.

Each weighted sum is available two ways: directly as a hypergeometric
series at z = 1, and in closed form as Gamma prefactors times outer sums
of Gauss functions at -1 (Driver-Johnston and Coffey-Johnston type).
"""

from __future__ import annotations

import enum
import math
from collections.abc import Iterator
from dataclasses import dataclass

from .errors import DomainError, PoleError
from .numerics import (EvalConfig, EvalResult, SeriesParams, gamma_quotient,
                       gamma_ratio, pfq, pochhammer,
                       sum_accelerated)
from .numerics.summation import WORK, combine

#: Subtrahend/result ratio above which a cancellation warning is attached.
CANCELLATION_WARN = 1e6


class Family(enum.Enum):
    CUBIC = "cubic"
    QUARTIC = "quartic"


class Weight(enum.Enum):
    NPLUS1 = "n+1"
    NPLUS1_SQ = "(n+1)^2"
    NPLUS1_CUBE = "(n+1)^3"
    INV_NPLUS1 = "1/(n+1)"


class Side(enum.Enum):
    DIRECT = "direct"
    CLOSED_FORM = "closed-form"


class Case(enum.Enum):
    BASE = "base"
    W1 = "w1"
    W2 = "w2"
    W3 = "w3"
    W4 = "w4"

    @property
    def weight(self) -> Weight | None:
        return _CASE_WEIGHT[self]


_CASE_WEIGHT = {
    Case.BASE: None,
    Case.W1: Weight.NPLUS1,
    Case.W2: Weight.NPLUS1_SQ,
    Case.W3: Weight.NPLUS1_CUBE,
    Case.W4: Weight.INV_NPLUS1,
}

# (extra upper, extra lower) parameters turning t_n into w(n) t_n
_WEIGHT_AUGMENT = {
    None: ((), ()),
    Weight.NPLUS1: ((2.0,), (1.0,)),
    Weight.NPLUS1_SQ: ((2.0, 2.0), (1.0, 1.0)),
    Weight.NPLUS1_CUBE: ((2.0, 2.0, 2.0), (1.0, 1.0, 1.0)),
    Weight.INV_NPLUS1: ((1.0,), (2.0,)),
}


@dataclass(frozen=True)
class _Split:
    a: float
    b: float
    c: float

    parts = 1

    def __post_init__(self) -> None:
        for name in ("a", "b", "c"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise DomainError(f"{name} must be a finite real, got {v!r}")
        if self.a < 0:
            raise DomainError(f"a must be non-negative, got {self.a!r}")
        if not self.b > 0:
            raise DomainError(f"b must be positive, got {self.b!r}")
        if not self.c > 0:
            raise DomainError(f"c must be positive, got {self.c!r}")

    def series_params(self, weight: Weight | None = None) -> SeriesParams:
        k = self.parts
        up_extra, lo_extra = _WEIGHT_AUGMENT[weight]
        upper = [self.a] + [(self.b + j) / k for j in range(k)] + list(up_extra)
        lower = [(self.c + j) / k for j in range(k)] + list(lo_extra)
        return SeriesParams(upper, lower)


@dataclass(frozen=True)
class CubicSplit(_Split):
    """(a, b, c) generating 4F3(a, b/3, (b+1)/3, (b+2)/3; c/3, (c+1)/3, (c+2)/3; z)."""

    parts = 3


@dataclass(frozen=True)
class QuarticSplit(_Split):
    """(a, b, c) generating the 5F4 with quarters of b and of c."""

    parts = 4


@dataclass(frozen=True)
class IdentityReport:
    lhs: float
    rhs: float
    rel_error: float
    lhs_diagnostics: EvalResult
    rhs_diagnostics: EvalResult

    def to_dict(self) -> dict:
        return {
            "lhs": self.lhs,
            "rhs": self.rhs,
            "relError": self.rel_error,
            "lhsDiagnostics": self.lhs_diagnostics.to_dict(),
            "rhsDiagnostics": self.rhs_diagnostics.to_dict(),
        }


def rel_error(x: float, y: float) -> float:
    return abs(x - y) / max(abs(x), abs(y), 1.0)


# ---------------------------------------------------------------- outer sums

def _terminating_minus1(n: int, b, d):
    # extended-precision twin of gauss2f1_terminating_at_minus1; all terms > 0
    total = t = WORK(1)
    for k in range(n):
        t *= (n - k) * (b + k) / ((d + k) * (k + 1))
        total += t
    return total


def _dj_terms(a: float, b: float, c: float) -> Iterator:
    """(a)_n (-1)^n (b)_n / (n! (c-a)_n) * 2F1(-n, b+n; c-a+n; -1)."""
    a, b, d = WORK(a), WORK(b), WORK(c) - WORK(a)
    pre = WORK(1)
    n = 0
    while True:
        if n and d + n - 1 <= 0 and d + n - 1 == int(d + n - 1):
            raise PoleError(f"(c-a)_n vanishes at n={n}")
        yield pre * _terminating_minus1(n, b + n, d + n)
        num = (a + n) * (b + n)
        if num == 0:
            return
        pre *= -num / ((n + 1) * (d + n))
        n += 1


def dj_outer_sum(a: float, b: float, c: float, cfg: EvalConfig, label: str = "") -> EvalResult:
    """Outer series of the Driver-Johnston formula, without the Gamma prefactor.

    The series diverges geometrically for generic parameters; its value is
    the generalized (transformed) sum.
    """
    return sum_accelerated(_dj_terms(a, b, c), cfg, label)


def _pfaff_minus1(a, b, d, tol: float, max_terms: int) -> tuple[object, bool]:
    # 2F1(a, b; d; -1) = 2^-a 2F1(a, d-b; d; 1/2), summed in extended precision
    total = t = WORK(1)
    e = d - b
    small = 0
    for k in range(max_terms):
        num = (a + k) * (e + k)
        if num == 0:
            return total * WORK(2) ** -a, True
        t *= num / (2 * (d + k) * (k + 1))
        total += t
        small = small + 1 if abs(t) <= tol * abs(total) else 0
        if small >= 3:
            return total * WORK(2) ** -a, True
    return total * WORK(2) ** -a, False


def _cj_terms(a: float, b: float, c: float, cfg: EvalConfig,
              failures: list[str]) -> Iterator:
    """C(-a, n) Gamma(b+2n)/Gamma(c-a+2n) 2F1(a, b+2n; c-a+2n; -1)."""
    ratio = WORK(gamma_quotient(b, c - a))
    a, b, d = WORK(a), WORK(b), WORK(c) - WORK(a)
    binom = WORK(1)
    tol = min(cfg.rel_tol, 1e-18)
    n = 0
    while True:
        inner, ok = _pfaff_minus1(a, b + 2 * n, d + 2 * n, tol, cfg.max_terms)
        if not ok:
            failures.append(f"inner 2F1 at n={n} not converged")
        yield binom * ratio * inner
        if a + n == 0:
            return
        binom *= -(a + n) / (n + 1)
        ratio *= (b + 2 * n) * (b + 2 * n + 1) / ((d + 2 * n) * (d + 2 * n + 1))
        n += 1


def cj_outer_sum(a: float, b: float, c: float, cfg: EvalConfig, label: str = "") -> EvalResult:
    """Outer series of the Coffey-Johnston formula, without the Gamma prefactor."""
    failures: list[str] = []
    res = sum_accelerated(_cj_terms(a, b, c, cfg, failures), cfg, label)
    if failures:
        return EvalResult(res.value, res.terms_used, False, res.error_estimate,
                          label, tuple(failures[:3]))
    return res


def _require(cond: bool, text: str) -> None:
    if not cond:
        raise DomainError(f"precondition violated: {text}")


def _base_pre(p: _Split) -> None:
    _require(p.c > p.b > 0, "c > b > 0")
    _require(p.c - p.a - p.b > 0, "c - a - b > 0")


def cubic_prefactor(a: float, b: float, c: float) -> float:
    """Gamma(c)Gamma(c-a-b) / (Gamma(c-a)Gamma(c-b))."""
    return gamma_ratio([c, c - a - b], [c - a, c - b])


def quartic_prefactor(a: float, b: float, c: float) -> float:
    """Gamma(c)Gamma(c-a-b) / (Gamma(b)Gamma(c-b))."""
    return gamma_ratio([c, c - a - b], [b, c - b])


def driver_johnston_rhs(p: CubicSplit, cfg: EvalConfig | None = None) -> EvalResult:
    """Closed-form side of the 4F3(1) summation for the cubic split."""
    cfg = cfg or EvalConfig()
    _base_pre(p)
    g = cubic_prefactor(p.a, p.b, p.c)
    return dj_outer_sum(p.a, p.b, p.c, cfg, "driver-johnston").scaled(g)


def coffey_johnston_rhs(p: QuarticSplit, cfg: EvalConfig | None = None) -> EvalResult:
    """Closed-form side of the 5F4(1) summation for the quartic split."""
    cfg = cfg or EvalConfig()
    _base_pre(p)
    g = quartic_prefactor(p.a, p.b, p.c)
    return cj_outer_sum(p.a, p.b, p.c, cfg, "coffey-johnston").scaled(g)


# ------------------------------------------------------- shifted components

def cubic_shifted_sum(a: float, b: float, c: float, k: int, cfg: EvalConfig) -> EvalResult:
    """sum_n (a)_{n+k}(-1)^n(b)_{n+3k} / (n!(c-a)_{n+2k}(c-a-b-k)_k) 2F1(-n, b+3k+n; c-a+2k+n; -1)."""
    label = f"cubic-shift-{k}"
    if k == 0:
        return dj_outer_sum(a, b, c, cfg, label)
    coef = pochhammer(a, k) * pochhammer(b, 3 * k) / (
        pochhammer(c - a, 2 * k) * pochhammer(c - a - b - k, k))
    if coef == 0.0:
        return EvalResult(0.0, 1, True, 0.0, label)
    return dj_outer_sum(a + k, b + 3 * k, c + 3 * k, cfg, label).scaled(coef)


def quartic_shifted_sum(a: float, b: float, c: float, k: int, cfg: EvalConfig) -> EvalResult:
    """(a)_k/(c-a-b-k)_k sum_n C(-(a+k),n) Gamma(b+4k+2n)/Gamma(c-a+3k+2n) 2F1(a+k, b+4k+2n; c-a+3k+2n; -1)."""
    label = f"quartic-shift-{k}"
    if k == 0:
        return cj_outer_sum(a, b, c, cfg, label)
    coef = pochhammer(a, k) / pochhammer(c - a - b - k, k)
    if coef == 0.0:
        return EvalResult(0.0, 1, True, 0.0, label)
    return cj_outer_sum(a + k, b + 4 * k, c + 4 * k, cfg, label).scaled(coef)


def cubic_reciprocal_parts(a: float, b: float, c: float, cfg: EvalConfig) -> tuple[EvalResult, float]:
    """(W, K) with sum t_n/(n+1) = G * W - K for the cubic split."""
    coef = (c - a - 1) * (c - a - 2) * (c - a - b) / ((a - 1) * pochhammer(b - 3, 3))
    w = dj_outer_sum(a - 1, b - 3, c - 3, cfg, "cubic-reciprocal").scaled(coef)
    k = pochhammer(c - 3, 3) / ((a - 1) * pochhammer(b - 3, 3))
    return w, k


def quartic_reciprocal_parts(a: float, b: float, c: float, cfg: EvalConfig) -> tuple[EvalResult, float]:
    """(W, K) with sum t_n/(n+1) = G' * W - K for the quartic split."""
    coef = (c - a - b) / (a - 1)
    w = cj_outer_sum(a - 1, b - 4, c - 4, cfg, "quartic-reciprocal").scaled(coef)
    k = pochhammer(c - 4, 4) / ((a - 1) * pochhammer(b - 4, 4))
    return w, k


def _reciprocal_pre(p: _Split, parts: int) -> None:
    excluded = set(range(1, parts + 1))
    _require(p.a != 1, "a != 1")
    _require(p.b not in excluded, "b not in {" + ", ".join(map(str, sorted(excluded))) + "}")
    _require(p.c > max(p.a + parts - 1, p.a + p.b - 1),
             f"c > max(a+{parts - 1}, a+b-1)")
    _require(p.c > p.a + p.b, "c > a + b")


def _weight_pre(p: _Split, weight: Weight, parts: int) -> None:
    _require(p.c > p.b, "c > b")
    margin = {Weight.NPLUS1: 1, Weight.NPLUS1_SQ: 2, Weight.NPLUS1_CUBE: 3}
    if weight is Weight.INV_NPLUS1:
        _reciprocal_pre(p, parts)
    else:
        m = margin[weight]
        _require(p.c > p.a + p.b + m, f"c > a+b+{m}")


# Binomial-type coefficients of (n+1)^j in the falling factorial basis
# (n+1) = 1 + n, (n+1)^2 = 1 + 3n + n(n-1), (n+1)^3 = 1 + 7n + 6n(n-1) + n(n-1)(n-2)
_POWER_COMBOS = {
    Weight.NPLUS1: (1, 1),
    Weight.NPLUS1_SQ: (1, 3, 1),
    Weight.NPLUS1_CUBE: (1, 7, 6, 1),
}


def _closed_form(p: _Split, weight: Weight, cfg: EvalConfig, quartic: bool) -> EvalResult:
    a, b, c = p.a, p.b, p.c
    pref = quartic_prefactor(a, b, c) if quartic else cubic_prefactor(a, b, c)
    label = f"{'quartic' if quartic else 'cubic'}:{weight.value}:closed-form"
    if weight is Weight.INV_NPLUS1:
        parts_fn = quartic_reciprocal_parts if quartic else cubic_reciprocal_parts
        w, k = parts_fn(a, b, c, cfg)
        value = pref * w.value - k
        warns = []
        if abs(k) > CANCELLATION_WARN * abs(value):
            warns.append(f"cancellation: subtrahend {k:.3e} exceeds 1e6 x result {value:.3e}")
        return combine(value, [(pref, w)], label, warns)
    shift_fn = quartic_shifted_sum if quartic else cubic_shifted_sum
    coeffs = _POWER_COMBOS[weight]
    parts = [(coeffs[k], shift_fn(a, b, c, k, cfg)) for k in range(len(coeffs))]
    inner = math.fsum(w * r.value for w, r in parts)
    return combine(pref * inner, [(pref * w, r) for w, r in parts], label)


def _weighted_sum(p: _Split, weight: Weight, side: Side, cfg: EvalConfig | None,
                  quartic: bool) -> EvalResult:
    cfg = cfg or EvalConfig()
    parts = 4 if quartic else 3
    _weight_pre(p, weight, parts)
    if side is Side.DIRECT:
        label = f"{'quartic' if quartic else 'cubic'}:{weight.value}:direct"
        return pfq(p.series_params(weight), 1.0, cfg, label)
    return _closed_form(p, weight, cfg, quartic)


def cubic_weighted_sum(p: CubicSplit, weight: Weight, side: Side,
                       cfg: EvalConfig | None = None) -> EvalResult:
    """sum_n w(n) t_n for the cubic-split 4F3 terms t_n at z = 1."""
    return _weighted_sum(p, weight, side, cfg, quartic=False)


def quartic_weighted_sum(p: QuarticSplit, weight: Weight, side: Side,
                         cfg: EvalConfig | None = None) -> EvalResult:
    """sum_n w(n) t_n for the quartic-split 5F4 terms t_n at z = 1."""
    return _weighted_sum(p, weight, side, cfg, quartic=True)


def check_identity(family: Family, case: Case, params: tuple[float, float, float],
                   cfg: EvalConfig | None = None) -> IdentityReport:
    """Evaluate both sides of a summation identity and compare them."""
    cfg = cfg or EvalConfig()
    quartic = family is Family.QUARTIC
    split = (QuarticSplit if quartic else CubicSplit)(*map(float, params))
    if case is Case.BASE:
        rhs = (coffey_johnston_rhs if quartic else driver_johnston_rhs)(split, cfg)
        lhs = pfq(split.series_params(), 1.0, cfg, f"{family.value}:direct")
    else:
        fn = quartic_weighted_sum if quartic else cubic_weighted_sum
        lhs = fn(split, case.weight, Side.DIRECT, cfg)
        rhs = fn(split, case.weight, Side.CLOSED_FORM, cfg)
    return IdentityReport(lhs.value, rhs.value, rel_error(lhs.value, rhs.value), lhs, rhs)
