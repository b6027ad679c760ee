"""Summation engines: truncated sums, sequence transformations, diagnostics."""

from __future__ import annotations

import math
from collections.abc import Iterable, Iterator
from dataclasses import dataclass, field, replace

import numpy as np

from ..errors import DomainError

#: Transformation order cap for accelerated sums.
MAX_TRANSFORM_ORDER = 80
#: Consecutive small terms/differences required by the truncation rule.
CONSECUTIVE_SMALL = 3


@dataclass(frozen=True)
class EvalConfig:
    """Tolerances and term budgets for every series evaluation."""

    rel_tol: float = 1e-12
    max_terms: int = 100_000
    min_terms: int = 8
    abs_slack: float = 1e-9

    def __post_init__(self) -> None:
        if not 0 < self.rel_tol < 1:
            raise DomainError(f"rel_tol must lie in (0, 1), got {self.rel_tol!r}")
        if self.min_terms < 1 or self.max_terms < 1:
            raise DomainError("term budgets must be positive")
        if self.min_terms > self.max_terms:
            raise DomainError("min_terms must not exceed max_terms")
        if not self.abs_slack >= 0:
            raise DomainError(f"abs_slack must be non-negative, got {self.abs_slack!r}")


@dataclass(frozen=True)
class EvalResult:
    """A summed value together with its truncation diagnostics."""

    value: float
    terms_used: int
    converged: bool
    error_estimate: float
    label: str = ""
    warnings: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        out = {
            "value": self.value,
            "termsUsed": self.terms_used,
            "converged": self.converged,
            "errorEstimate": self.error_estimate,
        }
        if self.label:
            out["label"] = self.label
        if self.warnings:
            out["warnings"] = list(self.warnings)
        return out

    def labelled(self, label: str) -> "EvalResult":
        return replace(self, label=label)

    def scaled(self, factor: float) -> "EvalResult":
        return replace(self, value=self.value * factor,
                       error_estimate=abs(factor) * self.error_estimate)


def exact(value: float, label: str = "") -> EvalResult:
    return EvalResult(value, 1, True, 0.0, label)


def combine(value: float, parts: Iterable[tuple[float, EvalResult]],
            label: str = "", warnings: Iterable[str] = ()) -> EvalResult:
    """Diagnostics for a linear combination sum(w * part) (value given)."""
    parts = list(parts)
    used = sum(p.terms_used for _, p in parts)
    err = sum(abs(w) * p.error_estimate for w, p in parts)
    ok = all(p.converged for _, p in parts)
    warns = tuple(warnings) + tuple(w for _, p in parts for w in p.warnings)
    return EvalResult(value, used, ok, err, label, warns)


class _Neumaier:
    __slots__ = ("s", "c")

    def __init__(self) -> None:
        self.s = 0.0
        self.c = 0.0

    def add(self, x: float) -> None:
        t = self.s + x
        if abs(self.s) >= abs(x):
            self.c += (self.s - t) + x
        else:
            self.c += (x - t) + self.s
        self.s = t

    @property
    def value(self) -> float:
        return self.s + self.c


def sum_series(terms: Iterable[float], cfg: EvalConfig, label: str = "") -> EvalResult:
    """Ascending-order sum with the stopping rule.

    Stops once |term| <= rel_tol * |partial sum| has held for three
    consecutive terms and at least ``min_terms`` terms were added. A finite
    iterator (terminating series) ends the sum with an exact result.
    """
    acc = _Neumaier()
    used = 0
    small = 0
    last = 0.0
    for t in terms:
        acc.add(t)
        used += 1
        last = abs(t)
        if last <= cfg.rel_tol * abs(acc.value):
            small += 1
        else:
            small = 0
        if small >= CONSECUTIVE_SMALL and used >= cfg.min_terms:
            return EvalResult(acc.value, used, True, last, label)
        if used >= cfg.max_terms:
            return EvalResult(acc.value, used, False, last, label)
    return EvalResult(acc.value, used, True, 0.0, label)


#: Working precision of the sequence transformation (80-bit on x86-64).
WORK = np.longdouble


def _delta_weights(k: int, beta: float = 1.0) -> np.ndarray:
    """(-1)^j C(k,j) (beta+j)_{k-1} / (beta)_{k-1}, j = 0..k."""
    j = np.arange(1, k + 1, dtype=WORK)
    steps = -(k - j + 1) / j * (beta + j + k - 2) / (beta + j - 1)
    return np.concatenate((np.ones(1, dtype=WORK), np.cumprod(steps)))


def _pick_order(est: list[float], diffs: list[float]) -> int:
    """Index of the estimate whose changes on both sides are smallest."""
    best, best_score = len(est) - 1, math.inf
    for i in range(1, len(est)):
        right = diffs[i + 1] if i + 1 < len(diffs) else diffs[i]
        score = max(diffs[i], right)
        if score < best_score:
            best, best_score = i, score
    return best


def sum_accelerated(terms: Iterable[float], cfg: EvalConfig, label: str = "") -> EvalResult:
    """Generalized sum of an alternating (possibly divergent) series.

    Weniger delta transformation with remainder estimates taken from the
    next term, evaluated in extended precision. The stopping rule is applied
    to successive transformed estimates. Past the optimal order rounding
    makes the estimates drift, so when the tolerance is not met the order
    with the smallest two-sided change is returned, flagged unconverged.
    """
    it: Iterator[float] = iter(terms)
    a: list = []
    partial: list = []
    total = WORK(0)

    def pull() -> bool:
        nonlocal total
        try:
            t = WORK(next(it))
        except StopIteration:
            return False
        total += t
        a.append(t)
        partial.append(total)
        return True

    def finite_sum() -> EvalResult:
        return EvalResult(float(total), len(a), True, 0.0, label)

    cap = min(cfg.max_terms, MAX_TRANSFORM_ORDER)
    for _ in range(2):
        if not pull():
            return finite_sum()

    est: list[float] = []
    diffs: list[float] = [math.inf]
    small = 0
    k = 0
    while True:
        if not pull():
            return finite_sum()
        k += 1
        om = np.array(a[1:k + 2], dtype=WORK)
        if np.any(om == 0):
            rest = [float(x) for x in a] + list(it)
            return sum_series(rest, cfg, label)
        w = _delta_weights(k) / om
        value = float(np.dot(w, np.array(partial[:k + 1], dtype=WORK)) / np.sum(w))
        if est:
            diffs.append(abs(value - est[-1]) if math.isfinite(value) else math.inf)
        est.append(value)
        if len(est) > 1:
            if diffs[-1] <= cfg.rel_tol * abs(value):
                small += 1
            else:
                small = 0
            if small >= CONSECUTIVE_SMALL and len(a) >= cfg.min_terms:
                return EvalResult(value, len(a), True, diffs[-1], label)
        stalled = k - int(np.argmin(diffs)) >= 10
        if k >= cap or stalled:
            i = _pick_order(est, diffs)
            return EvalResult(est[i], len(a), False, diffs[i], label)
