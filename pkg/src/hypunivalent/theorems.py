"""Evaluators for the sufficient conditions on (a, b, c, lambda, alpha[, A, B, tau]).

Each evaluator returns a :class:`TheoremVerdict` comparing the two sides of
the condition. Complex a, b enter only through their moduli.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field

from .classes import ClassSpec, RtauSpec
from .errors import DomainError
from .identities import (CANCELLATION_WARN, cubic_prefactor,
                         cubic_reciprocal_parts, cubic_shifted_sum,
                         quartic_prefactor, quartic_reciprocal_parts,
                         quartic_shifted_sum)
from .numerics import EvalConfig, EvalResult


class TheoremId(enum.Enum):
    CUBIC_MSTAR = "cubic-mstar"
    CUBIC_NSTAR = "cubic-nstar"
    CUBIC_RTAU_NSTAR = "cubic-rtau-nstar"
    CUBIC_RTAU_MSTAR = "cubic-rtau-mstar"
    QUARTIC_MSTAR = "quartic-mstar"
    QUARTIC_NSTAR = "quartic-nstar"
    QUARTIC_RTAU_NSTAR = "quartic-rtau-nstar"
    QUARTIC_RTAU_MSTAR = "quartic-rtau-mstar"

    @property
    def quartic(self) -> bool:
        return self.value.startswith("quartic")

    @property
    def needs_rtau(self) -> bool:
        return "rtau" in self.value

    @property
    def target(self) -> str:
        """Class whose coefficient test certifies the conclusion."""
        return "nstar" if self.value.endswith("nstar") else "mstar"


@dataclass(frozen=True)
class TheoremVerdict:
    holds: bool
    lhs: float
    rhs: float
    margin: float
    diagnostics: tuple[EvalResult, ...] = ()
    notes: tuple[str, ...] = field(default=())

    def to_dict(self) -> dict:
        return {
            "holds": self.holds,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "margin": self.margin,
            "diagnostics": [d.to_dict() for d in self.diagnostics],
            "notes": list(self.notes),
        }


class PreconditionError(DomainError):
    """A theorem hypothesis is not met; the message names the constraint."""


def _require(cond: bool, text: str) -> None:
    if not cond:
        raise PreconditionError(f"precondition violated: {text}")


def _moduli(a: complex, b: complex, notes: list[str]) -> tuple[float, float]:
    out = []
    for name, v in (("a", a), ("b", b)):
        if isinstance(v, complex) and v.imag != 0:
            notes.append(f"{name}={v!r} replaced by its modulus {abs(v)!r}")
        out.append(abs(v))
    return out[0], out[1]


def _verdict(lhs: float, rhs: float, cfg: EvalConfig, diags, notes) -> TheoremVerdict:
    margin = rhs - lhs
    return TheoremVerdict(margin >= -cfg.abs_slack, lhs, rhs, margin,
                          tuple(diags), tuple(notes))


def _rtau_rhs(alpha: float, rt: RtauSpec) -> float:
    d = rt.scale
    _require(0 < d <= 1, "0 < (A-B)|tau| <= 1")
    return (alpha - 1) * (1 - d) / d


def _base_pre(a: float, b: float, c: float, extra: int, stated: int | None,
              notes: list[str]) -> None:
    _require(c > 0, "c > 0")
    _require(b > 0, "|b| > 0")
    bound = f"c > |a|+|b|+{extra}"
    _require(c > a + b + extra, bound)
    if stated is not None and stated != extra:
        notes.append(f"stated hypothesis c > |a|+|b|+{stated}; enforced {bound}")


def _reciprocal_pre(a: float, b: float, c: float, parts: int) -> None:
    _require(a != 1, "|a| != 1")
    excluded = "{" + ", ".join(str(i) for i in range(1, parts + 1)) + "}"
    _require(b not in range(1, parts + 1), f"|b| not in {excluded}")
    _require(c > max(a + parts - 1, a + b - 1), f"c > max(|a|+{parts - 1}, |a|+|b|-1)")


def _components(quartic: bool):
    if quartic:
        return quartic_prefactor, quartic_shifted_sum, quartic_reciprocal_parts
    return cubic_prefactor, cubic_shifted_sum, cubic_reciprocal_parts


def evaluate(theorem: TheoremId, a: complex, b: complex, c: float, spec: ClassSpec,
             rt: RtauSpec | None = None, cfg: EvalConfig | None = None) -> TheoremVerdict:
    """Evaluate the sufficient condition identified by ``theorem``."""
    cfg = cfg or EvalConfig()
    notes: list[str] = []
    a, b = _moduli(a, b, notes)
    c = float(c)
    lam, alpha = spec.lam, spec.alpha
    parts = 4 if theorem.quartic else 3
    prefactor, shifted, reciprocal = _components(theorem.quartic)

    if theorem in (TheoremId.CUBIC_NSTAR, TheoremId.QUARTIC_NSTAR):
        _base_pre(a, b, c, 2, 1, notes)
    else:
        _base_pre(a, b, c, 1, None, notes)
    if theorem.needs_rtau:
        if rt is None:
            raise PreconditionError("precondition violated: R^tau(A, B) parameters required")
        rhs = _rtau_rhs(alpha, rt)
    if theorem in (TheoremId.CUBIC_RTAU_MSTAR, TheoremId.QUARTIC_RTAU_MSTAR):
        _reciprocal_pre(a, b, c, parts)

    g = prefactor(a, b, c)
    base = shifted(a, b, c, 0, cfg)
    diags = [base.labelled("base")]

    if theorem in (TheoremId.CUBIC_MSTAR, TheoremId.QUARTIC_MSTAR):
        s1 = shifted(a, b, c, 1, cfg)
        diags.append(s1.labelled("shift-1"))
        lhs = (1 - alpha * lam) * s1.value
        return _verdict(lhs, (alpha - 1) * base.value, cfg, diags, notes)

    if theorem in (TheoremId.CUBIC_NSTAR, TheoremId.QUARTIC_NSTAR):
        s1 = shifted(a, b, c, 1, cfg)
        s2 = shifted(a, b, c, 2, cfg)
        diags += [s1.labelled("shift-1"), s2.labelled("shift-2")]
        lhs = (1 - alpha * lam) * s2.value + (3 - 2 * alpha * lam - alpha) * s1.value
        return _verdict(lhs, (alpha - 1) * base.value, cfg, diags, notes)

    if theorem in (TheoremId.CUBIC_RTAU_NSTAR, TheoremId.QUARTIC_RTAU_NSTAR):
        s1 = shifted(a, b, c, 1, cfg)
        diags.append(s1.labelled("shift-1"))
        lhs = g * ((1 - alpha * lam) * s1.value - (alpha - 1) * base.value)
        return _verdict(lhs, rhs, cfg, diags, notes)

    w, k = reciprocal(a, b, c, cfg)
    diags.append(w.labelled("reciprocal"))
    recip = g * w.value - k
    if abs(k) > CANCELLATION_WARN * abs(recip):
        notes.append(f"cancellation: subtrahend {k:.3e} exceeds 1e6 x reciprocal sum {recip:.3e}")
    lhs = (1 - alpha * lam) * g * base.value - alpha * (1 - lam) * recip
    return _verdict(lhs, rhs, cfg, diags, notes)


def _wrap(theorem: TheoremId, with_rtau: bool):
    if with_rtau:
        def fn(a, b, c, spec: ClassSpec, rt: RtauSpec, cfg: EvalConfig | None = None):
            return evaluate(theorem, a, b, c, spec, rt, cfg)
    else:
        def fn(a, b, c, spec: ClassSpec, cfg: EvalConfig | None = None):
            return evaluate(theorem, a, b, c, spec, None, cfg)
    fn.__name__ = "thm_" + theorem.value.replace("-", "_")
    fn.__doc__ = f"Sufficient condition '{theorem.value}'."
    return fn


thm_cubic_mstar = _wrap(TheoremId.CUBIC_MSTAR, False)
thm_cubic_nstar = _wrap(TheoremId.CUBIC_NSTAR, False)
thm_cubic_rtau_to_nstar = _wrap(TheoremId.CUBIC_RTAU_NSTAR, True)
thm_cubic_rtau_to_mstar = _wrap(TheoremId.CUBIC_RTAU_MSTAR, True)
thm_quartic_mstar = _wrap(TheoremId.QUARTIC_MSTAR, False)
thm_quartic_nstar = _wrap(TheoremId.QUARTIC_NSTAR, False)
thm_quartic_rtau_to_nstar = _wrap(TheoremId.QUARTIC_RTAU_NSTAR, True)
thm_quartic_rtau_to_mstar = _wrap(TheoremId.QUARTIC_RTAU_MSTAR, True)


def corollary(theorem: TheoremId, a: complex, b: complex, c: float, alpha: float,
              rt: RtauSpec | None = None, cfg: EvalConfig | None = None) -> TheoremVerdict:
    """The lambda = 0 specialisation of ``theorem``."""
    return evaluate(theorem, a, b, c, ClassSpec(0.0, alpha), rt, cfg)
