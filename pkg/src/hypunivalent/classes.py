"""Coefficient criteria and disc sampling for M*(lambda, alpha), N*(lambda, alpha), R^tau(A, B)."""

from __future__ import annotations

import cmath
import json
import math
from collections.abc import Sequence
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, PoleError

#: Rays of the disc sampling grid.
RAYS = 64
DEFAULT_RADIUS = 0.999
#: Denominator magnitude treated as a pole.
POLE_TOL = 1e-14
#: Boundary slack for coefficient inequalities (matches EvalConfig.abs_slack).
DEFAULT_SLACK = 1e-9


class PowerSeries:
    """Normalized series f(z) = z + a_2 z^2 + ... + a_N z^N.

    ``coefficients[0]`` is a_1 and must equal 1. ``tail_bound`` optionally
    records an estimate of the dropped tail sum_{n>N} |a_n|.
    """

    __slots__ = ("_c", "tail_bound")

    def __init__(self, coefficients: Sequence[float], tail_bound: float | None = None):
        arr = np.array(coefficients, dtype=float)
        if arr.ndim != 1 or arr.size == 0:
            raise DomainError("a power series needs at least the coefficient a_1")
        if arr[0] != 1.0:
            raise DomainError(f"a_1 must be 1, got {arr[0]!r}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        arr.flags.writeable = False
        self._c = arr
        self.tail_bound = tail_bound

    @property
    def coefficients(self) -> np.ndarray:
        return self._c

    @property
    def degree(self) -> int:
        return self._c.size

    def __len__(self) -> int:
        return self._c.size

    def __eq__(self, other: object) -> bool:
        return isinstance(other, PowerSeries) and np.array_equal(self._c, other._c)

    def __repr__(self) -> str:
        return f"PowerSeries({self._c.tolist()!r})"

    def in_v(self) -> bool:
        return bool(np.all(self._c[1:] >= 0))

    @classmethod
    def identity(cls) -> "PowerSeries":
        return cls([1.0])

    @classmethod
    def geometric(cls, n: int) -> "PowerSeries":
        """z/(1-z) truncated to z^n, the identity for convolution."""
        return cls(np.ones(n))

    # evaluation helpers on complex points (numpy arrays)
    def _poly(self, coeffs: np.ndarray, z: np.ndarray) -> np.ndarray:
        out = np.zeros_like(z)
        for c in coeffs[::-1]:
            out = out * z + c
        return out

    def f_over_z(self, z: np.ndarray) -> np.ndarray:
        return self._poly(self._c, z)

    def derivative(self, z: np.ndarray) -> np.ndarray:
        n = np.arange(1, self._c.size + 1)
        return self._poly(self._c * n, z)

    def z_second_derivative(self, z: np.ndarray) -> np.ndarray:
        """z f''(z)."""
        n = np.arange(1, self._c.size + 1)
        return self._poly(self._c * n * (n - 1), z)


def load_series(path: str | Path) -> PowerSeries:
    """Read coefficients (one per line, or JSON {"coefficients": [...]})."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        data = json.loads(text)
        if not isinstance(data, dict) or "coefficients" not in data:
            raise DomainError("JSON series file needs a 'coefficients' list")
        return PowerSeries([float(x) for x in data["coefficients"]])
    values = [float(line) for line in text.splitlines()
              if line.strip() and not line.lstrip().startswith("#")]
    return PowerSeries(values)


@dataclass(frozen=True)
class ClassSpec:
    """Parameters (lambda, alpha) of M*(lambda, alpha) and N*(lambda, alpha)."""

    lam: float
    alpha: float

    def __post_init__(self) -> None:
        if not 0 <= self.lam < 1:
            raise DomainError(f"lambda must lie in [0, 1), got {self.lam!r}")
        if not 1 < self.alpha <= 4 / 3:
            raise DomainError(f"alpha must lie in (1, 4/3], got {self.alpha!r}")


@dataclass(frozen=True)
class RtauSpec:
    """Parameters of R^tau(A, B); tau is kept as modulus and phase."""

    A: float
    B: float
    tau_modulus: float
    tau_phase: float = 0.0

    def __post_init__(self) -> None:
        if not -1 <= self.B < self.A <= 1:
            raise DomainError(f"need -1 <= B < A <= 1, got A={self.A!r}, B={self.B!r}")
        if not self.tau_modulus > 0:
            raise DomainError("tau must be non-zero")

    @classmethod
    def from_complex(cls, A: float, B: float, tau: complex) -> "RtauSpec":
        return cls(A, B, abs(tau), cmath.phase(tau))

    @property
    def tau(self) -> complex:
        return cmath.rect(self.tau_modulus, self.tau_phase)

    @property
    def scale(self) -> float:
        """(A - B)|tau|."""
        return (self.A - self.B) * self.tau_modulus


@dataclass(frozen=True)
class CoefficientVerdict:
    holds: bool
    lhs: float
    rhs: float

    @property
    def margin(self) -> float:
        return self.rhs - self.lhs

    def __bool__(self) -> bool:
        return self.holds


def _require_v(f: PowerSeries) -> None:
    if not f.in_v():
        raise DomainError("coefficient tests need a_n >= 0 for n >= 2")


def _mstar_weights(n: np.ndarray, spec: ClassSpec) -> np.ndarray:
    return n - (1 + n * spec.lam - spec.lam) * spec.alpha


def mstar_coefficient_test(f: PowerSeries, spec: ClassSpec, slack: float = DEFAULT_SLACK) -> CoefficientVerdict:
    """sum_{n>=2} [n - (1 + n lam - lam) alpha] a_n <= alpha - 1 (+ slack)."""
    _require_v(f)
    a = f.coefficients[1:]
    n = np.arange(2, f.degree + 1, dtype=float)
    lhs = math.fsum(_mstar_weights(n, spec) * a)
    rhs = spec.alpha - 1
    return CoefficientVerdict(lhs <= rhs + slack, lhs, rhs)


def nstar_coefficient_test(f: PowerSeries, spec: ClassSpec, slack: float = DEFAULT_SLACK) -> CoefficientVerdict:
    """sum_{n>=2} n [n - (1 + n lam - lam) alpha] a_n <= alpha - 1 (+ slack)."""
    _require_v(f)
    a = f.coefficients[1:]
    n = np.arange(2, f.degree + 1, dtype=float)
    lhs = math.fsum(_mstar_weights(n, spec) * (n * a))
    rhs = spec.alpha - 1
    return CoefficientVerdict(lhs <= rhs + slack, lhs, rhs)


def sufficiency_guaranteed(f: PowerSeries, spec: ClassSpec) -> bool:
    """Whether a passing coefficient test provably implies class membership.

    Writing w for the M quotient, |w - 1| < |w - (2 alpha - 1)| bounds the
    coefficient sum by the test only when n >= (2 alpha - 1)(1 + (n-1) lam)
    for every nonzero a_n. Outside that region a passing test can coexist
    with a pole of w in the disc (z + a z^2 with (1 + lam) a > 1). The same
    condition serves N*, since f is in N exactly when z f' is in M.
    """
    n = np.arange(2, f.degree + 1, dtype=float)
    w = n - (2 * spec.alpha - 1) * (1 + (n - 1) * spec.lam)
    return bool(np.all(w[f.coefficients[1:] != 0] >= 0))


def dixit_pal_bound(n: int, spec: RtauSpec) -> float:
    """Sharp coefficient bound (A - B)|tau| / n for R^tau(A, B)."""
    if n < 2:
        raise DomainError(f"n must be at least 2, got {n!r}")
    return spec.scale / n


def dixit_pal_extremal(spec: RtauSpec, n_terms: int) -> PowerSeries:
    """Series with a_n = (A - B)|tau| / n for n = 2..n_terms."""
    n = np.arange(2, n_terms + 1, dtype=float)
    return PowerSeries(np.concatenate(([1.0], spec.scale / n)))


def z_derivative_op(f: PowerSeries) -> PowerSeries:
    """z f'(z): coefficients n a_n."""
    n = np.arange(1, f.degree + 1, dtype=float)
    return PowerSeries(f.coefficients * n)


# ------------------------------------------------------------ disc sampling

@dataclass(frozen=True)
class DiscReport:
    """Largest sampled value of the class functional and the decision."""

    max_value: float
    member: bool
    witness: complex
    samples: int
    kind: str

    def to_dict(self) -> dict:
        key = "maxModulus" if self.kind == "rtau" else "maxRe"
        flag = "inClass" if self.kind == "rtau" else "allBelow"
        return {key: self.max_value, flag: self.member,
                "witness": [self.witness.real, self.witness.imag],
                "samples": self.samples}


def disc_grid(samples: int, radius: float = DEFAULT_RADIUS) -> np.ndarray:
    """64 rays times samples/64 rings, ring distances to |z|=1 geometric.

    Ring j (1..m) has radius 1 - (1 - radius)^(j/m); the outermost ring is
    ``radius``.
    """
    if not 0 < radius < 1:
        raise DomainError(f"radius must lie in (0, 1), got {radius!r}")
    if samples < RAYS:
        raise DomainError(f"need at least {RAYS} samples")
    rings = samples // RAYS
    j = np.arange(1, rings + 1)
    r = 1 - (1 - radius) ** (j / rings)
    theta = 2 * np.pi * np.arange(RAYS) / RAYS
    return (r[:, None] * np.exp(1j * theta[None, :])).ravel()


def _checked_ratio(num: np.ndarray, den: np.ndarray, z: np.ndarray) -> np.ndarray:
    bad = np.abs(den) <= POLE_TOL
    if np.any(bad):
        i = int(np.argmax(bad))
        raise PoleError(f"denominator vanishes near z = {complex(z[i])!r}")
    return num / den


def _report(values: np.ndarray, z: np.ndarray, bound: float, kind: str) -> DiscReport:
    i = int(np.argmax(values))
    top = float(values[i])
    return DiscReport(top, top < bound, complex(z[i]), int(z.size), kind)


def disc_sample_mstar(f: PowerSeries, spec: ClassSpec, samples: int = 8192,
                      radius: float = DEFAULT_RADIUS) -> DiscReport:
    """max Re z f' / ((1 - lam) f + lam z f') over the sampling grid, vs alpha."""
    z = disc_grid(samples, radius)
    fp = f.derivative(z)
    # both sides divided by z: f/z is analytic and equals 1 at the origin
    den = (1 - spec.lam) * f.f_over_z(z) + spec.lam * fp
    q = _checked_ratio(fp, den, z)
    return _report(q.real, z, spec.alpha, "mstar")


def disc_sample_nstar(f: PowerSeries, spec: ClassSpec, samples: int = 8192,
                      radius: float = DEFAULT_RADIUS) -> DiscReport:
    """max Re (f' + z f'') / (f' + lam z f'') over the sampling grid, vs alpha."""
    z = disc_grid(samples, radius)
    fp = f.derivative(z)
    zfpp = f.z_second_derivative(z)
    q = _checked_ratio(fp + zfpp, fp + spec.lam * zfpp, z)
    return _report(q.real, z, spec.alpha, "nstar")


def disc_sample_rtau(f: PowerSeries, spec: RtauSpec, samples: int = 8192,
                     radius: float = DEFAULT_RADIUS) -> DiscReport:
    """max |(f' - 1) / ((A - B) tau - B (f' - 1))| over the grid, vs 1."""
    z = disc_grid(samples, radius)
    g = f.derivative(z) - 1
    den = (spec.A - spec.B) * spec.tau - spec.B * g
    q = _checked_ratio(g, den, z)
    return _report(np.abs(q), z, 1.0, "rtau")
