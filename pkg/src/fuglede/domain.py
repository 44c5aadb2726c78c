"""Finite unions of disjoint intervals and closed-form exponential inner products.

The domain type keeps endpoints exact (as `Fraction`) whenever the input was
rational text or integers, so tiling checks downstream can run in exact
arithmetic.  All quadrature in this package happens on midpoint grids; the
sampled-function container here fixes that convention once.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from numbers import Rational

import numpy as np

from .errors import (
    DuplicateFrequencyError,
    EmptyDomainError,
    GridMismatchError,
    IndicatorRangeError,
    OverlapError,
)

TWO_PI = 2.0 * np.pi

#: Below this |frequency difference| the closed forms switch to a short
#: series expansion to avoid the 0/0 at coinciding frequencies.
NEAR_ZERO_FREQUENCY = 1e-8


def _coerce_endpoint(x):
    """Return `x` as a Fraction when it is exact, as a float otherwise."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, np.integer)):
        return Fraction(int(x))
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, (float, np.floating)):
        return float(x)
    if isinstance(x, Rational):
        return Fraction(x)
    raise TypeError(f"cannot use {x!r} as an interval endpoint")


def endpoint_str(x) -> str:
    """Format an endpoint exactly: terminating decimal if possible, else p/q."""
    if isinstance(x, Fraction):
        den = x.denominator
        twos = fives = 0
        while den % 2 == 0:
            den //= 2
            twos += 1
        while den % 5 == 0:
            den //= 5
            fives += 1
        if den != 1:
            return f"{x.numerator}/{x.denominator}"
        k = max(twos, fives)
        scaled = x.numerator * 10**k // x.denominator
        if k == 0:
            return str(scaled)
        digits = str(abs(scaled)).rjust(k + 1, "0")
        sign = "-" if scaled < 0 else ""
        return f"{sign}{digits[:-k]}.{digits[-k:]}"
    return repr(float(x))


@dataclass(frozen=True)
class IntervalUnion:
    """Union of finitely many disjoint open intervals (a_1,b_1), ..., (a_n,b_n).

    Intervals must be strictly ordered with nonempty gaps:
    a_1 < b_1 < a_2 < b_2 < ... < b_n.  Endpoints are Fractions when exact.
    """

    lefts: tuple
    rights: tuple

    def __post_init__(self):
        if len(self.lefts) == 0:
            raise EmptyDomainError("domain needs at least one interval")
        if len(self.lefts) != len(self.rights):
            raise EmptyDomainError("mismatched endpoint lists")
        for a, b in zip(self.lefts, self.rights):
            if not b > a:
                raise EmptyDomainError(f"interval ({a}, {b}) has nonpositive length")
        for b, a_next in zip(self.rights[:-1], self.lefts[1:]):
            if not b < a_next:
                raise OverlapError(
                    f"intervals overlap or touch near endpoint {b}"
                )

    @property
    def n(self) -> int:
        return len(self.lefts)

    @cached_property
    def alpha(self) -> np.ndarray:
        """Left endpoints as a float vector."""
        a = np.array([float(x) for x in self.lefts])
        a.setflags(write=False)
        return a

    @cached_property
    def beta(self) -> np.ndarray:
        """Right endpoints as a float vector."""
        b = np.array([float(x) for x in self.rights])
        b.setflags(write=False)
        return b

    @property
    def lengths(self) -> np.ndarray:
        return self.beta - self.alpha

    @property
    def is_rational(self) -> bool:
        return all(isinstance(x, Fraction) for x in self.lefts + self.rights)

    @property
    def measure(self):
        """Total length; a Fraction when every endpoint is exact."""
        return sum(b - a for a, b in zip(self.lefts, self.rights))

    def locate(self, x: float):
        """Index of the open interval containing x, or None."""
        for i in range(self.n):
            if self.alpha[i] < x < self.beta[i]:
                return i
        return None

    def to_json(self) -> dict:
        return {
            "intervals": [
                [endpoint_str(a), endpoint_str(b)]
                for a, b in zip(self.lefts, self.rights)
            ]
        }

    @classmethod
    def from_json(cls, obj: dict) -> "IntervalUnion":
        if not isinstance(obj, dict) or "intervals" not in obj:
            raise EmptyDomainError('domain JSON must be {"intervals": [[a, b], ...]}')
        return make_domain(obj["intervals"])


def make_domain(pairs) -> IntervalUnion:
    """Build an IntervalUnion from (left, right) pairs, sorting them first.

    Endpoints may be numbers, Fractions, or strings like "0.5" or "1/2";
    strings stay exact.
    """
    coerced = []
    for pair in pairs:
        pair = tuple(pair)
        if len(pair) != 2:
            raise EmptyDomainError(f"interval {pair!r} is not a pair")
        coerced.append((_coerce_endpoint(pair[0]), _coerce_endpoint(pair[1])))
    coerced.sort(key=lambda ab: float(ab[0]))
    return IntervalUnion(
        lefts=tuple(a for a, _ in coerced),
        rights=tuple(b for _, b in coerced),
    )


def exp_inner(domain: IntervalUnion, lam, mu=0.0) -> complex:
    """Inner product <e_lam, e_mu> over the domain, e_lam(x) = exp(2 pi i lam x).

    Closed form: sum_i (exp(2 pi i nu b_i) - exp(2 pi i nu a_i)) / (2 pi i nu)
    with nu = lam - mu.  At nu = 0 this is the measure; near zero a 3-term
    series per interval keeps the evaluation stable.
    """
    nu = float(lam) - float(mu)
    a = domain.alpha
    b = domain.beta
    w = 2j * np.pi * nu
    if abs(nu) < NEAR_ZERO_FREQUENCY:
        total = np.sum((b - a) + w * (b**2 - a**2) / 2.0 + w**2 * (b**3 - a**3) / 6.0)
        return complex(total)
    # exp(w b) - exp(w a) = exp(w a) (exp(i theta) - 1) with theta real;
    # writing the parenthesis via sin avoids cancellation for small nu
    theta = TWO_PI * nu * (b - a)
    delta = -2.0 * np.sin(theta / 2.0) ** 2 + 1j * np.sin(theta)
    return complex(np.sum(np.exp(w * a) * delta / w))


def gram(domain: IntervalUnion, frequencies) -> np.ndarray:
    """Hermitian Gram matrix G[j, k] = <e_{f_j}, e_{f_k}> over the domain."""
    freqs = [float(f) for f in frequencies]
    if len(set(freqs)) != len(freqs):
        raise DuplicateFrequencyError("frequencies must be distinct")
    m = len(freqs)
    G = np.empty((m, m), dtype=complex)
    for j in range(m):
        for k in range(j, m):
            val = exp_inner(domain, freqs[j], freqs[k])
            G[j, k] = val
            G[k, j] = np.conj(val)
    return G


def indicator_coeff(domain: IntervalUnion, a, b, lam) -> complex:
    """Inner product <chi_(a,b), e_lam> for an indicator inside one interval.

    Equals (exp(-2 pi i lam a) - exp(-2 pi i lam b)) / (2 pi i lam), with the
    series fallback near lam = 0.
    """
    af, bf = float(a), float(b)
    if bf < af:
        raise IndicatorRangeError(f"indicator endpoints out of order: {a}, {b}")
    slack = 1e-12
    hosted = any(
        domain.alpha[i] - slack <= af and bf <= domain.beta[i] + slack
        for i in range(domain.n)
    )
    if not hosted:
        raise IndicatorRangeError(
            f"indicator ({a}, {b}) does not fit inside a single interval"
        )
    lam = float(lam)
    w = 2j * np.pi * lam
    if abs(lam) < NEAR_ZERO_FREQUENCY:
        return complex(
            (bf - af) - w * (bf**2 - af**2) / 2.0 + w**2 * (bf**3 - af**3) / 6.0
        )
    # stable rewrite of (exp(-w a) - exp(-w b)) / w, see exp_inner
    theta = TWO_PI * lam * (bf - af)
    delta = 2.0 * np.sin(theta / 2.0) ** 2 + 1j * np.sin(theta)
    return complex(np.exp(-w * af) * delta / w)


@dataclass(frozen=True, eq=False)
class SampledFunction:
    """Midpoint samples of a function on an IntervalUnion.

    values[i, k] approximates f at x = a_i + (k + 1/2) * (b_i - a_i) / M,
    the k-th midpoint of interval i, with M samples per interval.  `form`
    optionally tags a closed-form description, e.g. ("exp", lam) or
    ("indicator", a, b), which lets downstream code compute coefficients
    without quadrature.
    """

    domain: IntervalUnion
    values: np.ndarray
    form: tuple | None = None

    def __post_init__(self):
        v = np.asarray(self.values, dtype=complex)
        if v.ndim != 2 or v.shape[0] != self.domain.n or v.shape[1] < 1:
            raise GridMismatchError(
                f"values must have shape (n_intervals, M); got {v.shape}"
            )
        v = np.ascontiguousarray(v)
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    @property
    def samples_per_interval(self) -> int:
        return self.values.shape[1]

    @cached_property
    def grid(self) -> np.ndarray:
        """Midpoint positions, same shape as `values`."""
        M = self.samples_per_interval
        k = (np.arange(M) + 0.5) / M
        x = self.domain.alpha[:, None] + self.domain.lengths[:, None] * k[None, :]
        x.setflags(write=False)
        return x

    @property
    def weights(self) -> np.ndarray:
        """Quadrature weight per row (cell width of each interval's grid)."""
        return self.domain.lengths / self.samples_per_interval

    def inner(self, other: "SampledFunction") -> complex:
        """Midpoint-rule approximation of the L2 inner product <self, other>."""
        self._check_same_grid(other)
        return complex(
            np.sum(self.weights * np.sum(self.values * np.conj(other.values), axis=1))
        )

    def norm(self) -> float:
        return float(
            np.sqrt(np.sum(self.weights * np.sum(np.abs(self.values) ** 2, axis=1)))
        )

    def _check_same_grid(self, other: "SampledFunction"):
        if other.domain != self.domain:
            raise GridMismatchError("sampled functions live on different domains")
        if other.samples_per_interval != self.samples_per_interval:
            raise GridMismatchError("sampled functions use different grid sizes")

    @classmethod
    def from_callable(cls, domain: IntervalUnion, samples_per_interval: int, fn):
        x = _midpoints(domain, samples_per_interval)
        vals = np.array([[fn(xq) for xq in row] for row in x], dtype=complex)
        return cls(domain, vals)

    @classmethod
    def from_exponential(cls, domain: IntervalUnion, samples_per_interval: int, lam):
        lam = float(lam)
        x = _midpoints(domain, samples_per_interval)
        return cls(domain, np.exp(2j * np.pi * lam * x), form=("exp", lam))

    @classmethod
    def from_indicator(cls, domain: IntervalUnion, samples_per_interval: int, a, b):
        af, bf = float(a), float(b)
        # reuse the range validation
        indicator_coeff(domain, af, bf, 0.0)
        x = _midpoints(domain, samples_per_interval)
        vals = ((x > af) & (x < bf)).astype(complex)
        return cls(domain, vals, form=("indicator", af, bf))


def _midpoints(domain: IntervalUnion, M: int) -> np.ndarray:
    if M < 1:
        raise GridMismatchError("need at least one sample per interval")
    k = (np.arange(M) + 0.5) / M
    return domain.alpha[:, None] + domain.lengths[:, None] * k[None, :]
