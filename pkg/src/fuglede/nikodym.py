"""Planar domain on which partial-derivative control fails badly.

The domain is a chain of dyadic squares joined by very flat bands: square n
has side 2^-n, the band after it has height 2^(-10 n).  The bump u_p is a
plateau of height ~2^(4p) on square 4p, brought up from zero and back down
by smoothstep ramps living on the two neighboring bands, then normalized to
unit L2 norm.  Because the ramps sit on bands of tiny height, the gradient
energy of u_p collapses while its variance stays near 1, so the ratio
variance / gradient-energy grows without bound in p.  All closed forms
below are evaluated in rational arithmetic and only converted to float at
the boundary.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property

from .errors import FunctionSpecError, ZeroGradientError

#: integral of the smoothstep g(s) = 3 s^2 - 2 s^3 over [0, 1]
G_MASS = Fraction(1, 2)
#: integral of g^2
G_SQUARED_MASS = Fraction(13, 35)
#: integral of g'^2
G_PRIME_SQUARED_MASS = Fraction(6, 5)
#: maximum of g' (attained at s = 1/2)
G_PRIME_MAX = Fraction(3, 2)


def smoothstep(sigma: float) -> float:
    return 3.0 * sigma**2 - 2.0 * sigma**3

def smoothstep_prime(sigma: float) -> float:
    return 6.0 * sigma - 6.0 * sigma**2


@dataclass(frozen=True)
class RampProfile:
    """One-dimensional ramp 0 -> plateau over a length, shaped by smoothstep."""

    plateau: Fraction
    length: Fraction

    def value(self, xi: float) -> float:
        """Profile value at distance xi from the foot of the ramp."""
        return float(self.plateau) * smoothstep(xi / float(self.length))

    def derivative(self, xi: float) -> float:
        return (
            float(self.plateau)
            / float(self.length)
            * smoothstep_prime(xi / float(self.length))
        )

    @property
    def max_slope(self) -> Fraction:
        return G_PRIME_MAX * self.plateau / self.length

    @property
    def mass(self) -> Fraction:
        """Integral of the profile over its length."""
        return G_MASS * self.plateau * self.length

    @property
    def squared_mass(self) -> Fraction:
        return G_SQUARED_MASS * self.plateau**2 * self.length

    @property
    def slope_energy(self) -> Fraction:
        """Integral of the squared derivative over the length."""
        return G_PRIME_SQUARED_MASS * self.plateau**2 / self.length


@dataclass(frozen=True)
class NikodymParams:
    """Geometry of the chain of squares and bands.

    Square n sits at (x_n, x_n + s_n) x (0, s_n) with s_n = 2^-n; the band
    after it spans [x_n + s_n, x_(n+1)] x (0, delta_n) with delta_n =
    2^(-10 n) and horizontal length l_n = 2^-n.  The chain starts at
    x_1 = 0 and the closed form x_n = 2 (1 - 2^(1-n)) is checked against
    the recursion on construction.
    """

    n_max: int = 16

    def __post_init__(self):
        if self.n_max < 1:
            raise FunctionSpecError("n_max must be at least 1")
        for n in range(1, self.n_max + 1):
            if self.x(n + 1) != self.x(n) + self.s(n) + self.l(n):
                raise AssertionError(f"closed form for x_{n + 1} disagrees")

    def s(self, n: int) -> Fraction:
        return Fraction(1, 2**n)

    def l(self, n: int) -> Fraction:
        return Fraction(1, 2**n)

    def delta(self, n: int) -> Fraction:
        return Fraction(1, 2 ** (10 * n))

    def x(self, n: int) -> Fraction:
        return 2 - Fraction(4, 2**n)

    def c(self, p: int) -> Fraction:
        return Fraction(2 ** (4 * p))

    def square(self, n: int):
        """Corner rectangle ((x_lo, x_hi), (y_lo, y_hi)) of square n."""
        self._check_index(n)
        return ((self.x(n), self.x(n) + self.s(n)), (Fraction(0), self.s(n)))

    def band(self, n: int):
        self._check_index(n)
        return (
            (self.x(n) + self.s(n), self.x(n + 1)),
            (Fraction(0), self.delta(n)),
        )

    def region(self, kind: str, n: int):
        if kind == "square":
            return self.square(n)
        if kind == "band":
            return self.band(n)
        raise FunctionSpecError(f"unknown region kind {kind!r}")

    def _check_index(self, n: int):
        if not 1 <= n <= self.n_max:
            raise IndexError(f"region index {n} outside 1..{self.n_max}")

    @cached_property
    def measure(self) -> Fraction:
        """Total area of all squares and bands."""
        return sum(
            self.s(n) ** 2 + self.l(n) * self.delta(n)
            for n in range(1, self.n_max + 1)
        )


class BumpFunction:
    """Normalized plateau bump u_p on square 4p with ramps on the two bands.

    The unnormalized bump equals c_p on square 4p, rises from 0 along band
    4p - 1 and falls back to 0 along band 4p; the normalization factor
    alpha_p = 1 / ||.|| is kept as an exact alpha_p^2.
    """

    def __init__(self, params: NikodymParams, p: int):
        if p < 1:
            raise IndexError(f"p must be at least 1, got {p}")
        if 4 * p > params.n_max:
            raise IndexError(
                f"bump {p} needs region index {4 * p}, but n_max = {params.n_max}"
            )
        self.params = params
        self.p = p
        c = params.c(p)
        self.plateau_raw = c
        self.rise = RampProfile(c, params.l(4 * p - 1))
        self.fall = RampProfile(c, params.l(4 * p))
        square_energy = c**2 * params.s(4 * p) ** 2
        band_energy = (
            params.delta(4 * p - 1) * self.rise.squared_mass
            + params.delta(4 * p) * self.fall.squared_mass
        )
        self.tilde_norm_sq = square_energy + band_energy
        self.alpha_sq = 1 / self.tilde_norm_sq
        self.alpha = float(self.alpha_sq) ** 0.5

    @property
    def support(self):
        p = self.p
        return (("band", 4 * p - 1), ("square", 4 * p), ("band", 4 * p))

    def norm_sq(self) -> Fraction:
        """Exactly 1 by construction; recomputed, not assumed."""
        return self.alpha_sq * self.tilde_norm_sq

    def norm(self) -> float:
        return float(self.norm_sq()) ** 0.5

    def integral(self) -> float:
        pa = self.params
        p = self.p
        raw = self.plateau_raw * pa.s(4 * p) ** 2 + (
            pa.delta(4 * p - 1) * self.rise.mass + pa.delta(4 * p) * self.fall.mass
        )
        return self.alpha * float(raw)

    def region_integral(self, kind: str, n: int) -> float:
        """Integral of the bump over one square or band (0 off support)."""
        pa = self.params
        p = self.p
        if (kind, n) == ("square", 4 * p):
            return self.alpha * float(self.plateau_raw * pa.s(4 * p) ** 2)
        if (kind, n) == ("band", 4 * p - 1):
            return self.alpha * float(pa.delta(n) * self.rise.mass)
        if (kind, n) == ("band", 4 * p):
            return self.alpha * float(pa.delta(n) * self.fall.mass)
        pa.region(kind, n)  # validates the region exists
        return 0.0

    def evaluate(self, x: float, y: float) -> float:
        """Pointwise value; junction points take the plateau side."""
        pa = self.params
        p = self.p
        (bx, _), (_, bd) = pa.band(4 * p - 1)
        if float(bx) <= x <= float(pa.x(4 * p)) and 0.0 < y < float(bd):
            return self.alpha * self.rise.value(x - float(bx))
        (sx, _), (_, sh) = pa.square(4 * p)
        if float(sx) < x < float(sx) + float(pa.s(4 * p)) and 0.0 < y < float(sh):
            return self.alpha * float(self.plateau_raw)
        (fx, _), (_, fd) = pa.band(4 * p)
        if float(fx) <= x <= float(pa.x(4 * p + 1)) and 0.0 < y < float(fd):
            return self.alpha * self.fall.value(float(self.fall.length) - (x - float(fx)))
        return 0.0


def build_u_p(params: NikodymParams, p: int) -> BumpFunction:
    return BumpFunction(params, p)


def grad_norms(params: NikodymParams, p: int):
    """Squared L2 norms of the two partial derivatives of u_p.

    The vertical derivative vanishes identically.  The horizontal one only
    sees the two ramps: ||d1 u_p||^2 = alpha^2 (6/5) c_p^2
    (delta_(4p-1)/l_(4p-1) + delta_(4p)/l_(4p)).
    """
    bump = build_u_p(params, p)
    d1_sq = bump.alpha_sq * (
        params.delta(4 * p - 1) * bump.rise.slope_energy
        + params.delta(4 * p) * bump.fall.slope_energy
    )
    return float(d1_sq), 0.0


def poincare_quotient(params: NikodymParams, p: int) -> float:
    """Variance of u_p over gradient energy; grows without bound in p."""
    bump = build_u_p(params, p)
    mean_energy = bump.integral() ** 2 / float(params.measure)
    variance = float(bump.norm_sq()) - mean_energy
    d1_sq, d2_sq = grad_norms(params, p)
    denom = d1_sq + d2_sq
    if denom == 0.0:
        raise ZeroGradientError(f"gradient of u_{p} vanishes")
    return variance / denom


def weak_decay(params: NikodymParams, p: int, g) -> float:
    """|<u_p, g>| for g a piecewise-constant region map or another bump.

    A region map is a dict {("square", n): value, ...} with constant values
    on squares and bands.  Bumps with different p have disjoint supports,
    so their inner product is exactly zero.
    """
    bump = build_u_p(params, p)
    if isinstance(g, BumpFunction):
        if g.params.n_max != params.n_max:
            raise FunctionSpecError("bumps built from different geometries")
        if g.p == p:
            return float(bump.norm_sq())
        return 0.0
    if isinstance(g, dict):
        total = 0.0
        for key, value in g.items():
            if (
                not isinstance(key, tuple)
                or len(key) != 2
                or key[0] not in ("square", "band")
            ):
                raise FunctionSpecError(
                    f"region key must be ('square'|'band', n), got {key!r}"
                )
            kind, n = key
            if not isinstance(n, int):
                raise FunctionSpecError(f"region index must be an int, got {n!r}")
            total += float(value) * bump.region_integral(kind, n)
        return abs(total)
    raise FunctionSpecError(
        f"test function must be a region map or a bump, got {type(g).__name__}"
    )
