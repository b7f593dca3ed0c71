"""Exact integer/rational kernel for alpha = k**(1/m).

No floats anywhere.  Order decisions against alpha are made by integer
power comparisons, and every alpha-dependent real quantity is represented
by a rational interval certified to contain the true value.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

Rational = Fraction

DEFAULT_START_BITS = 64
DEFAULT_MAX_BITS = 1 << 20


class InvalidDegreeError(ValueError):
    """Root degree m < 2."""


class PerfectPowerError(ValueError):
    """Radicand is a p-th power for some prime p dividing the degree."""


class PrecisionCeilingError(RuntimeError):
    """Adaptive refinement exceeded the configured bit cap."""

    def __init__(self, bits: int):
        super().__init__(f"precision refinement exceeded the {bits}-bit cap")
        self.bits = bits


class IntervalZeroDivisionError(ZeroDivisionError):
    """Division by an interval containing zero."""


class InconsistentEnclosureError(ArithmeticError):
    """Two enclosures of the same real value are disjoint; implementation bug."""


class WrongDegreeError(ValueError):
    """Cubic-only operation applied to a spec of different degree."""


def _sign(x: int) -> int:
    return (x > 0) - (x < 0)


def int_nth_root(x: int, m: int) -> int:
    """Integer m-th root: the unique r >= 0 with r**m <= x < (r+1)**m.

    Newton's method on integers from an over-estimate, with a final exact
    adjustment; total for all x >= 0, m >= 1.
    """
    if x < 0:
        raise ValueError("x must be non-negative")
    if m < 1:
        raise ValueError("m must be positive")
    if m == 1 or x < 2:
        return x
    if m == 2:
        return math.isqrt(x)
    if x.bit_length() <= m:
        return 1
    # 2**ceil(bits/m) >= x**(1/m); the iteration decreases monotonically.
    r = 1 << -(-x.bit_length() // m)
    while True:
        s = ((m - 1) * r + x // r ** (m - 1)) // m
        if s >= r:
            break
        r = s
    while r ** m > x:
        r -= 1
    while (r + 1) ** m <= x:
        r += 1
    return r


def prime_divisors(m: int) -> tuple[int, ...]:
    """Distinct prime divisors of m >= 2, ascending."""
    primes = []
    p, rest = 2, m
    while p * p <= rest:
        if rest % p == 0:
            primes.append(p)
            while rest % p == 0:
                rest //= p
        p += 1
    if rest > 1:
        primes.append(rest)
    return tuple(primes)


@dataclass(frozen=True)
class RadicandSpec:
    """The pair (k, m) defining alpha = k**(1/m).

    Construction rejects k that is a p-th power for any prime p | m, so
    x**m - k is irreducible and alpha is irrational of degree exactly m.
    Degree 2 is admitted as a cross-check regime (periodic expansions).
    """

    k: int
    m: int

    def __post_init__(self):
        if not isinstance(self.k, int) or not isinstance(self.m, int):
            raise TypeError("k and m must be integers")
        if self.m < 2:
            raise InvalidDegreeError(f"degree m must be >= 2, got {self.m}")
        if self.k < 1:
            raise ValueError(f"radicand k must be positive, got {self.k}")
        for p in prime_divisors(self.m):
            r = int_nth_root(self.k, p)
            if r ** p == self.k:
                raise PerfectPowerError(
                    f"k = {self.k} = {r}**{p} with prime {p} | m = {self.m}; "
                    f"alpha would be rational or of reduced degree"
                )


def validate_spec(k: int, m: int) -> RadicandSpec:
    """Validate (k, m) and return a RadicandSpec; raises on degenerate input."""
    return RadicandSpec(k=k, m=m)


def sign_linear_in_alpha(spec: RadicandSpec, u: int, v: int) -> int:
    """Exact sign of u*alpha + v, decided by integer comparisons.

    For u != 0 the result is never 0 because alpha is irrational.
    """
    if u == 0:
        return _sign(v)
    if u > 0 and v >= 0:
        return 1
    if u < 0 and v <= 0:
        return -1
    # u, v have opposite signs: compare k*|u|**m against |v|**m.
    lhs = spec.k * abs(u) ** spec.m
    rhs = abs(v) ** spec.m
    if lhs == rhs:
        raise ArithmeticError(
            f"{abs(v)}/{abs(u)} equals alpha; spec ({spec.k},{spec.m}) is degenerate"
        )
    s = 1 if lhs > rhs else -1
    return s if u > 0 else -s


def _as_endpoints(value) -> tuple[Fraction, Fraction]:
    if isinstance(value, RationalInterval):
        return value.lo, value.hi
    f = Fraction(value)
    return f, f


@dataclass(frozen=True)
class RationalInterval:
    """Interval [lo, hi] with exact rational endpoints.

    All operations are exact, so results are the tightest enclosures of
    the image set; the containment guarantee is preserved throughout.
    Scalars (int/Fraction) mix freely as point intervals.
    """

    lo: Fraction
    hi: Fraction

    def __post_init__(self):
        object.__setattr__(self, "lo", Fraction(self.lo))
        object.__setattr__(self, "hi", Fraction(self.hi))
        if self.lo > self.hi:
            raise ValueError(f"empty interval: lo={self.lo} > hi={self.hi}")

    @classmethod
    def point(cls, value) -> "RationalInterval":
        f = Fraction(value)
        return cls(f, f)

    @property
    def width(self) -> Fraction:
        return self.hi - self.lo

    @property
    def mid(self) -> Fraction:
        return (self.lo + self.hi) / 2

    def __contains__(self, value) -> bool:
        f = Fraction(value)
        return self.lo <= f <= self.hi

    def contains_interval(self, other: "RationalInterval") -> bool:
        return self.lo <= other.lo and other.hi <= self.hi

    def strictly_inside(self, lo, hi) -> bool:
        return Fraction(lo) < self.lo and self.hi < Fraction(hi)

    def intersects(self, other: "RationalInterval") -> bool:
        return self.lo <= other.hi and other.lo <= self.hi

    def intersect(self, other: "RationalInterval") -> "RationalInterval | None":
        lo, hi = max(self.lo, other.lo), min(self.hi, other.hi)
        return RationalInterval(lo, hi) if lo <= hi else None

    def __neg__(self) -> "RationalInterval":
        return RationalInterval(-self.hi, -self.lo)

    def __add__(self, other) -> "RationalInterval":
        olo, ohi = _as_endpoints(other)
        return RationalInterval(self.lo + olo, self.hi + ohi)

    __radd__ = __add__

    def __sub__(self, other) -> "RationalInterval":
        olo, ohi = _as_endpoints(other)
        return RationalInterval(self.lo - ohi, self.hi - olo)

    def __rsub__(self, other) -> "RationalInterval":
        return (-self).__add__(other)

    def __mul__(self, other) -> "RationalInterval":
        olo, ohi = _as_endpoints(other)
        products = (self.lo * olo, self.lo * ohi, self.hi * olo, self.hi * ohi)
        return RationalInterval(min(products), max(products))

    __rmul__ = __mul__

    def reciprocal(self) -> "RationalInterval":
        if self.lo <= 0 <= self.hi:
            raise IntervalZeroDivisionError(f"0 in [{self.lo}, {self.hi}]")
        return RationalInterval(1 / self.hi, 1 / self.lo)

    def __truediv__(self, other) -> "RationalInterval":
        olo, ohi = _as_endpoints(other)
        return self * RationalInterval(olo, ohi).reciprocal()

    def __rtruediv__(self, other) -> "RationalInterval":
        olo, ohi = _as_endpoints(other)
        return RationalInterval(olo, ohi) * self.reciprocal()

    def __pow__(self, exponent: int) -> "RationalInterval":
        if not isinstance(exponent, int) or exponent < 0:
            raise ValueError("interval powers take non-negative integer exponents")
        if exponent == 0:
            return RationalInterval.point(1)
        plo, phi = self.lo ** exponent, self.hi ** exponent
        if self.lo >= 0:
            return RationalInterval(plo, phi)
        if self.hi <= 0:
            return RationalInterval(plo, phi) if exponent % 2 else RationalInterval(phi, plo)
        if exponent % 2:
            return RationalInterval(plo, phi)
        return RationalInterval(Fraction(0), max(plo, phi))

    def __str__(self):
        return f"[{self.lo}, {self.hi}]"


@dataclass(frozen=True)
class AlphaEnclosure:
    """Certified enclosure of alpha scaled by base**digits.

    scaled_floor = floor(alpha * base**digits), so alpha lies in
    [scaled_floor, scaled_floor + 1] / base**digits.
    """

    spec: RadicandSpec
    precision_digits: int
    base: int
    scaled_floor: int

    @property
    def interval(self) -> RationalInterval:
        scale = self.base ** self.precision_digits
        return RationalInterval(
            Fraction(self.scaled_floor, scale), Fraction(self.scaled_floor + 1, scale)
        )


def alpha_floor_scaled(spec: RadicandSpec, digits: int, base: int = 2) -> AlphaEnclosure:
    """Enclosure of alpha of width base**-digits, via one integer root."""
    if digits < 0:
        raise ValueError("digits must be non-negative")
    if base < 2:
        raise ValueError("base must be >= 2")
    scaled = int_nth_root(spec.k * base ** (spec.m * digits), spec.m)
    return AlphaEnclosure(spec=spec, precision_digits=digits, base=base, scaled_floor=scaled)


def alpha_interval(spec: RadicandSpec, bits: int) -> RationalInterval:
    """Binary enclosure of alpha with width 2**-bits."""
    return alpha_floor_scaled(spec, bits, base=2).interval
