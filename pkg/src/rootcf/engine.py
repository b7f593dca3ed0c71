"""Certified regular continued fraction expansion of alpha = k**(1/m).

Two independent routes produce partial quotients: `expand` iterates the
Gauss map on rational intervals (fast, precision-adaptive), while
`expand_exact_oracle` finds each quotient by binary search on an exact
integer order test and never touches interval arithmetic.  They must
agree; tests cross-certify them.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction

from .exact import (
    DEFAULT_MAX_BITS,
    DEFAULT_START_BITS,
    InconsistentEnclosureError,
    IntervalZeroDivisionError,
    PrecisionCeilingError,
    RadicandSpec,
    RationalInterval,
    alpha_interval,
    int_nth_root,
    sign_linear_in_alpha,
)


class Side(Enum):
    """Whether a convergent exceeds alpha or falls short of it."""

    ABOVE = "above"
    BELOW = "below"


@dataclass(frozen=True)
class Convergent:
    """One expansion term: partial quotient b_n with convergent p_n/q_n."""

    n: int
    b: int
    p: int
    q: int
    side: Side

    def value(self) -> Fraction:
        return Fraction(self.p, self.q)


def _prev_pq(prev: Convergent | None) -> tuple[int, int]:
    # Seed (p_{-1}, q_{-1}) = (1, 0) stands in for the term before index 0.
    return (prev.p, prev.q) if prev is not None else (1, 0)


def convergent_side(spec: RadicandSpec, p: int, q: int) -> Side:
    """Exact classification of p/q against alpha: p**m vs k*q**m."""
    return Side.ABOVE if p ** spec.m > spec.k * q ** spec.m else Side.BELOW


def convergent_step(
    spec: RadicandSpec,
    prev: tuple[Convergent | None, Convergent | None],
    b: int,
) -> Convergent:
    """Apply the recurrence p_n = b*p_{n-1} + p_{n-2} (same for q).

    `prev` is (previous, one-before-previous); pass (None, None) to start
    from the seeds (1,0), (0,1).
    """
    if b < 1:
        raise ValueError(f"partial quotient must be >= 1, got {b}")
    p1, q1 = _prev_pq(prev[0])
    if prev[1] is not None:
        p2, q2 = prev[1].p, prev[1].q
    elif prev[0] is not None:
        p2, q2 = 1, 0  # n = 1: the term two back is the (1, 0) seed
    else:
        p2, q2 = 0, 1  # n = 0: the term two back is the (0, 1) seed
    n = prev[0].n + 1 if prev[0] is not None else 0
    p, q = b * p1 + p2, b * q1 + q2
    return Convergent(n=n, b=b, p=p, q=q, side=convergent_side(spec, p, q))


@dataclass(frozen=True)
class Expansion:
    """Partial quotients b_0..b_N of alpha with their convergents."""

    spec: RadicandSpec
    terms: tuple[Convergent, ...]
    precision_bits: int

    @property
    def partial_quotients(self) -> list[int]:
        return [t.b for t in self.terms]

    def pair(self, n: int) -> tuple[Convergent, Convergent | None]:
        """(convergent n, convergent n-1); the latter is None at n = 0."""
        return self.terms[n], self.terms[n - 1] if n >= 1 else None


@dataclass(frozen=True)
class ThetaEnclosure:
    """Certified interval around the complete quotient theta_n.

    Indexing follows theta_n = [b_{n+1}; b_{n+2}, ...]: the tail that the
    convergent pair (n, n-1) exposes.
    """

    n: int
    interval: RationalInterval

    def fractional_part(self, b_next: int) -> RationalInterval:
        """Enclosure of theta_n - b_{n+1}, the fractional tail."""
        return self.interval - b_next


class _AmbiguousFloor(Exception):
    """Interval too wide to pin an integer floor; retry at higher precision."""


def _interval_floor(iv: RationalInterval) -> int:
    fl = math.floor(iv.lo)
    if math.floor(iv.hi) != fl:
        raise _AmbiguousFloor
    return fl


def complete_quotient_interval(
    conv: Convergent, prev: Convergent | None, alpha_iv: RationalInterval
) -> RationalInterval:
    """Enclosure of theta_n = (p_{n-1} - q_{n-1}*alpha)/(q_n*alpha - p_n).

    Equivalent to 1/(q_n|q_n*alpha - p_n|) - q_{n-1}/q_n with the sign
    handled implicitly.  Raises IntervalZeroDivisionError when alpha_iv is
    too wide to separate the denominator from zero.
    """
    pp, qp = _prev_pq(prev)
    num = pp - qp * alpha_iv
    den = conv.q * alpha_iv - conv.p
    return num / den


def theta_enclosure(
    spec: RadicandSpec,
    conv: Convergent,
    prev: Convergent | None,
    *,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
    target_width: Fraction | None = None,
) -> ThetaEnclosure:
    """Certified theta_n enclosure, refining precision until usable.

    Precision doubles until the defining quotient is computable and, if
    `target_width` is given, at least that tight.
    """
    bits = start_bits
    while True:
        try:
            iv = complete_quotient_interval(conv, prev, alpha_interval(spec, bits))
            if target_width is None or iv.width <= target_width:
                return ThetaEnclosure(n=conv.n, interval=iv)
        except IntervalZeroDivisionError:
            pass
        bits *= 2
        if bits > max_bits:
            raise PrecisionCeilingError(max_bits)


def _theta_exceeds(spec: RadicandSpec, conv: Convergent, prev: Convergent | None, t: int) -> bool:
    """Exact decision theta_n > t using only integer sign evaluations.

    theta_n - t has the sign of (p_{n-1} + t*p_n) - (q_{n-1} + t*q_n)*alpha
    divided by q_n*alpha - p_n; both signs are exact.
    """
    pp, qp = _prev_pq(prev)
    num_sign = sign_linear_in_alpha(spec, -(qp + t * conv.q), pp + t * conv.p)
    den_sign = sign_linear_in_alpha(spec, conv.q, -conv.p)
    return num_sign * den_sign > 0


def verify_quotient(spec: RadicandSpec, conv: Convergent, prev: Convergent | None, t: int) -> bool:
    """Exact certificate that floor(theta_n) = t; no precision parameter."""
    if t < 1:
        return False
    return _theta_exceeds(spec, conv, prev, t) and not _theta_exceeds(spec, conv, prev, t + 1)


def next_partial_quotient(spec: RadicandSpec, conv: Convergent, prev: Convergent | None) -> int:
    """b_{n+1} = floor(theta_n) by doubling then binary search on the order test."""
    lo, hi = 1, 2
    while _theta_exceeds(spec, conv, prev, hi):
        lo, hi = hi, hi * 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if _theta_exceeds(spec, conv, prev, mid):
            lo = mid
        else:
            hi = mid
    return lo


def _expand_at(spec: RadicandSpec, count: int, bits: int) -> Expansion:
    theta = alpha_interval(spec, bits)
    terms: list[Convergent] = []
    prev: Convergent | None = None
    prev2: Convergent | None = None
    for n in range(count + 1):
        b = _interval_floor(theta)
        conv = convergent_step(spec, (prev, prev2), b)
        terms.append(conv)
        prev2, prev = prev, conv
        if n < count:
            tail = theta - b
            if tail.lo <= 0:
                raise _AmbiguousFloor
            theta = tail.reciprocal()
    assert terms[0].b == int_nth_root(spec.k, spec.m)
    if count >= 1:
        certified = verify_quotient(
            spec, terms[-2], terms[-3] if count >= 2 else None, terms[-1].b
        )
        if not certified:
            raise InconsistentEnclosureError(
                "interval expansion disagrees with the exact oracle on the last term"
            )
    return Expansion(spec=spec, terms=tuple(terms), precision_bits=bits)


def expand(
    spec: RadicandSpec,
    count: int,
    *,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> Expansion:
    """Certified expansion b_0..b_count by interval Gauss-map iteration.

    Whenever the floor of an enclosed complete quotient is ambiguous the
    whole prefix is recomputed at doubled precision, so every emitted term
    is certain, not merely probable.  The final term is re-certified by
    the exact oracle.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    bits = start_bits
    while True:
        try:
            return _expand_at(spec, count, bits)
        except _AmbiguousFloor:
            bits *= 2
            if bits > max_bits:
                raise PrecisionCeilingError(max_bits) from None


def expand_exact_oracle(spec: RadicandSpec, count: int) -> Expansion:
    """Expansion via the exact order test only; no interval arithmetic.

    Asymptotically slower than `expand`; exists to cross-certify it.
    precision_bits is reported as 0 because no enclosure is ever formed.
    """
    if count < 0:
        raise ValueError("count must be non-negative")
    terms: list[Convergent] = []
    prev: Convergent | None = None
    prev2: Convergent | None = None
    b = int_nth_root(spec.k, spec.m)
    for n in range(count + 1):
        conv = convergent_step(spec, (prev, prev2), b)
        terms.append(conv)
        prev2, prev = prev, conv
        if n < count:
            b = next_partial_quotient(spec, conv, prev2)
    return Expansion(spec=spec, terms=tuple(terms), precision_bits=0)
