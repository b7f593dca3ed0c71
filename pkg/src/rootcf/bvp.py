"""Bombieri-van der Poorten decomposition of complete quotients.

For each convergent p_n/q_n of alpha = k**(1/m) the complete quotient
splits as theta_n = H_n + R_n with the leading term

    H_n = m * p_n**(m-1) / (d_n * q_n),      d_n = |p_n**m - k*q_n**m|,

and the remainder R_n = W_n - q_{n-1}/q_n, where W_n is the linearization
error of the m-th power difference.  This module computes all of these
exactly (rationals) or as certified enclosures (alpha-dependent reals),
predicts partial quotients through the floor of A_n = H_n - q_{n-1}/q_n,
and measures every claimed bound, recording violations it can certify.

Sign conventions: W_n carries the sign of alpha - x_n.  For cubics the
classical correction V_n = (q_n/d_n)(2x_n**2 - x_n*alpha - alpha**2)
satisfies V_n = -W_n and sgn(V_n) = sgn(x_n - alpha).
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction

from .exact import (
    DEFAULT_MAX_BITS,
    DEFAULT_START_BITS,
    InconsistentEnclosureError,
    IntervalZeroDivisionError,
    InvalidDegreeError,
    PerfectPowerError,
    PrecisionCeilingError,
    RadicandSpec,
    RationalInterval,
    WrongDegreeError,
    alpha_interval,
    validate_spec,
)
from .engine import (
    Convergent,
    Expansion,
    Side,
    _prev_pq,
    complete_quotient_interval,
    expand,
    next_partial_quotient,
    verify_quotient,
)

UNIT = RationalInterval(Fraction(-1), Fraction(1))

# Violation kinds.
REMAINDER_BOUND = "remainder_bound"
WINDOW_ABOVE = "window_above"
WINDOW_BELOW = "window_below"
EPSILON_RANGE = "epsilon_range"

CLAIM_ABOVE_WINDOW = "above side: H_n - 2 < b_{n+1} <= H_n"
CLAIM_ABOVE_EPSILON = "above side: b_{n+1} = floor(A_n) + eps with eps in {0, 1}"
CLAIM_BELOW_WINDOW = "below side: H_n <= b_{n+1} < H_n + 2"
CLAIM_BELOW_EPSILON = "below side: b_{n+1} = floor(A_n) + eps with eps in {-1, 0}"
CLAIM_REMAINDER = "|R_n| < 1 for q_n >= 2"


def algebraic_distance(spec: RadicandSpec, conv: Convergent) -> int:
    """d_n = |p_n**m - k*q_n**m|, exact and strictly positive."""
    return abs(conv.p ** spec.m - spec.k * conv.q ** spec.m)


def leading_term(spec: RadicandSpec, conv: Convergent) -> Fraction:
    """H_n = m*p_n**(m-1)/(d_n*q_n) as a reduced rational."""
    return Fraction(spec.m * conv.p ** (spec.m - 1), algebraic_distance(spec, conv) * conv.q)


def shifted_leading_term(spec: RadicandSpec, conv: Convergent, prev: Convergent | None) -> Fraction:
    """A_n = H_n - q_{n-1}/q_n, the quantity whose floor predicts b_{n+1}."""
    qp = _prev_pq(prev)[1]
    return leading_term(spec, conv) - Fraction(qp, conv.q)


def general_correction(
    spec: RadicandSpec, conv: Convergent, alpha_iv: RationalInterval
) -> RationalInterval:
    """Enclosure of the linearization error W_n, any degree m >= 2.

    W_n = (q_n**(m-2)/d_n) * (sum_{j<m} x_n**j * alpha**(m-1-j) - m*x_n**(m-1)),
    so that R_n = W_n - q_{n-1}/q_n.
    """
    m = spec.m
    x = Fraction(conv.p, conv.q)
    total = RationalInterval.point(-m * x ** (m - 1))
    for j in range(m):
        total = total + (alpha_iv ** (m - 1 - j)) * (x ** j)
    return total * Fraction(conv.q ** (m - 2), algebraic_distance(spec, conv))


def cubic_correction(
    spec: RadicandSpec, conv: Convergent, alpha_iv: RationalInterval
) -> RationalInterval:
    """Signed enclosure of the cubic correction V_n (degree 3 only).

    Evaluates both the defining form (q/d)(2x**2 - x*alpha - alpha**2) and
    the closed form (2x + alpha)/(q**2 (x**2 + x*alpha + alpha**2)) with the
    sign attached exactly from the convergent's side, and returns the
    intersection of the two enclosures.
    """
    if spec.m != 3:
        raise WrongDegreeError(f"cubic correction needs m = 3, got m = {spec.m}")
    x = Fraction(conv.p, conv.q)
    d = algebraic_distance(spec, conv)
    defining = (2 * x * x - x * alpha_iv - alpha_iv ** 2) * Fraction(conv.q, d)
    magnitude = (2 * x + alpha_iv) / ((x * x + x * alpha_iv + alpha_iv ** 2) * (conv.q ** 2))
    closed = magnitude if conv.side is Side.ABOVE else -magnitude
    out = defining.intersect(closed)
    if out is None:
        raise InconsistentEnclosureError(
            f"cubic correction forms disjoint at n={conv.n}: {defining} vs {closed}"
        )
    return out


def remainder(
    spec: RadicandSpec,
    conv: Convergent,
    prev: Convergent | None,
    alpha_iv: RationalInterval,
) -> RationalInterval:
    """Enclosure of R_n, doubly certified.

    Computed both as W_n - q_{n-1}/q_n and as theta_n - H_n; the two
    enclosures must intersect and the (tighter) intersection is returned.
    """
    qp = _prev_pq(prev)[1]
    via_correction = general_correction(spec, conv, alpha_iv) - Fraction(qp, conv.q)
    via_quotient = complete_quotient_interval(conv, prev, alpha_iv) - leading_term(spec, conv)
    out = via_correction.intersect(via_quotient)
    if out is None:
        raise InconsistentEnclosureError(
            f"remainder routes disjoint at n={conv.n}: {via_correction} vs {via_quotient}"
        )
    return out


def remainder_enclosure(
    spec: RadicandSpec,
    conv: Convergent,
    prev: Convergent | None,
    *,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
    target_width: Fraction | None = None,
) -> RationalInterval:
    """R_n enclosure with automatic refinement to an optional width target."""
    bits = start_bits
    while True:
        try:
            iv = remainder(spec, conv, prev, alpha_interval(spec, bits))
            if target_width is None or iv.width <= target_width:
                return iv
        except IntervalZeroDivisionError:
            pass
        bits *= 2
        if bits > max_bits:
            raise PrecisionCeilingError(max_bits)


def certified_unit_remainder(
    spec: RadicandSpec,
    conv: Convergent,
    prev: Convergent | None,
    *,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> tuple[RationalInterval, bool]:
    """(R_n enclosure, certified |R_n| < 1) with refinement until decidable.

    Refines precision until the enclosure lies strictly inside (-1, 1) or
    strictly outside [-1, 1]; R_n = +-1 is impossible because theta_n is
    irrational while H_n and q_{n-1}/q_n are rational.
    """
    bits = start_bits
    while True:
        try:
            iv = remainder(spec, conv, prev, alpha_interval(spec, bits))
            if iv.strictly_inside(-1, 1):
                return iv, True
            if iv.hi < -1 or iv.lo > 1:
                return iv, False
        except IntervalZeroDivisionError:
            pass
        bits *= 2
        if bits > max_bits:
            raise PrecisionCeilingError(max_bits)


@dataclass(frozen=True)
class BvpTerms:
    """Per-index bundle of decomposition quantities.

    Exact rationals/integers: distance d_n, leading H_n, shifted A_n.
    Certified enclosures: theta_n, remainder R_n, correction W_n and,
    for cubics, the signed correction V_n (= -W_n).
    """

    n: int
    side: Side
    distance: int
    leading: Fraction
    shifted_leading: Fraction
    theta: RationalInterval
    remainder: RationalInterval
    correction: RationalInterval
    cubic: RationalInterval | None


def bvp_terms(
    spec: RadicandSpec,
    conv: Convergent,
    prev: Convergent | None,
    *,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
    target_width: Fraction | None = None,
) -> BvpTerms:
    """Assemble the full decomposition bundle at an adaptive precision."""
    bits = start_bits
    while True:
        try:
            a_iv = alpha_interval(spec, bits)
            theta_iv = complete_quotient_interval(conv, prev, a_iv)
            w_iv = general_correction(spec, conv, a_iv)
            qp = _prev_pq(prev)[1]
            h = leading_term(spec, conv)
            r_iv = (w_iv - Fraction(qp, conv.q)).intersect(theta_iv - h)
            if r_iv is None:
                raise InconsistentEnclosureError(f"remainder routes disjoint at n={conv.n}")
            v_iv = cubic_correction(spec, conv, a_iv) if spec.m == 3 else None
            if target_width is None or max(theta_iv.width, r_iv.width) <= target_width:
                return BvpTerms(
                    n=conv.n,
                    side=conv.side,
                    distance=algebraic_distance(spec, conv),
                    leading=h,
                    shifted_leading=h - Fraction(qp, conv.q),
                    theta=theta_iv,
                    remainder=r_iv,
                    correction=w_iv,
                    cubic=v_iv,
                )
        except IntervalZeroDivisionError:
            pass
        bits *= 2
        if bits > max_bits:
            raise PrecisionCeilingError(max_bits)


@dataclass(frozen=True)
class PredictionOutcome:
    """Result of predicting b_{n+1} from the floor of A_n.

    epsilon is resolved by the exact oracle: 0 if floor(A_n) verifies,
    1 if floor(A_n)+1 verifies, else 0 with formula_held False (the
    formula's two-candidate window missed; actual is still exact).
    """

    n: int
    side: Side
    candidate: int
    epsilon: int
    predicted: int
    actual: int
    formula_held: bool
    window_held: bool


def predict_next(spec: RadicandSpec, conv: Convergent, prev: Convergent | None) -> PredictionOutcome:
    """Predict b_{n+1} = floor(A_n) + eps and verify it exactly.

    window_held reports the side-appropriate certain window implied by
    |R_n| < 1: H-2 < b <= H above, H-2 < b < H+1 below.
    """
    candidate = math.floor(shifted_leading_term(spec, conv, prev))
    if verify_quotient(spec, conv, prev, candidate):
        epsilon, actual = 0, candidate
    elif verify_quotient(spec, conv, prev, candidate + 1):
        epsilon, actual = 1, candidate + 1
    else:
        epsilon, actual = 0, next_partial_quotient(spec, conv, prev)
    h = leading_term(spec, conv)
    if conv.side is Side.ABOVE:
        window = h - 2 < actual <= h
    else:
        window = h - 2 < actual < h + 1
    return PredictionOutcome(
        n=conv.n,
        side=conv.side,
        candidate=candidate,
        epsilon=epsilon,
        predicted=candidate + epsilon,
        actual=actual,
        formula_held=(candidate + epsilon == actual),
        window_held=window,
    )


@dataclass(frozen=True)
class ViolationRecord:
    """A measured failure of a stated bound, with regeneration data.

    (k, m, n, p, q, b_next, distance) suffice to recompute the violation
    exactly; observed is the offending value (interval or integer).
    """

    k: int
    m: int
    n: int
    quantity: str
    p: int
    q: int
    b_next: int
    distance: int
    observed: RationalInterval | int
    claimed: str


@dataclass(frozen=True)
class ClaimStats:
    """Measured pass/fail tally for one stated claim (never asserted)."""

    claim: str
    passed: int
    failed: int
    failures: tuple[ViolationRecord, ...]


@dataclass(frozen=True)
class TermCheck:
    """Everything the verifier measured at one index."""

    n: int
    b_next: int
    side: Side
    p: int
    q: int
    distance: int
    leading: Fraction
    shifted_leading: Fraction
    theta: RationalInterval
    remainder: RationalInterval
    remainder_in_unit: bool
    prediction: PredictionOutcome
    q_at_least_2: bool
    window_above_ok: bool | None
    below_window_ok: bool | None
    above_epsilon_ok: bool | None
    below_epsilon_ok: bool | None
    general_window_ok: bool
    universal_identity_ok: bool
    cubic_sign_ok: bool | None


@dataclass(frozen=True)
class TheoremReport:
    """Outcome of sweeping every stated bound over one expansion.

    violations holds certified failures of the unconditional claims
    (remainder bound; for cubics also the above-side window).  The
    epsilon-range and below-side claims are measured into ClaimStats,
    failures included, without being asserted.
    """

    spec: RadicandSpec
    n_max: int
    q_min: int
    expansion: Expansion
    checked: tuple[int, ...]
    skipped: tuple[int, ...]
    violations: tuple[ViolationRecord, ...]
    above_epsilon: ClaimStats
    below_window: ClaimStats
    below_epsilon: ClaimStats
    remainder_stable_from: int | None
    window_stable_from: int | None
    terms: tuple[TermCheck, ...]


def _analyze_term(
    spec: RadicandSpec,
    conv: Convergent,
    prev: Convergent | None,
    start_bits: int,
    max_bits: int,
) -> tuple[RationalInterval, RationalInterval, bool, bool, bool | None]:
    """(theta, remainder, in_unit, universal_identity_ok, cubic_sign_ok) certified.

    Refines until the remainder is decided against the unit interval and,
    for cubics, the defining-form correction has a determined sign.
    """
    x = Fraction(conv.p, conv.q)
    h = leading_term(spec, conv)
    qp = _prev_pq(prev)[1]
    shift = Fraction(qp, conv.q)
    bits = start_bits
    while True:
        try:
            a_iv = alpha_interval(spec, bits)
            theta_iv = complete_quotient_interval(conv, prev, a_iv)
            r_iv = (general_correction(spec, conv, a_iv) - shift).intersect(theta_iv - h)
            if r_iv is None:
                raise InconsistentEnclosureError(f"remainder routes disjoint at n={conv.n}")
            in_unit = r_iv.strictly_inside(-1, 1)
            decided = in_unit or r_iv.hi < -1 or r_iv.lo > 1

            # Universal identity: theta + q_{n-1}/q_n = 1/(q**2 |x - alpha|).
            gap = (x - a_iv) if conv.side is Side.ABOVE else (a_iv - x)
            if gap.lo <= 0:
                raise IntervalZeroDivisionError
            universal_ok = (theta_iv + shift).intersects((gap * conv.q ** 2).reciprocal())

            sign_ok: bool | None = None
            if spec.m == 3:
                v_iv = cubic_correction(spec, conv, a_iv)
                if v_iv.lo > 0:
                    sign_ok = conv.side is Side.ABOVE
                elif v_iv.hi < 0:
                    sign_ok = conv.side is Side.BELOW
            if decided and (spec.m != 3 or sign_ok is not None):
                return theta_iv, r_iv, in_unit, universal_ok, sign_ok
        except IntervalZeroDivisionError:
            pass
        bits *= 2
        if bits > max_bits:
            raise PrecisionCeilingError(max_bits)


def _stable_from(failures: list[int], last_checked: int | None) -> int | None:
    """Least n0 with no failure in [n0, last_checked]; None if the last index fails."""
    if last_checked is None:
        return None
    if not failures:
        return 1
    worst = max(failures)
    return worst + 1 if worst < last_checked else None


def verify_theorems(
    spec: RadicandSpec,
    n_max: int,
    *,
    q_min: int = 2,
    keep_terms: bool = True,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> TheoremReport:
    """Measure every stated bound for n = 1..n_max.

    Certifies |R_n| < 1 (or its failure) with strict interval enclosures,
    checks the above-side window exactly, measures the epsilon-range and
    below-side claims, and records the least index from which stability
    holds through n_max.  Indices with q_n < q_min are analyzed but
    excluded from claims and violations; index 0 is always skipped
    (q_0 = 1 sits outside every stated bound).
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    exp = expand(spec, n_max + 1, start_bits=start_bits, max_bits=max_bits)
    bits = max(exp.precision_bits, start_bits)

    violations: list[ViolationRecord] = []
    tallies = {
        CLAIM_ABOVE_EPSILON: [0, 0, []],
        CLAIM_BELOW_WINDOW: [0, 0, []],
        CLAIM_BELOW_EPSILON: [0, 0, []],
    }
    term_checks: list[TermCheck] = []
    remainder_failures: list[int] = []
    window_failures: list[int] = []
    checked: list[int] = []
    skipped: list[int] = [0]
    last_checked: int | None = None

    def record(n, conv, b_next, d, quantity, observed, claimed) -> ViolationRecord:
        return ViolationRecord(
            k=spec.k, m=spec.m, n=n, quantity=quantity,
            p=conv.p, q=conv.q, b_next=b_next, distance=d,
            observed=observed, claimed=claimed,
        )

    def tally(claim, ok, failure):
        entry = tallies[claim]
        if ok:
            entry[0] += 1
        else:
            entry[1] += 1
            entry[2].append(failure)

    for n in range(1, n_max + 1):
        conv, prev = exp.pair(n)
        b_next = exp.terms[n + 1].b
        d = algebraic_distance(spec, conv)
        h = leading_term(spec, conv)
        outcome = predict_next(spec, conv, prev)
        if outcome.actual != b_next:
            raise InconsistentEnclosureError(
                f"exact prediction and certified expansion disagree at n={n}"
            )
        theta_iv, r_iv, in_unit, universal_ok, sign_ok = _analyze_term(spec, conv, prev, bits, max_bits)
        if sign_ok is False:
            raise InconsistentEnclosureError(f"cubic correction sign contradicts side at n={n}")

        q_ok = conv.q >= q_min
        true_eps = outcome.actual - outcome.candidate
        above = conv.side is Side.ABOVE
        window_above = (h - 2 < b_next <= h) if above else None
        below_window = (h <= b_next < h + 2) if not above else None
        above_eps = (true_eps in (0, 1)) if above else None
        below_eps = (true_eps in (-1, 0)) if not above else None
        general_window = b_next <= h and b_next + 2 > h

        if q_ok:
            checked.append(n)
            last_checked = n
            if not in_unit:
                remainder_failures.append(n)
                violations.append(
                    record(n, conv, b_next, d, REMAINDER_BOUND, r_iv, CLAIM_REMAINDER)
                )
            if not general_window:
                window_failures.append(n)
            if above:
                if spec.m == 3 and not window_above:
                    violations.append(
                        record(n, conv, b_next, d, WINDOW_ABOVE, b_next,
                               f"{CLAIM_ABOVE_WINDOW} with H_n = {h}")
                    )
                tally(CLAIM_ABOVE_EPSILON, above_eps,
                      record(n, conv, b_next, d, EPSILON_RANGE, true_eps,
                             f"{CLAIM_ABOVE_EPSILON}; A_n = {shifted_leading_term(spec, conv, prev)}"))
            else:
                tally(CLAIM_BELOW_WINDOW, below_window,
                      record(n, conv, b_next, d, WINDOW_BELOW, b_next,
                             f"{CLAIM_BELOW_WINDOW} with H_n = {h}"))
                tally(CLAIM_BELOW_EPSILON, below_eps,
                      record(n, conv, b_next, d, EPSILON_RANGE, true_eps,
                             f"{CLAIM_BELOW_EPSILON}; A_n = {shifted_leading_term(spec, conv, prev)}"))
        else:
            skipped.append(n)

        if keep_terms:
            term_checks.append(
                TermCheck(
                    n=n, b_next=b_next, side=conv.side, p=conv.p, q=conv.q,
                    distance=d, leading=h,
                    shifted_leading=shifted_leading_term(spec, conv, prev),
                    theta=theta_iv, remainder=r_iv, remainder_in_unit=in_unit,
                    prediction=outcome, q_at_least_2=q_ok,
                    window_above_ok=window_above, below_window_ok=below_window,
                    above_epsilon_ok=above_eps, below_epsilon_ok=below_eps,
                    general_window_ok=general_window, universal_identity_ok=universal_ok,
                    cubic_sign_ok=sign_ok,
                )
            )

    stats = {
        claim: ClaimStats(claim=claim, passed=entry[0], failed=entry[1], failures=tuple(entry[2]))
        for claim, entry in tallies.items()
    }
    return TheoremReport(
        spec=spec,
        n_max=n_max,
        q_min=q_min,
        expansion=exp,
        checked=tuple(checked),
        skipped=tuple(skipped),
        violations=tuple(violations),
        above_epsilon=stats[CLAIM_ABOVE_EPSILON],
        below_window=stats[CLAIM_BELOW_WINDOW],
        below_epsilon=stats[CLAIM_BELOW_EPSILON],
        remainder_stable_from=_stable_from(remainder_failures, last_checked),
        window_stable_from=_stable_from(window_failures, last_checked),
        terms=tuple(term_checks),
    )


@dataclass(frozen=True)
class CellSummary:
    """One (k, m) cell of a scan."""

    k: int
    m: int
    n_max: int
    violations: int
    remainder_stable_from: int | None
    window_stable_from: int | None


@dataclass(frozen=True)
class SkippedCell:
    """A (k, m) pair rejected before analysis."""

    k: int
    m: int
    reason: str


@dataclass(frozen=True)
class ScanReport:
    """Deterministic violation search over a (k, m) grid."""

    cells: tuple[CellSummary, ...]
    skipped: tuple[SkippedCell, ...]
    violations: tuple[ViolationRecord, ...]


def _scan_cell(args) -> tuple:
    k, m, n_max, q_min, start_bits, max_bits = args
    try:
        spec = validate_spec(k, m)
    except (PerfectPowerError, InvalidDegreeError, ValueError) as exc:
        return k, m, None, str(exc)
    report = verify_theorems(
        spec, n_max, q_min=q_min, keep_terms=False,
        start_bits=start_bits, max_bits=max_bits,
    )
    return k, m, report, None


def scan(
    k_values,
    m_values,
    n_max: int,
    *,
    q_min: int = 2,
    workers: int = 1,
    start_bits: int = DEFAULT_START_BITS,
    max_bits: int = DEFAULT_MAX_BITS,
) -> ScanReport:
    """Sweep verify_theorems over a grid of radicands and degrees.

    Invalid specs are skipped and counted; results are merged in (m, k)
    order so the report is identical no matter how cells were scheduled.
    Violations here are the certified kinds only (remainder bound and,
    for cubics, the above-side window): the claims that are expected to
    hold whenever they are stated.
    """
    jobs = [
        (k, m, n_max, q_min, start_bits, max_bits)
        for m in sorted(set(m_values))
        for k in sorted(set(k_values))
    ]
    if workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_scan_cell, jobs, chunksize=4))
    else:
        results = [_scan_cell(job) for job in jobs]

    cells: list[CellSummary] = []
    skipped: list[SkippedCell] = []
    violations: list[ViolationRecord] = []
    for k, m, report, error in sorted(results, key=lambda r: (r[1], r[0])):
        if report is None:
            skipped.append(SkippedCell(k=k, m=m, reason=error))
            continue
        violations.extend(report.violations)
        cells.append(
            CellSummary(
                k=k, m=m, n_max=n_max,
                violations=len(report.violations),
                remainder_stable_from=report.remainder_stable_from,
                window_stable_from=report.window_stable_from,
            )
        )
    violations.sort(key=lambda v: (v.m, v.k, v.n, v.quantity))
    return ScanReport(cells=tuple(cells), skipped=tuple(skipped), violations=tuple(violations))
