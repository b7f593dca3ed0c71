import math
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootcf.exact import (
    AlphaEnclosure,
    IntervalZeroDivisionError,
    InvalidDegreeError,
    PerfectPowerError,
    RadicandSpec,
    RationalInterval,
    alpha_floor_scaled,
    alpha_interval,
    int_nth_root,
    prime_divisors,
    sign_linear_in_alpha,
    validate_spec,
)

from oracles import nth_root_bisect


class TestIntNthRoot:
    def test_degree_ten_power(self):
        assert int_nth_root(59049, 10) == 3  # 3**10 = 59049

    @pytest.mark.parametrize("m", [1, 2, 3, 7, 40])
    def test_one(self, m):
        assert int_nth_root(1, m) == 1

    def test_cube(self):
        assert int_nth_root(63, 3) == 3  # 27 <= 63 < 64

    def test_small_exhaustive(self):
        for x in range(0, 300):
            for m in range(1, 8):
                assert int_nth_root(x, m) == nth_root_bisect(x, m)

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            int_nth_root(-1, 2)
        with pytest.raises(ValueError):
            int_nth_root(4, 0)

    @given(x=st.integers(min_value=0, max_value=10 ** 80), m=st.integers(min_value=1, max_value=40))
    def test_floor_property(self, x, m):
        r = int_nth_root(x, m)
        assert r >= 0
        assert r ** m <= x < (r + 1) ** m

    @given(r=st.integers(min_value=0, max_value=10 ** 20), m=st.integers(min_value=1, max_value=12))
    def test_exact_powers_roundtrip(self, r, m):
        assert int_nth_root(r ** m, m) == r


class TestValidateSpec:
    def test_degree_ten_case(self):
        spec = validate_spec(50, 10)
        assert (spec.k, spec.m) == (50, 10)

    def test_rejects_perfect_cube(self):
        with pytest.raises(PerfectPowerError):
            validate_spec(8, 3)

    def test_rejects_square_under_even_degree(self):
        # 4 = 2**2 and 2 | 10, so 4**(1/10) = 2**(1/5) has degree 5 < 10.
        with pytest.raises(PerfectPowerError):
            validate_spec(4, 10)

    def test_rejects_one(self):
        with pytest.raises(PerfectPowerError):
            validate_spec(1, 3)

    def test_rejects_low_degree(self):
        with pytest.raises(InvalidDegreeError):
            validate_spec(2, 1)

    def test_rejects_nonpositive_radicand(self):
        with pytest.raises(ValueError):
            validate_spec(0, 3)

    def test_quadratic_admitted(self):
        assert validate_spec(2, 2) == RadicandSpec(2, 2)

    def test_sixth_degree_mixed(self):
        # 16 = 2**4 is a square (2 | 6) even though it is not a cube.
        with pytest.raises(PerfectPowerError):
            validate_spec(16, 6)
        validate_spec(24, 6)

    def test_prime_divisors(self):
        assert prime_divisors(10) == (2, 5)
        assert prime_divisors(8) == (2,)
        assert prime_divisors(7) == (7,)


class TestAlphaEnclosure:
    def test_degree_ten_decimal_digits(self):
        # alpha = 50**(1/10) = 1.4787576366..., so the 8-digit floor ends in 63.
        enc = alpha_floor_scaled(validate_spec(50, 10), 8, base=10)
        assert enc.scaled_floor == 147875763

    def test_cbrt2_three_digits(self):
        enc = alpha_floor_scaled(validate_spec(2, 3), 3, base=10)
        assert enc.scaled_floor == 1259  # 1259**3 <= 2e9 < 1260**3

    def test_sqrt2_zero_digits(self):
        assert alpha_floor_scaled(validate_spec(2, 2), 0, base=10).scaled_floor == 1

    @given(
        k=st.integers(min_value=2, max_value=500),
        m=st.integers(min_value=2, max_value=8),
        digits=st.integers(min_value=0, max_value=30),
        base=st.sampled_from([2, 10]),
    )
    @settings(max_examples=60)
    def test_soundness(self, k, m, digits, base):
        try:
            spec = validate_spec(k, m)
        except PerfectPowerError:
            return
        enc = alpha_floor_scaled(spec, digits, base=base)
        scaled = k * base ** (m * digits)
        assert enc.scaled_floor ** m <= scaled < (enc.scaled_floor + 1) ** m
        iv = enc.interval
        assert iv.width == Fraction(1, base ** digits)

    def test_interval_contains_alpha(self):
        spec = validate_spec(2, 3)
        iv = alpha_interval(spec, 50)
        # alpha in [lo, hi] iff lo**3 <= 2 <= hi**3
        assert iv.lo ** 3 <= 2 <= iv.hi ** 3


class TestSignLinearInAlpha:
    def test_cbrt2_above_one(self):
        assert sign_linear_in_alpha(validate_spec(2, 3), 1, -1) == 1

    def test_three_cbrt2_below_four(self):
        assert sign_linear_in_alpha(validate_spec(2, 3), 3, -4) == -1

    def test_degree_ten_half_convergent(self):
        # 3/2 lies above alpha = 50**(1/10), so 2*alpha - 3 < 0.
        assert sign_linear_in_alpha(validate_spec(50, 10), 2, -3) == -1

    def test_zero_coefficient(self):
        spec = validate_spec(2, 3)
        assert sign_linear_in_alpha(spec, 0, 5) == 1
        assert sign_linear_in_alpha(spec, 0, -5) == -1
        assert sign_linear_in_alpha(spec, 0, 0) == 0

    def test_same_sign_fast_paths(self):
        spec = validate_spec(7, 5)
        assert sign_linear_in_alpha(spec, 3, 2) == 1
        assert sign_linear_in_alpha(spec, -3, -2) == -1

    @given(
        k=st.integers(min_value=2, max_value=100),
        m=st.integers(min_value=2, max_value=6),
        u=st.integers(min_value=-10 ** 12, max_value=10 ** 12),
        v=st.integers(min_value=-10 ** 12, max_value=10 ** 12),
    )
    @settings(max_examples=200)
    def test_agrees_with_enclosure(self, k, m, u, v):
        # Cross-validate against a 50-decimal-digit enclosure whenever the
        # enclosure separates the root -v/u.
        try:
            spec = validate_spec(k, m)
        except PerfectPowerError:
            return
        iv = alpha_floor_scaled(spec, 50, base=10).interval
        at_lo, at_hi = u * iv.lo + v, u * iv.hi + v
        if at_lo == 0 or at_hi == 0 or (at_lo < 0) != (at_hi < 0):
            return
        expected = 1 if at_lo > 0 else -1
        assert sign_linear_in_alpha(spec, u, v) == expected


def iv(lo, hi):
    return RationalInterval(Fraction(lo), Fraction(hi))


class TestRationalInterval:
    def test_add(self):
        assert iv(1, 2) + iv(3, 4) == iv(4, 6)

    def test_mul_mixed_signs(self):
        assert iv(1, 2) * iv(-1, 1) == iv(-2, 2)

    def test_div(self):
        assert iv(1, 2) / iv(4, 8) == RationalInterval(Fraction(1, 8), Fraction(1, 2))

    def test_div_by_zero_interval(self):
        with pytest.raises(IntervalZeroDivisionError):
            iv(1, 2) / iv(-1, 1)

    def test_sub_and_scalars(self):
        assert iv(1, 2) - 1 == iv(0, 1)
        assert 1 - iv(1, 2) == iv(-1, 0)
        assert Fraction(1, 2) * iv(2, 4) == iv(1, 2)
        assert 1 / iv(2, 4) == RationalInterval(Fraction(1, 4), Fraction(1, 2))

    def test_pow(self):
        assert iv(-2, 3) ** 2 == iv(0, 9)
        assert iv(-2, 3) ** 3 == iv(-8, 27)
        assert iv(-3, -2) ** 2 == iv(4, 9)
        assert iv(2, 3) ** 0 == iv(1, 1)

    def test_ordering_guard(self):
        with pytest.raises(ValueError):
            iv(2, 1)

    def test_membership_and_width(self):
        box = iv(1, 2)
        assert Fraction(3, 2) in box
        assert 3 not in box
        assert box.width == 1
        assert box.mid == Fraction(3, 2)
        assert box.strictly_inside(0, 3)
        assert not box.strictly_inside(1, 3)

    def test_intersection(self):
        assert iv(1, 3).intersect(iv(2, 5)) == iv(2, 3)
        assert iv(1, 2).intersect(iv(3, 4)) is None
        assert iv(1, 2).intersects(iv(2, 3))

    @given(
        a=st.tuples(st.integers(-50, 50), st.integers(0, 20)),
        b=st.tuples(st.integers(-50, 50), st.integers(0, 20)),
        grow_a=st.integers(0, 10),
        grow_b=st.integers(0, 10),
        op=st.sampled_from(["add", "sub", "mul", "div"]),
    )
    @settings(max_examples=200)
    def test_inclusion_monotone(self, a, b, grow_a, grow_b, op):
        inner_a = iv(a[0], a[0] + a[1])
        inner_b = iv(b[0], b[0] + b[1])
        outer_a = iv(a[0] - grow_a, a[0] + a[1] + grow_a)
        outer_b = iv(b[0] - grow_b, b[0] + b[1] + grow_b)
        if op == "div" and (0 in outer_b or 0 in inner_b):
            return
        apply = {
            "add": lambda x, y: x + y,
            "sub": lambda x, y: x - y,
            "mul": lambda x, y: x * y,
            "div": lambda x, y: x / y,
        }[op]
        assert apply(outer_a, outer_b).contains_interval(apply(inner_a, inner_b))

    @given(
        a=st.tuples(st.integers(-30, 30), st.integers(0, 15)),
        b=st.tuples(st.integers(-30, 30), st.integers(0, 15)),
        xa=st.fractions(min_value=0, max_value=1),
        xb=st.fractions(min_value=0, max_value=1),
        op=st.sampled_from(["add", "sub", "mul", "div"]),
    )
    @settings(max_examples=200)
    def test_containment_soundness(self, a, b, xa, xb, op):
        box_a = iv(a[0], a[0] + a[1])
        box_b = iv(b[0], b[0] + b[1])
        point_a = box_a.lo + xa * box_a.width
        point_b = box_b.lo + xb * box_b.width
        if op == "div" and (0 in box_b or point_b == 0):
            return
        apply = {
            "add": lambda x, y: x + y,
            "sub": lambda x, y: x - y,
            "mul": lambda x, y: x * y,
            "div": lambda x, y: x / y,
        }[op]
        assert apply(point_a, point_b) in apply(box_a, box_b)
