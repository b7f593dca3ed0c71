from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rootcf.engine import (
    Side,
    complete_quotient_interval,
    convergent_step,
    expand,
    expand_exact_oracle,
    next_partial_quotient,
    theta_enclosure,
    verify_quotient,
)
from rootcf.exact import (
    PerfectPowerError,
    PrecisionCeilingError,
    alpha_interval,
    validate_spec,
)

import oracles


SPEC_50_10 = validate_spec(50, 10)
SPEC_2_3 = validate_spec(2, 3)
SPEC_2_2 = validate_spec(2, 2)


class TestExpand:
    def test_degree_ten_prefix(self):
        assert expand(SPEC_50_10, 3).partial_quotients == [1, 2, 11, 3]

    def test_cbrt2_prefix(self):
        # Frozen from the fixed-point oracle at 2000 bits.
        assert expand(SPEC_2_3, 6).partial_quotients == [1, 3, 1, 5, 1, 1, 4]

    def test_sqrt2_periodic(self):
        exp = expand(SPEC_2_2, 4)
        assert exp.partial_quotients == [1, 2, 2, 2, 2]
        for t in exp.terms:
            assert abs(t.p * t.p - 2 * t.q * t.q) == 1  # Pell identity

    @pytest.mark.parametrize(
        "k,m,frozen",
        [
            (2, 3, oracles.CF_CBRT2),
            (3, 3, oracles.CF_CBRT3),
            (5, 3, oracles.CF_CBRT5),
            (2, 5, oracles.CF_FIFTH2),
            (50, 10, oracles.CF_TENTH50),
        ],
    )
    def test_frozen_prefixes(self, k, m, frozen):
        assert expand(validate_spec(k, m), len(frozen) - 1).partial_quotients == frozen

    @pytest.mark.parametrize("k,m", [(2, 3), (7, 3), (2, 5), (50, 10), (123, 4)])
    def test_matches_fixed_point_oracle(self, k, m):
        count = 25
        got = expand(validate_spec(k, m), count).partial_quotients
        assert got == oracles.cf_terms_fixed_point(k, m, count)

    def test_precision_ceiling(self):
        with pytest.raises(PrecisionCeilingError):
            expand(SPEC_2_3, 40, start_bits=64, max_bits=64)

    def test_convergent_values(self):
        exp = expand(SPEC_50_10, 3)
        pq = [(t.p, t.q) for t in exp.terms]
        assert pq == oracles.convergents_from_terms([1, 2, 11, 3])
        assert pq[1] == (3, 2)

    def test_rejects_negative_count(self):
        with pytest.raises(ValueError):
            expand(SPEC_2_3, -1)


class TestConvergentStep:
    def test_seed_step(self):
        conv = convergent_step(SPEC_2_3, (None, None), 1)
        assert (conv.n, conv.p, conv.q) == (0, 1, 1)
        assert conv.side is Side.BELOW

    def test_cbrt2_second(self):
        c0 = convergent_step(SPEC_2_3, (None, None), 1)
        c1 = convergent_step(SPEC_2_3, (c0, None), 3)
        assert (c1.p, c1.q) == (4, 3)
        assert c1.side is Side.ABOVE

    def test_degree_ten_second(self):
        c0 = convergent_step(SPEC_50_10, (None, None), 1)
        c1 = convergent_step(SPEC_50_10, (c0, None), 2)
        assert (c1.p, c1.q) == (3, 2)

    def test_rejects_zero_quotient(self):
        with pytest.raises(ValueError):
            convergent_step(SPEC_2_3, (None, None), 0)


class TestThetaEnclosure:
    def test_degree_ten_value(self):
        conv, prev = expand(SPEC_50_10, 2).pair(1)
        enc = theta_enclosure(SPEC_50_10, conv, prev, start_bits=128)
        assert enc.interval.width <= Fraction(1, 10 ** 4)
        # theta_1 = 11.26893529...; endpoints within 1e-4 of the 4dp value
        target = Fraction("11.2689")
        assert abs(enc.interval.lo - target) <= Fraction(1, 10 ** 4)
        assert abs(enc.interval.hi - target) <= Fraction(1, 10 ** 4)

    def test_cbrt2_first_quotient(self):
        conv, prev = expand(SPEC_2_3, 1).pair(0)
        assert prev is None
        enc = theta_enclosure(SPEC_2_3, conv, prev, target_width=Fraction(1, 10 ** 8))
        # theta_0 = 1/(alpha - 1) = 3.84732210...
        assert abs(enc.interval.mid - Fraction("3.8473221")) < Fraction(1, 10 ** 6)

    def test_width_shrinks_with_precision(self):
        conv, prev = expand(SPEC_2_3, 8).pair(6)
        widths = []
        for bits in (64, 128, 256, 512):
            iv = complete_quotient_interval(conv, prev, alpha_interval(SPEC_2_3, bits))
            widths.append(iv.width)
        assert all(w2 <= w1 / 2 for w1, w2 in zip(widths, widths[1:]))

    def test_fractional_part(self):
        conv, prev = expand(SPEC_50_10, 2).pair(1)
        enc = theta_enclosure(SPEC_50_10, conv, prev)
        frac = enc.fractional_part(11)
        assert frac.lo > 0 and frac.hi < 1


class TestVerifyQuotient:
    def test_degree_ten_eleven(self):
        conv, prev = expand(SPEC_50_10, 2).pair(1)
        assert verify_quotient(SPEC_50_10, conv, prev, 11)

    def test_degree_ten_twelve_rejected(self):
        conv, prev = expand(SPEC_50_10, 2).pair(1)
        assert not verify_quotient(SPEC_50_10, conv, prev, 12)

    def test_cbrt2(self):
        conv, prev = expand(SPEC_2_3, 2).pair(1)
        assert verify_quotient(SPEC_2_3, conv, prev, 1)
        assert not verify_quotient(SPEC_2_3, conv, prev, 2)
        assert not verify_quotient(SPEC_2_3, conv, prev, 0)

    def test_next_partial_quotient_search(self):
        exp = expand(SPEC_50_10, 8)
        for n in range(8):
            conv, prev = exp.pair(n)
            assert next_partial_quotient(SPEC_50_10, conv, prev) == exp.terms[n + 1].b


class TestOracleEquivalence:
    @pytest.mark.parametrize("k,m,count", [(50, 10, 3), (2, 3, 6), (2, 2, 10), (7, 3, 12)])
    def test_agreement(self, k, m, count):
        spec = validate_spec(k, m)
        assert (
            expand(spec, count).partial_quotients
            == expand_exact_oracle(spec, count).partial_quotients
        )


class TestExpansionInvariants:
    SPECS = [(2, 3), (3, 3), (11, 3), (2, 5), (50, 10), (2, 2), (99, 7)]

    @pytest.mark.parametrize("k,m", SPECS)
    def test_determinant(self, k, m):
        terms = expand(validate_spec(k, m), 20).terms
        for prev, cur in zip(terms, terms[1:]):
            assert abs(cur.p * prev.q - prev.p * cur.q) == 1

    @pytest.mark.parametrize("k,m", SPECS)
    def test_sides_alternate(self, k, m):
        terms = expand(validate_spec(k, m), 20).terms
        for prev, cur in zip(terms, terms[1:]):
            assert cur.side is not prev.side

    @pytest.mark.parametrize("k,m", SPECS)
    def test_quotients_positive(self, k, m):
        exp = expand(validate_spec(k, m), 20)
        assert all(t.b >= 1 for t in exp.terms)

    @pytest.mark.parametrize("k,m", SPECS)
    def test_universal_identity(self, k, m):
        # theta_n + q_{n-1}/q_n and 1/(q_n**2 |x_n - alpha|) enclose the
        # same value: their intervals must overlap at every precision and
        # both must shrink onto it as precision doubles.
        spec = validate_spec(k, m)
        exp = expand(spec, 12)
        widths = {}
        for bits in (128, 256):
            a_iv = alpha_interval(spec, bits)
            for n in range(1, 12):
                conv, prev = exp.pair(n)
                lhs = complete_quotient_interval(conv, prev, a_iv) + Fraction(prev.q, conv.q)
                gap = (conv.value() - a_iv) if conv.side is Side.ABOVE else (a_iv - conv.value())
                rhs = (gap * conv.q ** 2).reciprocal()
                assert lhs.intersects(rhs)
                previous = widths.get(n)
                if previous is not None:
                    assert lhs.width <= previous[0] / 2
                    assert rhs.width <= previous[1] / 2
                widths[n] = (lhs.width, rhs.width)

    @given(k=st.integers(min_value=2, max_value=400), m=st.integers(min_value=2, max_value=10))
    @settings(max_examples=25, deadline=None)
    def test_random_specs_certified(self, k, m):
        try:
            spec = validate_spec(k, m)
        except PerfectPowerError:
            return
        exp = expand(spec, 12)
        oracle = expand_exact_oracle(spec, 12)
        assert exp.partial_quotients == oracle.partial_quotients
        assert all(t.b >= 1 for t in exp.terms[1:])
