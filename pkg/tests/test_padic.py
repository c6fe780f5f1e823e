from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.arith.padic import (
    INFINITY,
    DigitAlphabet,
    DigitTape,
    PAdicNumber,
    RationalSource,
    add,
    digits,
    eventual_period,
    floor_p,
    floor_rational,
    resum_periodic,
    valuation,
)
from src.errors import BrowkinEvenPrime, DivisionByZero, PrecisionExhausted, PreconditionViolated

rationals = st.fractions(min_value=-1000, max_value=1000, max_denominator=200)
primes = st.sampled_from([3, 5, 7])
variants = st.sampled_from(["ruban", "browkin"])


def agrees(x: PAdicNumber, q: Fraction) -> bool:
    """x ≡ q modulo p^{x.precision}."""
    if x.is_indistinguishable_from_zero():
        return valuation(q, x.p) >= x.precision
    return valuation(x.approximant - q, x.p) >= x.precision


class TestDigits:
    def test_valuation(self):
        assert valuation(Fraction(2, 5), 5) == -1
        assert valuation(Fraction(9, 2), 3) == 2
        assert valuation(0, 7) == INFINITY

    def test_digit_examples(self, ruban5, browkin5):
        assert digits(Fraction(-1, 4), ruban5, 4).digits == (1, 1, 1, 1)
        assert digits(Fraction(1, 3), ruban5, 4).digits == (2, 3, 1, 3)
        assert digits(3, browkin5, 2).digits == (-2, 1)

    def test_alphabets(self):
        assert list(DigitAlphabet.ruban(5).digits) == [0, 1, 2, 3, 4]
        assert list(DigitAlphabet.browkin(5).digits) == [-2, -1, 0, 1, 2]
        with pytest.raises(BrowkinEvenPrime):
            DigitAlphabet.browkin(2)
        with pytest.raises(PreconditionViolated):
            DigitAlphabet.ruban(9)

    def test_upto_must_exceed_valuation(self, ruban5):
        with pytest.raises(PreconditionViolated):
            digits(25, ruban5, 2)

    def test_rational_source_normalizes(self):
        src = RationalSource(6, -4)
        assert (src.numerator, src.denominator) == (-3, 2)
        with pytest.raises(DivisionByZero):
            RationalSource(1, 0)

    def test_stream_matches_digits(self, ruban5):
        stream = RationalSource.of(Fraction(1, 3)).stream(ruban5)
        assert [next(stream)[1] for _ in range(4)] == [2, 3, 1, 3]

    def test_unit_residue(self, ruban5, browkin5):
        src = RationalSource.of(Fraction(1, 3))
        assert src.unit_residue(ruban5, 4) == 2 + 3 * 5 + 1 * 25 + 3 * 125
        assert RationalSource.of(Fraction(50, 3)).unit_residue(ruban5, 4) == 2 * 417 % 625
        assert RationalSource(0).unit_residue(ruban5, 4) == 0
        assert src.unit_residue(browkin5, 2) == -8

    @given(q=rationals, p=primes, variant=variants, k=st.integers(1, 10))
    def test_unit_residue_matches_from_rational(self, q, p, variant, k):
        assume(q != 0)
        alphabet = DigitAlphabet(variant, p)
        v = valuation(q, p)
        u = RationalSource.of(q).unit_residue(alphabet, k)
        assert valuation(q / Fraction(p) ** v - u, p) >= k
        assert PAdicNumber.from_rational(q, alphabet, v + k).unit == u

    @given(q=rationals, p=primes, variant=variants)
    def test_round_trip_modulo_precision(self, q, p, variant):
        assume(q != 0)
        alphabet = DigitAlphabet(variant, p)
        x = PAdicNumber.from_rational(q, alphabet, 12).truncate(12)
        assert agrees(x, q)
        assert all(d in alphabet.digits for d in x.digits)
        if x.digits:
            assert x.digits[0] != 0


class TestFloor:
    def test_examples(self, ruban5):
        assert floor_rational(Fraction(16, 5), ruban5) == Fraction(16, 5)
        assert floor_rational(Fraction(-1, 4), ruban5) == 1
        assert floor_rational(15, ruban5) == 0

    @given(q=rationals, p=primes, variant=variants)
    def test_floor_is_close_and_in_z_one_over_p(self, q, p, variant):
        alphabet = DigitAlphabet(variant, p)
        c = floor_rational(q, alphabet)
        assert valuation(q - c, p) >= 1
        v = valuation(q, p)
        scale = Fraction(p) ** max(0, -v) if q != 0 else 1
        assert (c * scale).denominator == 1
        if variant == "browkin":
            assert abs(c) < Fraction(p, 2) * scale

    def test_stream_floor(self, ruban5):
        x = PAdicNumber.from_rational(Fraction(16, 5), ruban5, 6).truncate(6)
        assert floor_p(x) == Fraction(16, 5)

    def test_stream_floor_needs_digit_zero(self, ruban5):
        unknown = PAdicNumber.from_digits([], ruban5, start=0)
        with pytest.raises(PrecisionExhausted):
            floor_p(unknown)


class TestArithmetic:
    @given(x=rationals, y=rationals, p=primes, variant=variants)
    def test_add_and_multiply_agree_with_rationals(self, x, y, p, variant):
        assume(x != 0 and y != 0)
        alphabet = DigitAlphabet(variant, p)
        a = PAdicNumber.from_rational(x, alphabet, 14).truncate(14)
        b = PAdicNumber.from_rational(y, alphabet, 14).truncate(14)
        assert agrees(a + b, x + y)
        assert agrees(a - b, x - y)
        assert agrees(a * b, x * y)

    @given(x=rationals, p=primes)
    def test_invert_precision(self, x, p):
        assume(x != 0)
        alphabet = DigitAlphabet.ruban(p)
        a = PAdicNumber.from_rational(x, alphabet, 14).truncate(14)
        inv = a.invert()
        assert inv.precision == 14 - 2 * valuation(x, p)
        assert agrees(inv, 1 / x)

    def test_exact_zero_has_no_inverse(self, ruban5):
        with pytest.raises(DivisionByZero):
            PAdicNumber.from_rational(0, ruban5).invert()

    def test_strict_add_refuses_cancelled_digits(self, ruban5):
        a = PAdicNumber.from_rational(Fraction(1, 3), ruban5, 5).truncate(5)
        assert (a + (-a)).is_indistinguishable_from_zero()
        with pytest.raises(PrecisionExhausted):
            add(a, -a)

    def test_indistinguishable_is_not_zero(self, ruban5):
        o = PAdicNumber.indistinguishable(ruban5, 7)
        assert not o.is_zero()
        with pytest.raises(PrecisionExhausted):
            abs(o)


class TestPeriods:
    @given(q=rationals, p=primes, variant=variants)
    def test_periods_resum(self, q, p, variant):
        alphabet = DigitAlphabet(variant, p)
        v, pre, period = eventual_period(q, alphabet)
        assert resum_periodic(v, pre, period, p) == q

    def test_minus_quarter_is_purely_periodic(self, ruban5):
        assert eventual_period(Fraction(-1, 4), ruban5) == (0, [], [1])


class TestDigitTape:
    def test_prefix_is_stable(self, ruban3):
        tape = DigitTape(ruban3, seed=11, key=(0, 0, 0))
        assert tape.digits(200)[:10] == tape.digits(11)
        assert len(tape.digits(11)) == 10

    def test_digits_in_alphabet(self, browkin5):
        tape = DigitTape(browkin5, seed=3, key=(4,))
        assert set(tape.digits(300)) <= set(browkin5.digits)

    def test_first_index_sets_valuation(self, ruban3):
        x = DigitTape(ruban3, seed=1, key=(2,)).to_padic(40)
        assert x.precision == 40
        assert x.is_indistinguishable_from_zero() or x.valuation >= 1

    def test_negative_seed_rejected(self, ruban3):
        with pytest.raises(ValueError):
            DigitTape(ruban3, seed=-1)
