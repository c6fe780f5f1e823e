from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.arith.extension import (
    AbsoluteValue,
    ExtElement,
    FieldParams,
    ZElement,
    abs_value,
    det_norm_abs,
    floor,
    in_ball,
    make_field,
)
from src.arith.padic import PAdicNumber, valuation
from src.errors import BadRamifier, BrowkinEvenPrime, PrecisionExhausted, PreconditionViolated

small = st.fractions(min_value=-50, max_value=50, max_denominator=30)


def element(params, *cells):
    grid = [list(cells[i * params.f:(i + 1) * params.f]) for i in range(params.e)]
    return ExtElement.from_rows(params, grid)


class TestMakeField:
    def test_gamma_table(self):
        assert make_field(3, 1, 2).gamma_poly == (1, 0, 1)
        assert make_field(5, 1, 2).gamma_poly == (1, 1, 1)
        assert make_field(5).gamma_poly == (1, 0)

    def test_ramified(self, q5beta):
        assert q5beta.m == 2 and q5beta.q == 5
        assert q5beta.ramifier == Fraction(1, 15)

    def test_bad_ramifier(self):
        with pytest.raises(BadRamifier):
            make_field(5, 2, 1, Fraction(1, 25))
        with pytest.raises(BadRamifier):
            make_field(5, 2, 1, 3)

    def test_browkin_two(self):
        with pytest.raises(BrowkinEvenPrime):
            make_field(2, variant="browkin")

    def test_reducible_gamma(self):
        with pytest.raises(PreconditionViolated):
            make_field(3, 1, 2, gamma_poly=[1, 0, 2])

    def test_searched_gamma_is_cubic(self):
        params = make_field(7, 1, 3)
        assert len(params.gamma_poly) == 4

    def test_descriptor_round_trip(self, q3i, q5beta):
        for params in (q3i, q5beta):
            assert FieldParams.from_descriptor(params.descriptor()) == params


class TestAbsoluteValue:
    def test_examples(self, q5beta):
        q5g = make_field(5, 1, 2)
        assert str(abs(ExtElement.beta(q5beta))) == "5^(1/2)"
        assert abs(ExtElement.gamma(q5g)) == 1
        assert abs(element(q5g, 5, Fraction(1, 5))) == 5
        assert abs(ExtElement.zero(q5g)) == 0

    def test_ordering(self):
        assert AbsoluteValue(5, 2, 1) < AbsoluteValue(5, 2, 2)
        assert AbsoluteValue(5, 2, 2) == 5
        assert float(AbsoluteValue(5, 2, 1)) == pytest.approx(5 ** 0.5)

    def test_norm_cross_check(self, q3i, q5beta):
        samples = [element(q5beta, 1, 1), element(q5beta, Fraction(1, 5), 7),
                   element(q3i, Fraction(1, 2), Fraction(-1, 2)), element(q3i, 9, Fraction(2, 3))]
        for x in samples:
            assert det_norm_abs(x) == abs_value(x)

    def test_stream_leading_term_must_be_known(self, q3):
        unknown = ExtElement(q3, ((PAdicNumber.indistinguishable(q3.alphabet, 4),),))
        with pytest.raises(PrecisionExhausted):
            abs_value(unknown)


class TestArithmetic:
    def test_examples(self, q3i, q5beta):
        one_plus_i = element(q3i, 1, 1)
        assert one_plus_i * element(q3i, 1, -1) == 2
        assert one_plus_i.invert() == element(q3i, Fraction(1, 2), Fraction(-1, 2))
        beta = ExtElement.beta(q5beta)
        assert beta * beta == Fraction(1, 15)

    @given(a=small, b=small, c=small, d=small)
    def test_field_laws(self, a, b, c, d, q3i):
        x, y = element(q3i, a, b), element(q3i, c, d)
        assert x * y == y * x
        assert x * (y + 1) == x * y + x
        assume(not x.is_zero())
        assert x * x.invert() == 1

    @given(a=small, b=small)
    def test_ramified_inverse(self, a, b, q5beta):
        x = element(q5beta, a, b)
        assume(not x.is_zero())
        assert x.invert() * x == 1

    def test_stream_inverse_agrees_with_exact(self, q5beta, q3i):
        for x in (element(q5beta, 1, 1), element(q5beta, Fraction(2, 5), 3), element(q3i, 3, 1)):
            exact = x.invert()
            stream = x.with_precision(20).invert()
            assert not stream.is_exact
            for (i, j, c), (_, _, target) in zip(stream.cells(), exact.cells()):
                if c.is_indistinguishable_from_zero():
                    assert valuation(target, x.p) >= c.precision
                else:
                    assert valuation(c.approximant - target, x.p) >= c.precision


class TestFloor:
    def test_examples(self, q3i, q5beta, q3):
        assert floor(element(q3i, Fraction(1, 2), Fraction(-1, 2))) == ZElement(q3i, ((-1, 1),))
        minus_quarter_beta = element(q5beta, 0, Fraction(-1, 4))
        assert floor(minus_quarter_beta) == ZElement.from_ext(ExtElement.beta(q5beta))
        assert floor(ExtElement.scalar(q3, 3)).is_zero()

    @given(a=small, b=small)
    def test_remainder_is_small(self, a, b, q5beta):
        x = element(q5beta, a, b)
        rest = x - floor(x).ext
        assert rest.is_zero() or abs(rest) < AbsoluteValue(5, 2, 0)

    def test_zelement_rejects_non_digit_sums(self, q3):
        with pytest.raises(PreconditionViolated):
            ZElement(q3, ((Fraction(1, 2),),))

    def test_is_star(self, q3):
        assert ZElement(q3, ((Fraction(1, 3),),)).is_star
        assert not ZElement(q3, ((2,),)).is_star


class TestBalls:
    def test_scalar_balls(self, q3):
        three = ExtElement.scalar(q3, 3)
        one = ExtElement.one(q3)
        assert in_ball(three, 0, 0)
        assert not in_ball(one, 0, 0)
        assert in_ball(one, 1, 0)

    def test_ramified_balls(self, q3e2):
        beta = ExtElement.beta(q3e2)
        # |β| = 3^{1/2}: outside B(0, 3^{1/2}), inside B(0, 3)
        assert not in_ball(beta, 0, 1)
        assert in_ball(beta, 1, 0)
        assert in_ball(ExtElement.one(q3e2), 0, 1)

    def test_bad_offset(self, q3):
        with pytest.raises(PreconditionViolated):
            in_ball(ExtElement.one(q3), 0, 1)


FIELDS = {
    "Q_3(i)": dict(p=3, f=2, variant="browkin", gamma_poly="i"),
    "Q_5(gamma)": dict(p=5, f=2),
    "Q_3(beta)": dict(p=3, e=2, r=Fraction(1, 3)),
    "Q_5(beta)": dict(p=5, e=2, r=Fraction(1, 15)),
}


@lru_cache(maxsize=None)
def field(name):
    return make_field(**FIELDS[name])


def draw_element(data, params):
    cells = [data.draw(small) for _ in range(params.e * params.f)]
    return element(params, *cells)


class TestAbsoluteValueLaws:
    @pytest.mark.parametrize("name", list(FIELDS))
    @settings(max_examples=200)
    @given(data=st.data())
    def test_norm_agrees_with_valuation(self, name, data):
        x = draw_element(data, field(name))
        assume(not x.is_zero())
        assert det_norm_abs(x) == abs_value(x)

    @pytest.mark.parametrize("name", list(FIELDS))
    @settings(max_examples=200)
    @given(data=st.data())
    def test_multiplicative_and_ultrametric(self, name, data):
        params = field(name)
        x, y = draw_element(data, params), draw_element(data, params)
        assert abs(x * y) == abs(x) * abs(y)
        total = abs(x + y)
        assert not (abs(x) < total and abs(y) < total)
