from fractions import Fraction

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from src.arith.cyclo import ExactCyclo, galois_height
from src.arith.extension import ExtElement
from src.errors import DivisionByZero, UnsupportedField

coords = st.fractions(min_value=-40, max_value=40, max_denominator=25)


class TestExactCyclo:
    def test_heights(self):
        assert galois_height(ExactCyclo.gaussian(3, 4)) == 5
        assert galois_height(ExactCyclo.eisenstein(1, 1)) == 1
        assert galois_height(ExactCyclo.rational(-3)) == 3

    def test_unsupported_polynomial(self):
        with pytest.raises(UnsupportedField):
            ExactCyclo((1, 0, 0, 1), (1, 0, 0))

    def test_inverse(self):
        assert ExactCyclo.gaussian(1, 1).invert() == ExactCyclo.gaussian(Fraction(1, 2), Fraction(-1, 2))
        with pytest.raises(DivisionByZero):
            ExactCyclo.eisenstein(0, 0).invert()

    def test_scale_drops_p(self):
        assert ExactCyclo.gaussian(Fraction(1, 6), Fraction(1, 4)).scale(3) == 4

    def test_text(self):
        assert str(ExactCyclo.gaussian(-1, 1)) == "-1 + i"
        assert str(ExactCyclo.eisenstein(0, -2)) == "-2*w"

    def test_ext_round_trip(self, q3i):
        x = ExactCyclo.gaussian(Fraction(1, 2), Fraction(-1, 2))
        assert ExactCyclo.from_ext(x.to_ext(q3i)) == x
        assert x.to_ext(q3i) == ExtElement.from_rows(q3i, [[Fraction(1, 2), Fraction(-1, 2)]])

    @given(a=coords, b=coords, c=coords, d=coords)
    def test_matches_extension_arithmetic(self, a, b, c, d, q3i):
        x, y = ExactCyclo.gaussian(a, b), ExactCyclo.gaussian(c, d)
        assert (x * y).to_ext(q3i) == x.to_ext(q3i) * y.to_ext(q3i)
        assume(not y.is_zero())
        assert (x / y).to_ext(q3i) == x.to_ext(q3i) / y.to_ext(q3i)

    @given(a=coords, b=coords)
    def test_norm_is_multiplicative_inverse(self, a, b):
        x = ExactCyclo.eisenstein(a, b)
        assume(not x.is_zero())
        assert x * x.invert() == ExactCyclo.eisenstein(1, 0)
        assert x.norm() > 0
