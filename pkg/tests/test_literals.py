from fractions import Fraction

import pytest

from src.arith.extension import ExtElement, ZElement
from src.arith.literals import (
    format_element,
    parse_element,
    parse_quotients,
    parse_rational,
    split_top_level,
)
from src.errors import LiteralSyntaxError


class TestParse:
    def test_gaussian_literal(self, q3i):
        x = parse_element("(1-i)/2", q3i)
        assert x == ExtElement.from_rows(q3i, [[Fraction(1, 2), Fraction(-1, 2)]])

    def test_beta_literal(self, q5beta):
        x = parse_element("-1/4*beta", q5beta)
        assert x == ExtElement.from_rows(q5beta, [[0], [Fraction(-1, 4)]])
        assert parse_element("beta*beta", q5beta) == Fraction(1, 15)

    def test_caret_diagnostic(self, q3):
        with pytest.raises(LiteralSyntaxError) as info:
            parse_element("1 + $", q3)
        assert info.value.diagnostic == "1 + $\n    ^"
        assert info.value.exit_code == 2

    @pytest.mark.parametrize("source", ["i", "gamma", "1/0", "(1+2", "1 +", "betaa"])
    def test_rejected(self, source, q3):
        with pytest.raises(LiteralSyntaxError):
            parse_element(source, q3)

    def test_w_needs_eisenstein(self, q3i):
        with pytest.raises(LiteralSyntaxError):
            parse_element("w", q3i)

    def test_quotient_lists(self, q3):
        quotients = parse_quotients("1/3, (1/3)", q3)
        assert quotients == [ZElement(q3, ((Fraction(1, 3),),))] * 2
        assert parse_quotients("", q3) == []
        assert split_top_level("(1,2),3") == ["(1,2)", "3"]

    def test_rationals(self):
        assert parse_rational(" 1/15 ") == Fraction(1, 15)
        with pytest.raises(LiteralSyntaxError):
            parse_rational("x")


class TestFormat:
    @pytest.mark.parametrize("source", ["(1-i)/2", "-1 + i", "1/3 + 1/3*i", "7", "0"])
    def test_round_trip_gaussian(self, source, q3i):
        x = parse_element(source, q3i)
        assert parse_element(format_element(x), q3i) == x

    def test_round_trip_ramified(self, q5beta):
        x = parse_element("2/5 - 3*beta", q5beta)
        assert format_element(x) == "2/5 - 3*beta"
        assert parse_element(format_element(x), q5beta) == x
