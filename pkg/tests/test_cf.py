from fractions import Fraction
from functools import lru_cache

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from src.arith.cyclo import ExactCyclo
from src.arith.extension import ExtElement, ZElement, make_field
from src.arith.literals import parse_element
from src.expansion.cf import Status, approximation_error, convergents, expand, fold, iter_quotients
from src.errors import PreconditionViolated

rationals = st.fractions(min_value=-200, max_value=200, max_denominator=60)


class TestExpand:
    def test_gaussian_terminates(self, q3i):
        alpha = parse_element("(1-i)/2", q3i)
        exp = expand(alpha, 10)
        assert exp.status is Status.TERMINATED
        assert exp.steps == 1
        assert exp.quotients == [ZElement(q3i, ((-1, 1),)),
                                 ZElement(q3i, ((Fraction(1, 3), Fraction(1, 3)),))]
        assert approximation_error(alpha, exp, 0) == Fraction(1, 3)
        assert approximation_error(alpha, exp, 1) == 0

    def test_cyclotomic_input_matches(self, q3i):
        native = expand(ExactCyclo.gaussian(Fraction(1, 2), Fraction(-1, 2)), 10, q3i)
        assert native.quotients == expand(parse_element("(1-i)/2", q3i), 10).quotients
        with pytest.raises(PreconditionViolated):
            expand(ExactCyclo.gaussian(1, 1), 10)

    def test_ramified_first_quotient(self, q5beta):
        alpha = parse_element("-1/4*beta", q5beta)
        exp = expand(alpha, 0)
        assert exp.status is Status.TRUNCATED
        assert exp.quotients == [ZElement.from_ext(ExtElement.beta(q5beta))]

    def test_periodic_rational_truncates(self, q3):
        # 1/2 in Q_3: 2, 7/3, 8/3, 8/3, ...
        exp = expand(parse_element("1/2", q3), 6)
        assert exp.status is Status.TRUNCATED
        assert [str(c) for c in exp.quotients[:4]] == ["2", "7/3", "8/3", "8/3"]
        for k in range(exp.steps):
            approximation_error(parse_element("1/2", q3), exp, k)

    def test_stream_never_terminates(self, q3):
        exact = expand(parse_element("1/2", q3), 40)
        stream = expand(parse_element("1/2", q3).with_precision(30), 40)
        assert stream.status is not Status.TERMINATED
        assert stream.steps >= 3
        assert stream.quotients == exact.quotients[:len(stream.quotients)]

    def test_stream_of_terminating_value(self, q3i):
        stream = expand(parse_element("(1-i)/2", q3i).with_precision(12), 10)
        assert stream.status is Status.PRECISION_EXHAUSTED
        assert stream.indistinguishable_from_zero

    def test_negative_steps(self, q3):
        with pytest.raises(PreconditionViolated):
            expand(ExtElement.one(q3), -1)

    def test_lazy_iterator(self, q3i):
        assert len(list(iter_quotients(parse_element("(1-i)/2", q3i)))) == 2


class TestConvergents:
    @given(q=rationals)
    def test_identity_and_fold(self, q, q3):
        alpha = ExtElement.scalar(q3, q)
        exp = expand(alpha, 12)
        convergents(exp)
        if exp.status is Status.TERMINATED:
            assert fold(exp.quotients) == alpha
        else:
            assert fold(exp.quotients, exp.tail) == alpha

    @given(a=rationals, b=rationals)
    def test_gaussian_browkin_fold(self, a, b, q3i):
        alpha = ExtElement.from_rows(q3i, [[a, b]])
        exp = expand(alpha, 8)
        assume(exp.steps >= 1)
        pairs = convergents(exp)
        assert len(pairs) == exp.steps + 1
        tail = None if exp.status is Status.TERMINATED else exp.tail
        assert fold(exp.quotients, tail) == alpha

    def test_error_bound(self, q5beta):
        alpha = parse_element("1/7 + 2/3*beta", q5beta)
        exp = expand(alpha, 6)
        for k in range(exp.steps if exp.status is not Status.TERMINATED else exp.steps + 1):
            approximation_error(alpha, exp, k)


FIELDS = {
    "Q_3": dict(p=3),
    "Q_5": dict(p=5),
    "Q_3(i)": dict(p=3, f=2, variant="browkin", gamma_poly="i"),
    "Q_5(beta)": dict(p=5, e=2, r=Fraction(1, 15)),
}


@lru_cache(maxsize=None)
def field(name):
    return make_field(**FIELDS[name])


class TestIdentitySuite:
    """Convergent identities and error bounds on random exact inputs, 500 in all."""

    @pytest.mark.parametrize("name", list(FIELDS))
    @settings(max_examples=125)
    @given(data=st.data())
    def test_random_elements(self, name, data):
        params = field(name)
        cells = st.fractions(min_value=-100, max_value=100, max_denominator=50)
        rows = [[data.draw(cells) for _ in range(params.f)] for _ in range(params.e)]
        alpha = ExtElement.from_rows(params, rows)
        assume(not alpha.is_zero())
        exp = expand(alpha, 8)
        assert len(convergents(exp)) == len(exp.quotients)
        last = exp.steps + 1 if exp.status is Status.TERMINATED else exp.steps
        for k in range(last):
            approximation_error(alpha, exp, k)
        tail = None if exp.status is Status.TERMINATED else exp.tail
        assert fold(exp.quotients, tail) == alpha
