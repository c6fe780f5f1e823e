from fractions import Fraction

import mpmath
import pytest

from src.arith.extension import ZElement
from src.evals.theory import (
    Transform,
    abs_condition,
    abs_distribution,
    certified_series,
    freq_abs_limit,
    freq_limit,
    generalized_mean_limit,
    mean_neg_valuation_limit,
    theoretical_limit,
    window_function,
    window_function_limit,
)
from src.errors import NotIntegrable, PreconditionViolated


class TestClosedForms:
    def test_distribution_sums_to_one(self, q3i):
        assert abs_distribution(0, q3i) == 0
        assert sum(abs_distribution(n, q3i) for n in range(1, 40)) == pytest.approx(1.0)

    def test_mean_neg_valuation(self, q3, q3i, q3e2, q5):
        assert mean_neg_valuation_limit(q3) == Fraction(3, 2)
        assert mean_neg_valuation_limit(q3i) == Fraction(9, 8)
        assert mean_neg_valuation_limit(q3e2) == Fraction(3, 4)
        assert mean_neg_valuation_limit(q5) == Fraction(5, 4)

    def test_quotient_frequency(self, q3):
        assert freq_limit(ZElement(q3, ((Fraction(1, 3),),)), q3) == Fraction(1, 9)
        assert freq_limit(ZElement(q3, ((Fraction(5, 9),),)), q3) == Fraction(1, 81)
        with pytest.raises(PreconditionViolated):
            freq_limit(ZElement(q3, ((1,),)), q3)

    def test_abs_frequencies(self, q3, q5):
        assert freq_abs_limit("eq", 1, q3) == Fraction(2, 3)
        assert freq_abs_limit("eq", 2, q5) == Fraction(4, 25)
        assert freq_abs_limit("ge", 2, q3) == Fraction(1, 3)
        assert freq_abs_limit("range", 3, q3, k=1) == Fraction(8, 9)
        with pytest.raises(PreconditionViolated):
            freq_abs_limit("range", 3, q3, k=4)
        with pytest.raises(PreconditionViolated):
            freq_abs_limit("eq", 0, q3)

    def test_abs_condition_matches_modes(self):
        assert [n for n in range(1, 6) if abs_condition("eq", 2)(n)] == [2]
        assert [n for n in range(1, 6) if abs_condition("ge", 4)(n)] == [4, 5]
        assert [n for n in range(1, 6) if abs_condition("range", 4, 2)(n)] == [2, 3]


class TestTransforms:
    def test_parse(self):
        assert Transform.parse("log_p") == Transform("log_p")
        assert Transform.parse("power:0.25").a == 0.25
        assert Transform.parse("power:0.25").label == "power:0.25"

    @pytest.mark.parametrize("text", ["power:0", "power:x", "cube"])
    def test_parse_errors(self, text):
        with pytest.raises(PreconditionViolated):
            Transform.parse(text)

    def test_inverse_undoes_forward(self, q3e2):
        for t in (Transform("log_p"), Transform("identity"), Transform("power", 0.5)):
            y = t.forward(3, q3e2)
            assert float(t.inverse(y, q3e2.p)) == pytest.approx(3 ** 1.5)


class TestSeries:
    def test_geometric(self):
        total = certified_series(lambda n: mpmath.mpf(2) ** -n, tolerance=1e-15)
        assert float(total) == pytest.approx(1.0, rel=1e-12)

    def test_constant_terms_diverge(self):
        with pytest.raises(NotIntegrable):
            certified_series(lambda n: mpmath.mpf(1))

    def test_log_mean(self, q3):
        value, exact = generalized_mean_limit(Transform("log_p"), q3)
        assert float(value) == pytest.approx(3 ** 1.5)
        assert exact == "3^(3/2)"

    def test_power_mean(self, q3):
        r = 3 ** -0.75
        value, exact = generalized_mean_limit(Transform("power", 0.25), q3)
        assert float(value) == pytest.approx((2 * r / (1 - r)) ** 4)
        assert exact is None

    @pytest.mark.parametrize("transform", [Transform("identity"), Transform("power", 0.5)])
    def test_square_not_integrable(self, transform, q3):
        with pytest.raises(NotIntegrable):
            generalized_mean_limit(transform, q3)

    def test_identity_over_gaussian_field(self, q3i):
        with pytest.raises(NotIntegrable):
            generalized_mean_limit(Transform("identity"), q3i)


class TestWindowFunctions:
    def test_indicator_pair(self, q3):
        value, exact = window_function_limit("indicator", 2, q3)
        assert exact == Fraction(4, 9)
        assert value == pytest.approx(4 / 9)

    def test_one_and_log_sum(self, q3, q3i):
        assert window_function_limit("one", 3, q3)[0] == pytest.approx(1.0)
        value, exact = window_function_limit("log-sum", 2, q3i)
        assert exact == Fraction(9, 4)
        assert value == pytest.approx(2.25)

    def test_log_max_has_no_closed_form(self, q3):
        value, exact = window_function_limit("log-max", 2, q3)
        assert exact is None
        assert value == pytest.approx(1.875)

    def test_high_arity(self, q3):
        value, exact = window_function_limit("indicator", 4, q3)
        assert exact == Fraction(16, 81)
        assert value == pytest.approx(16 / 81)
        value, exact = window_function_limit("log-sum", 5, q3)
        assert exact == Fraction(15, 2)
        assert value == pytest.approx(7.5)

    def test_fold_on_a_window(self):
        assert window_function("log-max")([1, 4, 2], 2) == 2.0
        assert window_function("log-sum")([1, 4, 2], 2) == 3.5
        assert window_function("indicator")([1, 1, 2], 1, l=1) == 0.0
        assert window_function("indicator")([2, 2], 1, l=2) == 1.0
        assert window_function("one")([5], 1) == 1.0

    def test_bad_arguments(self, q3):
        with pytest.raises(PreconditionViolated):
            window_function_limit("one", 0, q3)
        with pytest.raises(PreconditionViolated):
            window_function_limit("median", 1, q3)


class TestDispatch:
    def test_exact_texts(self, q3, q3i):
        assert theoretical_limit("mean-neg-val", q3i) == (1.125, "9/8")
        assert theoretical_limit("freq-abs", q3, l=3, k=1, mode="range")[1] == "8/9"
        assert theoretical_limit("window", q3, h="indicator", arity=2)[1] == "4/9"
        assert theoretical_limit("gen-mean", q3)[1] == "3^(3/2)"

    def test_unknown(self, q3):
        with pytest.raises(PreconditionViolated):
            theoretical_limit("median", q3)
        with pytest.raises(PreconditionViolated):
            theoretical_limit("freq", q3)
