from fractions import Fraction

import pytest

from src.arith.cyclo import ExactCyclo
from src.config import CONFIG
from src.arith.padic import Variant
from src.expansion.finiteness import (
    FIELDS,
    batch_jobs,
    certify_input,
    check_pairing,
    finiteness_test,
    random_inputs,
    summarize,
)
from src.errors import NonTermination, PreconditionViolated


class TestGates:
    def test_pairings(self):
        check_pairing("i", 7)
        check_pairing("w", 17)
        with pytest.raises(PreconditionViolated):
            check_pairing("i", 5)
        with pytest.raises(PreconditionViolated):
            check_pairing("w", 7)

    def test_browkin_only(self):
        alpha = ExactCyclo.gaussian(Fraction(1, 2), Fraction(-1, 2))
        with pytest.raises(PreconditionViolated):
            finiteness_test(alpha, 3, variant=Variant.RUBAN)

    def test_rational_inputs_rejected(self):
        with pytest.raises(PreconditionViolated):
            finiteness_test(ExactCyclo.rational(Fraction(1, 2)), 3)


class TestCertificates:
    def test_worked_example(self):
        cert = finiteness_test(ExactCyclo.gaussian(Fraction(1, 2), Fraction(-1, 2)), 3)
        assert cert.terminated
        assert cert.steps == 1
        assert cert.scale == 2
        assert cert.U[-1].is_zero()
        assert cert.D1 + cert.D2 < 1
        assert all(r < 1 for r in cert.height_ratios)

    @pytest.mark.parametrize("name,p", [("i", 3), ("i", 7), ("i", 11), ("w", 5), ("w", 17)])
    def test_random_inputs_terminate(self, name, p):
        for alpha in random_inputs(name, p, count=6, bound=60, seed=20240611):
            cert = finiteness_test(alpha, p)
            assert cert.terminated
            assert cert.quotients[-1].is_star or cert.steps == 0

    def test_truncated_run_is_a_candidate(self):
        alpha = ExactCyclo.gaussian(Fraction(1, 2), Fraction(-1, 2))
        with pytest.raises(NonTermination) as info:
            finiteness_test(alpha, 3, max_steps=0)
        assert info.value.exit_code == 0
        assert info.value.certificate is not None
        assert not info.value.certificate.terminated


class TestBatches:
    def test_inputs_are_reproducible(self):
        first = random_inputs("w", 5, 4, 100, seed=9)
        assert first == random_inputs("w", 5, 4, 100, seed=9)
        assert all(x.gamma_poly == FIELDS["w"] for x in first)
        assert all(x.scale(5) % 5 for x in first)

    def test_summary(self):
        inputs = random_inputs("i", 7, 3, 40, seed=1)
        records = [certify_input(job) for job in batch_jobs("i", 7, inputs, 1000, 30)]
        summary = summarize("i", 7, records)
        assert summary["count"] == 3
        assert summary["terminated"] == 3
        assert summary["candidates"] == []
        assert summary["field"] == "Q(i)"

    @pytest.mark.parametrize("name,p", [("i", 3), ("i", 7), ("i", 11), ("w", 5), ("w", 17)])
    def test_hundred_inputs_certified(self, name, p):
        inputs = random_inputs(name, p, 100, 1000, seed=31)
        jobs = batch_jobs(name, p, inputs, 10_000, CONFIG.finiteness.dps)
        summary = summarize(name, p, [certify_input(job) for job in jobs])
        assert summary["count"] == 100
        assert summary["terminated"] == 100
        assert summary["candidates"] == []
