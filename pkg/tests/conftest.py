from fractions import Fraction

import pytest
from hypothesis import settings

from src.arith.extension import make_field
from src.arith.padic import DigitAlphabet

# exact arithmetic on wide rationals is slow enough to trip the default deadline
settings.register_profile("padic", deadline=None, max_examples=60)
settings.load_profile("padic")


@pytest.fixture(scope="session")
def ruban3() -> DigitAlphabet:
    return DigitAlphabet.ruban(3)


@pytest.fixture(scope="session")
def ruban5() -> DigitAlphabet:
    return DigitAlphabet.ruban(5)


@pytest.fixture(scope="session")
def browkin5() -> DigitAlphabet:
    return DigitAlphabet.browkin(5)


@pytest.fixture(scope="session")
def q3():
    return make_field(3)


@pytest.fixture(scope="session")
def q5():
    return make_field(5)


@pytest.fixture(scope="session")
def q3i():
    """Q_3(i) with Browkin digits."""
    return make_field(3, 1, 2, variant="browkin", gamma_poly="i")


@pytest.fixture(scope="session")
def q3e2():
    """Q_3(β), β² = 1/3."""
    return make_field(3, 2, 1, Fraction(1, 3))


@pytest.fixture(scope="session")
def q5beta():
    """Q_5(β), β² = 1/15."""
    return make_field(5, 2, 1, Fraction(1, 15))
