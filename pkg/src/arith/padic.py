# src/arith/padic.py

"""
p-adic numbers with explicit precision.

A PAdicNumber is stored like a floating p-adic: a valuation v, a unit
residue u with p ∤ u, and an absolute precision N, meaning

    α ≡ u · p^v   (mod p^N)

Digits a_v, …, a_{N-1} in the selected alphabet are read off u. Values
built from rationals also keep the exact rational, so they can be re-read
at any precision and tested for zero. Stream values (seeded tapes,
truncations) can only be "indistinguishable from zero at precision N",
written O(p^N).

Operators (+ - * /) return O(p^N) silently; the module-level `add`,
`negate`, `multiply` and `invert` raise PrecisionExhausted instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import cached_property
from typing import Iterator, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy import isprime

from ..errors import (
    BrowkinEvenPrime,
    DivisionByZero,
    PrecisionExhausted,
    PreconditionViolated,
)

INFINITY       = math.inf
DEFAULT_WINDOW = 8     # digits shown for exact values when no precision is asked
TAPE_BLOCK     = 64    # digits per seeded tape block

Rational = Union[int, Fraction]


class Variant(str, Enum):
    RUBAN   = "ruban"
    BROWKIN = "browkin"


@dataclass(frozen=True)
class DigitAlphabet:
    """Ruban digits {0..p-1} or Browkin digits {-(p-1)/2..(p-1)/2}."""

    variant: Variant
    p: int

    def __post_init__(self):
        object.__setattr__(self, "variant", Variant(self.variant))
        if not isprime(self.p):
            raise PreconditionViolated(f"✘ p must be prime, got {self.p}")
        if self.variant is Variant.BROWKIN and self.p == 2:
            raise BrowkinEvenPrime("✘ the Browkin alphabet needs an odd prime")

    @classmethod
    def ruban(cls, p: int) -> "DigitAlphabet":
        return cls(Variant.RUBAN, p)

    @classmethod
    def browkin(cls, p: int) -> "DigitAlphabet":
        return cls(Variant.BROWKIN, p)

    @property
    def digits(self) -> range:
        if self.variant is Variant.RUBAN:
            return range(0, self.p)
        half = (self.p - 1) // 2
        return range(-half, half + 1)

    def residue(self, x: int, k: int) -> int:
        """Canonical representative of x mod p^k; its digits are alphabet digits."""
        if k <= 0:
            return 0
        modulus = self.p ** k
        r = x % modulus
        if self.variant is Variant.BROWKIN and r > modulus // 2:
            r -= modulus
        return r

    def digit(self, x: int) -> int:
        return self.residue(x, 1)

    def expand(self, x: int, k: int) -> List[int]:
        """First k digits of the p-adic integer x."""
        out = []
        for _ in range(k):
            d = self.digit(x)
            out.append(d)
            x = (x - d) // self.p
        return out


# ───────────────────────────── helpers ──────────────────────────────────────

def _split(n: int, p: int) -> Tuple[int, int]:
    """(k, n / p^k) with p ∤ n / p^k, for nonzero n."""
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k, n


def _scaled_residue(q: Fraction, v: int, k: int, alphabet: DigitAlphabet) -> int:
    """Canonical residue of q·p^(-v) mod p^k; q·p^(-v) must be p-integral."""
    if q == 0 or k <= 0:
        return 0
    p = alphabet.p
    vn, a = _split(q.numerator, p)
    vd, b = _split(q.denominator, p)
    shift = vn - vd - v
    if shift < 0:
        raise ValueError(f"✘ {q} is not divisible by {p}^{v}")
    if shift >= k:
        return 0
    modulus = p ** k
    return alphabet.residue(a * p ** shift * pow(b, -1, modulus), k)


def valuation(r: Union[Rational, "RationalSource"], p: int) -> Union[int, float]:
    """v_p(num) - v_p(den); +∞ for zero."""
    q = r.value if isinstance(r, RationalSource) else Fraction(r)
    if q == 0:
        return INFINITY
    return _split(q.numerator, p)[0] - _split(q.denominator, p)[0]


# ───────────────────────────── sources ──────────────────────────────────────

@dataclass(frozen=True)
class RationalSource:
    numerator: int
    denominator: int = 1

    def __post_init__(self):
        if self.denominator == 0:
            raise DivisionByZero("✘ rational source with zero denominator")
        q = Fraction(self.numerator, self.denominator)
        object.__setattr__(self, "numerator", q.numerator)
        object.__setattr__(self, "denominator", q.denominator)

    @classmethod
    def of(cls, value: Rational) -> "RationalSource":
        q = Fraction(value)
        return cls(q.numerator, q.denominator)

    @property
    def value(self) -> Fraction:
        return Fraction(self.numerator, self.denominator)

    def unit_residue(self, alphabet: DigitAlphabet, k: int) -> int:
        """u = r·p^(-v) mod p^k as an alphabet residue; 0 for r = 0."""
        q = self.value
        if q == 0:
            return 0
        return _scaled_residue(q, valuation(q, alphabet.p), k, alphabet)

    def stream(self, alphabet: DigitAlphabet) -> Iterator[Tuple[int, int]]:
        """Lazy (index, digit) pairs by long division r ↦ (r - d)/p."""
        q = self.value
        if q == 0:
            return
        p = alphabet.p
        j = valuation(q, p)
        r = q / Fraction(p) ** j
        while True:
            d = alphabet.digit(r.numerator * pow(r.denominator, -1, p))
            yield j, d
            r = (r - d) / p
            j += 1


@dataclass(frozen=True)
class DigitTape:
    """
    Replayable uniform digits a_first, a_first+1, … drawn in fixed blocks of
    TAPE_BLOCK from SeedSequence([seed, *key, block]). Digit j does not
    depend on how many digits are requested.
    """

    alphabet: DigitAlphabet
    seed: int
    key: Tuple[int, ...] = ()
    first_index: int = 1

    def __post_init__(self):
        if self.seed < 0:
            raise ValueError(f"✘ tape seed must be non-negative, got {self.seed}")

    def block(self, b: int) -> np.ndarray:
        rng = np.random.default_rng(np.random.SeedSequence([self.seed, *self.key, b]))
        span = self.alphabet.digits
        return rng.integers(span.start, span.stop, size=TAPE_BLOCK)

    def digits(self, upto: int) -> List[int]:
        count  = max(0, upto - self.first_index)
        blocks = (count + TAPE_BLOCK - 1) // TAPE_BLOCK
        out: List[int] = []
        for b in range(blocks):
            out.extend(int(d) for d in self.block(b))
        return out[:count]

    def to_padic(self, precision: int) -> "PAdicNumber":
        return PAdicNumber.from_digits(self.digits(precision), self.alphabet,
                                       start=self.first_index)


# ───────────────────────────── numbers ──────────────────────────────────────

@dataclass(frozen=True, eq=False)
class PAdicNumber:
    alphabet: DigitAlphabet
    valuation: Union[int, float]
    unit: int
    precision: int
    exact: Optional[Fraction] = None

    # ---------------- construction ----------------
    @classmethod
    def from_rational(cls, value: Union[Rational, RationalSource],
                      alphabet: DigitAlphabet,
                      precision: Optional[int] = None) -> "PAdicNumber":
        source = value if isinstance(value, RationalSource) else RationalSource.of(value)
        q = source.value
        if q == 0:
            window = DEFAULT_WINDOW if precision is None else precision
            return cls(alphabet, INFINITY, 0, window, q)
        v = valuation(q, alphabet.p)
        window = v + DEFAULT_WINDOW if precision is None else precision
        return cls(alphabet, v, source.unit_residue(alphabet, window - v), window, q)

    @classmethod
    def from_digits(cls, digits: Sequence[int], alphabet: DigitAlphabet,
                    start: int = 0) -> "PAdicNumber":
        """Stream value with digits a_start, a_start+1, …; precision start + len(digits)."""
        allowed = alphabet.digits
        if any(d not in allowed for d in digits):
            raise ValueError(f"✘ digits outside the {alphabet.variant.value} alphabet")
        precision = start + len(digits)
        lead = next((t for t, d in enumerate(digits) if d != 0), None)
        if lead is None:
            return cls.indistinguishable(alphabet, precision)
        unit = 0
        for d in reversed(digits[lead:]):
            unit = unit * alphabet.p + d
        return cls(alphabet, start + lead, unit, precision)

    @classmethod
    def indistinguishable(cls, alphabet: DigitAlphabet, precision: int) -> "PAdicNumber":
        """O(p^N): every known digit is zero."""
        return cls(alphabet, precision, 0, precision)

    # ---------------- views ----------------
    @property
    def p(self) -> int:
        return self.alphabet.p

    @property
    def is_exact(self) -> bool:
        return self.exact is not None

    def is_zero(self) -> bool:
        return self.exact is not None and self.exact == 0

    def is_indistinguishable_from_zero(self) -> bool:
        return self.exact is None and self.unit == 0

    @cached_property
    def digits(self) -> Tuple[int, ...]:
        """a_v, …, a_{N-1}."""
        if self.valuation == INFINITY or self.unit == 0:
            return ()
        return tuple(self.alphabet.expand(self.unit, self.precision - self.valuation))

    @property
    def approximant(self) -> Fraction:
        """Exact value, or Σ a_j p^j over the known digits."""
        if self.exact is not None:
            return self.exact
        if self.unit == 0:
            return Fraction(0)
        return Fraction(self.unit) * Fraction(self.p) ** self.valuation

    def __abs__(self) -> Fraction:
        if self.is_zero():
            return Fraction(0)
        if self.unit == 0 and self.exact is None:
            raise PrecisionExhausted(
                f"✘ value is indistinguishable from zero at precision {self.precision}")
        return Fraction(self.p) ** (-self.valuation)

    def extend(self, precision: int) -> "PAdicNumber":
        if self.exact is not None:
            return PAdicNumber.from_rational(self.exact, self.alphabet, precision)
        return self.truncate(precision)

    def truncate(self, precision: int) -> "PAdicNumber":
        """Stream copy known modulo p^precision."""
        if self.exact is None and precision > self.precision:
            raise PrecisionExhausted(
                f"✘ only {self.precision} digits are known, {precision} requested")
        if self.exact is not None:
            q = self.exact
            v = valuation(q, self.p)
            if v >= precision:
                return PAdicNumber.indistinguishable(self.alphabet, precision)
            return PAdicNumber(self.alphabet, v,
                               _scaled_residue(q, v, precision - v, self.alphabet), precision)
        if self.unit == 0 or self.valuation >= precision:
            return PAdicNumber.indistinguishable(self.alphabet, precision)
        return PAdicNumber(self.alphabet, self.valuation,
                           self.alphabet.residue(self.unit, precision - self.valuation),
                           precision)

    # ---------------- arithmetic ----------------
    def _coerce(self, other) -> Optional["PAdicNumber"]:
        if isinstance(other, PAdicNumber):
            if other.p != self.p:
                raise PreconditionViolated(f"✘ cannot mix p={self.p} with p={other.p}")
            return other
        if isinstance(other, (int, Fraction)):
            return PAdicNumber.from_rational(other, self.alphabet)
        return None

    def _effective_precision(self) -> Union[int, float]:
        return INFINITY if self.exact is not None else self.precision

    def _residue_at(self, vmin: int, k: int) -> int:
        """R with self ≡ R·p^vmin (mod p^(vmin+k)); needs vmin ≤ valuation."""
        if k <= 0:
            return 0
        if self.exact is not None:
            return _scaled_residue(self.exact, vmin, k, self.alphabet)
        if self.unit == 0:
            return 0
        return self.unit * self.p ** (self.valuation - vmin)

    def _unit_mod(self, k: int) -> int:
        if self.exact is not None:
            return _scaled_residue(self.exact, self.valuation, k, self.alphabet)
        return self.unit

    def __neg__(self) -> "PAdicNumber":
        if self.exact is not None:
            return PAdicNumber.from_rational(-self.exact, self.alphabet, self.precision)
        if self.unit == 0:
            return self
        return PAdicNumber(self.alphabet, self.valuation,
                           self.alphabet.residue(-self.unit, self.precision - self.valuation),
                           self.precision)

    def __add__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.exact is not None and other.exact is not None:
            return PAdicNumber.from_rational(self.exact + other.exact, self.alphabet,
                                             max(self.precision, other.precision))
        N    = min(self._effective_precision(), other._effective_precision())
        vmin = min(self.valuation, other.valuation)
        if vmin >= N:
            return PAdicNumber.indistinguishable(self.alphabet, N)
        k = N - vmin
        total = self._residue_at(vmin, k) + other._residue_at(vmin, k)
        return _from_scaled(self.alphabet, total, vmin, N)

    __radd__ = __add__

    def __sub__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.is_zero() or other.is_zero():
            return PAdicNumber.from_rational(0, self.alphabet, max(self.precision, other.precision))
        if self.exact is not None and other.exact is not None:
            window = min(self.precision + other.valuation, other.precision + self.valuation)
            return PAdicNumber.from_rational(self.exact * other.exact, self.alphabet, window)
        N = min(self._effective_precision() + other.valuation,
                other._effective_precision() + self.valuation)
        v = self.valuation + other.valuation
        if self.is_indistinguishable_from_zero() or other.is_indistinguishable_from_zero() or v >= N:
            return PAdicNumber.indistinguishable(self.alphabet, N)
        k = N - v
        return _from_scaled(self.alphabet, self._unit_mod(k) * other._unit_mod(k), v, N)

    __rmul__ = __mul__

    def invert(self) -> "PAdicNumber":
        if self.exact is not None:
            if self.exact == 0:
                raise DivisionByZero("✘ inverse of zero")
            return PAdicNumber.from_rational(1 / self.exact, self.alphabet,
                                             self.precision - 2 * self.valuation)
        if self.unit == 0:
            raise PrecisionExhausted(
                f"✘ value is indistinguishable from zero at precision {self.precision}")
        k = self.precision - self.valuation
        unit = self.alphabet.residue(pow(self.unit, -1, self.p ** k), k)
        return PAdicNumber(self.alphabet, -self.valuation, unit,
                           self.precision - 2 * self.valuation)

    def __truediv__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other) -> "PAdicNumber":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __repr__(self) -> str:
        tag = ", exact" if self.exact is not None else ""
        return (f"PAdicNumber(p={self.p}, v={self.valuation}, "
                f"digits={self.digits}, N={self.precision}{tag})")


def _from_scaled(alphabet: DigitAlphabet, total: int, vmin: int, precision: int) -> PAdicNumber:
    """Stream value total·p^vmin known modulo p^precision."""
    k = precision - vmin
    if k <= 0 or total % alphabet.p ** k == 0:
        return PAdicNumber.indistinguishable(alphabet, precision)
    shift, unit = _split(total, alphabet.p)
    v = vmin + shift
    return PAdicNumber(alphabet, v, alphabet.residue(unit, precision - v), precision)


# ───────────────────────────── operations ───────────────────────────────────

def _strict(x: PAdicNumber) -> PAdicNumber:
    if x.is_indistinguishable_from_zero():
        raise PrecisionExhausted(f"✘ result has no determined digit below p^{x.precision}")
    return x


def add(a: PAdicNumber, b: PAdicNumber) -> PAdicNumber:
    return _strict(a + b)


def negate(a: PAdicNumber) -> PAdicNumber:
    return _strict(-a)


def multiply(a: PAdicNumber, b: PAdicNumber) -> PAdicNumber:
    return _strict(a * b)


def invert(a: PAdicNumber) -> PAdicNumber:
    return a.invert()


def digits(r: Union[Rational, RationalSource], alphabet: DigitAlphabet, upto: int) -> PAdicNumber:
    """Exact digits of r for indices v..upto-1."""
    q = r.value if isinstance(r, RationalSource) else Fraction(r)
    v = valuation(q, alphabet.p)
    if q != 0 and upto <= v:
        raise PreconditionViolated(f"✘ need N > v_p(r) = {v}, got N = {upto}")
    return PAdicNumber.from_rational(q, alphabet, upto)


def floor_rational(q: Rational, alphabet: DigitAlphabet) -> Fraction:
    """Σ_{j=v}^{0} a_j p^j for v ≤ 0, else 0."""
    q = Fraction(q)
    if q == 0:
        return Fraction(0)
    p = alphabet.p
    v = valuation(q, p)
    if v >= 1:
        return Fraction(0)
    return Fraction(_scaled_residue(q, v, 1 - v, alphabet), p ** (-v))


def floor_p(alpha: PAdicNumber) -> Fraction:
    if alpha.exact is not None:
        return floor_rational(alpha.exact, alpha.alphabet)
    if alpha.unit == 0 or alpha.valuation >= 1:
        if alpha.precision >= 1:
            return Fraction(0)
        raise PrecisionExhausted(
            f"✘ digits through index 0 are unknown (precision {alpha.precision})")
    if alpha.precision < 1:
        raise PrecisionExhausted(
            f"✘ digits through index 0 are unknown (precision {alpha.precision})")
    v = alpha.valuation
    return Fraction(alpha.alphabet.residue(alpha.unit, 1 - v), alpha.p ** (-v))


def eventual_period(r: Union[Rational, RationalSource],
                    alphabet: DigitAlphabet) -> Tuple[Union[int, float], List[int], List[int]]:
    """(v, preperiod, period) of the digit stream, found by a repeated division state."""
    q = r.value if isinstance(r, RationalSource) else Fraction(r)
    if q == 0:
        return INFINITY, [], [0]
    p = alphabet.p
    v = valuation(q, p)
    state = q / Fraction(p) ** v
    seen = {}
    emitted: List[int] = []
    while state not in seen:
        seen[state] = len(emitted)
        d = alphabet.digit(state.numerator * pow(state.denominator, -1, p))
        emitted.append(d)
        state = (state - d) / p
    start = seen[state]
    return v, emitted[:start], emitted[start:]


def resum_periodic(v: Union[int, float], pre: Sequence[int], period: Sequence[int], p: int) -> Fraction:
    if v == INFINITY:
        return Fraction(0)
    head  = sum(d * p ** j for j, d in enumerate(pre))
    cycle = sum(d * p ** j for j, d in enumerate(period))
    total = Fraction(head) + Fraction(cycle * p ** len(pre), 1 - p ** len(period))
    return total * Fraction(p) ** v
