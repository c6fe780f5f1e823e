# src/arith/cyclo.py

"""
Exact arithmetic in Q, Q(i) and Q(ω) for the finiteness experiments.

For γ² + c1·γ + c0 = 0:

    conj(a + bγ) = (a - c1·b) - bγ
    N(a + bγ)    = a² - c1·ab + c0·b²

so inversion is conj / N with no linear algebra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Tuple, Union

import mpmath

from ..errors import DivisionByZero, PreconditionViolated, UnsupportedField
from .extension import AbsoluteValue, ExtElement, FieldParams, ZElement
from .gfp import EISENSTEIN_POLY, GAUSSIAN_POLY
from .padic import DigitAlphabet, floor_rational, valuation

RATIONAL_POLY = (1, 0)
SUPPORTED = {RATIONAL_POLY: "Q", tuple(GAUSSIAN_POLY): "Q(i)", tuple(EISENSTEIN_POLY): "Q(w)"}


@dataclass(frozen=True)
class ExactCyclo:
    gamma_poly: Tuple[int, ...]
    coords: Tuple[Fraction, ...]

    def __post_init__(self):
        poly = tuple(int(c) for c in self.gamma_poly)
        if poly not in SUPPORTED:
            raise UnsupportedField(f"✘ no exact cyclotomic mode for γ polynomial {list(poly)}")
        coords = tuple(Fraction(c) for c in self.coords)
        if len(coords) != len(poly) - 1:
            raise PreconditionViolated(f"✘ expected {len(poly) - 1} coordinates, got {len(coords)}")
        object.__setattr__(self, "gamma_poly", poly)
        object.__setattr__(self, "coords", coords)

    # ---------------- construction ----------------
    @classmethod
    def rational(cls, value: Union[int, Fraction]) -> "ExactCyclo":
        return cls(RATIONAL_POLY, (value,))

    @classmethod
    def gaussian(cls, a, b=0) -> "ExactCyclo":
        return cls(tuple(GAUSSIAN_POLY), (a, b))

    @classmethod
    def eisenstein(cls, a, b=0) -> "ExactCyclo":
        return cls(tuple(EISENSTEIN_POLY), (a, b))

    @classmethod
    def from_ext(cls, x: ExtElement) -> "ExactCyclo":
        params = x.params
        if params.e != 1:
            raise UnsupportedField("✘ exact cyclotomic mode needs an unramified field (e = 1)")
        return cls(params.gamma_poly, x.rationals()[0])

    def _like(self, coords) -> "ExactCyclo":
        return ExactCyclo(self.gamma_poly, tuple(coords))

    # ---------------- views ----------------
    @property
    def degree(self) -> int:
        return len(self.coords)

    @property
    def field_name(self) -> str:
        return SUPPORTED[self.gamma_poly]

    def _c(self) -> Tuple[int, int]:
        """(c1, c0) of γ² + c1γ + c0."""
        return self.gamma_poly[1], self.gamma_poly[2]

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coords)

    def is_integral(self) -> bool:
        """All coordinates in Z, i.e. the element lies in Z[γ]."""
        return all(c.denominator == 1 for c in self.coords)

    def conj(self) -> "ExactCyclo":
        if self.degree == 1:
            return self
        a, b = self.coords
        c1, _ = self._c()
        return self._like((a - c1 * b, -b))

    def norm(self) -> Fraction:
        if self.degree == 1:
            return self.coords[0] ** 2
        a, b = self.coords
        c1, c0 = self._c()
        return a * a - c1 * a * b + c0 * b * b

    def height_squared(self) -> Fraction:
        """H(x)², exact: b0² over Q, the norm over Q(i) and Q(ω)."""
        return self.norm()

    def scale(self, p: int) -> int:
        """Y_0: lcm of the coordinate denominators with every factor p removed."""
        y = 1
        for c in self.coords:
            y = math.lcm(y, c.denominator)
        while y % p == 0:
            y //= p
        return y

    def abs_value(self, p: int) -> AbsoluteValue:
        live = [valuation(c, p) for c in self.coords if c != 0]
        return AbsoluteValue(p, 1, -min(live) if live else None)

    def floor(self, alphabet: DigitAlphabet) -> "ExactCyclo":
        return self._like(floor_rational(c, alphabet) for c in self.coords)

    def to_ext(self, params: FieldParams) -> ExtElement:
        if params.gamma_poly != self.gamma_poly:
            raise PreconditionViolated(
                f"✘ {self.field_name} element does not embed with γ polynomial {list(params.gamma_poly)}")
        rows = [list(self.coords)] + [[0] * params.f for _ in range(params.e - 1)]
        return ExtElement.from_rows(params, rows)

    def to_zelement(self, params: FieldParams) -> ZElement:
        return ZElement.from_ext(self.to_ext(params))

    # ---------------- arithmetic ----------------
    def _coerce(self, other):
        if isinstance(other, ExactCyclo):
            if other.gamma_poly != self.gamma_poly:
                raise PreconditionViolated("✘ operands live in different cyclotomic fields")
            return other
        if isinstance(other, (int, Fraction)):
            return self._like((Fraction(other),) + (Fraction(0),) * (self.degree - 1))
        return None

    def __add__(self, other) -> "ExactCyclo":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self._like(a + b for a, b in zip(self.coords, other.coords))

    __radd__ = __add__

    def __neg__(self) -> "ExactCyclo":
        return self._like(-c for c in self.coords)

    def __sub__(self, other) -> "ExactCyclo":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExactCyclo":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ExactCyclo":
        if isinstance(other, (int, Fraction)):
            return self._like(c * other for c in self.coords)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if self.degree == 1:
            return self._like((self.coords[0] * other.coords[0],))
        a, b = self.coords
        c, d = other.coords
        c1, c0 = self._c()
        bd = b * d
        return self._like((a * c - c0 * bd, a * d + b * c - c1 * bd))

    __rmul__ = __mul__

    def invert(self) -> "ExactCyclo":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("✘ inverse of zero")
        return self.conj() * (1 / n)

    def __truediv__(self, other) -> "ExactCyclo":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other) -> "ExactCyclo":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __str__(self) -> str:
        if self.degree == 1:
            return str(self.coords[0])
        name = "i" if self.gamma_poly == tuple(GAUSSIAN_POLY) else "w"
        a, b = self.coords
        if b == 0:
            return str(a)
        tail = name if abs(b) == 1 else f"{abs(b)}*{name}"
        if a == 0:
            return ("-" if b < 0 else "") + tail
        return f"{a} {'-' if b < 0 else '+'} {tail}"


def galois_height(x: Union[ExactCyclo, ExtElement], dps: int = 30) -> mpmath.mpf:
    """Largest archimedean modulus over the embeddings: |b0|, √(b0²+b1²) or √(b0²-b0b1+b1²)."""
    if isinstance(x, ExtElement):
        x = ExactCyclo.from_ext(x)
    h2 = x.height_squared()
    with mpmath.workdps(dps):
        return mpmath.sqrt(mpmath.mpf(h2.numerator) / h2.denominator)
