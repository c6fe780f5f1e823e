# src/arith/extension.py

"""
Arithmetic in K = Q_p(γ, β).

    L = Q_p(γ)   unramified of degree f, γ a root of `gamma_poly`
    K = L(β)     totally ramified of degree e, β^e = r with v_p(r) = -1

An element is an e×f grid b_{i,j}, the coefficient of γ^j β^i, and

    |x| = max_{i,j} |b_{i,j}|_p · p^{i/e}

Exact elements carry Fractions; stream elements carry PAdicNumbers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, total_ordering
from itertools import combinations
from typing import Iterable, List, Optional, Sequence, Tuple, Union

from sympy import QQ
from sympy.polys.matrices import DomainMatrix

from ..config import CONFIG
from ..errors import BadRamifier, DivisionByZero, PrecisionExhausted, PreconditionViolated
from .gfp import EISENSTEIN_POLY, GAUSSIAN_POLY, default_gamma_poly, format_poly, is_irreducible, residue_inverse
from .padic import (
    INFINITY,
    DigitAlphabet,
    PAdicNumber,
    Variant,
    _scaled_residue,
    floor_p,
    floor_rational,
    valuation,
)

Scalar = Union[int, Fraction]
Coefficient = Union[Fraction, PAdicNumber]
Grid = Tuple[Tuple[Coefficient, ...], ...]

ZERO = Fraction(0)
ONE  = Fraction(1)


# ───────────────────────────── field ────────────────────────────────────────

@dataclass(frozen=True)
class FieldParams:
    p: int
    e: int
    f: int
    gamma_poly: Tuple[int, ...]
    ramifier: Fraction
    alphabet: DigitAlphabet

    @property
    def m(self) -> int:
        return self.e * self.f

    @property
    def q(self) -> int:
        return self.p ** self.f

    @property
    def variant(self) -> Variant:
        return self.alphabet.variant

    @property
    def gamma_tail(self) -> Tuple[int, ...]:
        """g_t (t < f) with γ^f = -Σ g_t γ^t."""
        return tuple(self.gamma_poly[self.f - t] for t in range(self.f))

    @property
    def gamma_name(self) -> Optional[str]:
        if self.f == 1:
            return None
        if list(self.gamma_poly) == GAUSSIAN_POLY:
            return "i"
        if list(self.gamma_poly) == EISENSTEIN_POLY:
            return "w"
        return "gamma"

    def label(self) -> str:
        parts = []
        if self.f > 1:
            parts.append(f"γ: {format_poly(self.gamma_poly)}")
        if self.e > 1:
            parts.append(f"β^{self.e} = {self.ramifier}")
        inner = "; ".join(parts)
        return f"Q_{self.p}({inner})" if inner else f"Q_{self.p}"

    def descriptor(self) -> dict:
        return {
            "p":            self.p,
            "e":            self.e,
            "f":            self.f,
            "r":            [self.ramifier.numerator, self.ramifier.denominator],
            "variant":      self.variant.value,
            "gammaMinPoly": list(self.gamma_poly),
        }

    @classmethod
    def from_descriptor(cls, data: dict) -> "FieldParams":
        num, den = data["r"]
        return make_field(data["p"], data["e"], data["f"], Fraction(num, den),
                          data["variant"], gamma_poly=list(data["gammaMinPoly"]))


def make_field(p: int, e: int = 1, f: int = 1,
               r: Optional[Scalar] = None,
               variant: Union[Variant, str] = Variant.RUBAN,
               gamma_poly: Union[None, str, Sequence[int]] = None,
               search_bound: Optional[int] = None) -> FieldParams:
    """
    Build K = Q_p(γ, β). `gamma_poly` is None (built-in table), "i", "w",
    or monic coefficients high → low. r defaults to 1/p and is ignored for e = 1.
    """
    alphabet = DigitAlphabet(Variant(variant), p)
    if e < 1 or f < 1:
        raise PreconditionViolated(f"✘ need e, f ≥ 1, got e={e}, f={f}")

    if e == 1:
        ramifier = Fraction(1, p)
    else:
        ramifier = Fraction(1, p) if r is None else Fraction(r)
        if valuation(ramifier, p) != -1:
            raise BadRamifier(f"✘ need v_p(r) = -1 for β^e = r, got r = {ramifier}")

    bound = search_bound or CONFIG.enumeration.gamma_search_bound
    if gamma_poly is None or gamma_poly == "auto":
        poly = default_gamma_poly(p, f, bound)
    elif gamma_poly == "i":
        poly = list(GAUSSIAN_POLY)
    elif gamma_poly == "w":
        poly = list(EISENSTEIN_POLY)
    else:
        poly = [int(c) for c in gamma_poly]

    if len(poly) - 1 != f:
        raise PreconditionViolated(
            f"✘ γ polynomial {format_poly(poly)} has degree {len(poly) - 1}, expected f = {f}")
    if not is_irreducible(poly, p):
        raise PreconditionViolated(f"✘ {format_poly(poly)} is not monic irreducible over GF({p})")

    return FieldParams(p, e, f, tuple(poly), ramifier, alphabet)


# ───────────────────────────── absolute value ───────────────────────────────

@total_ordering
@dataclass(frozen=True)
class AbsoluteValue:
    """p^{exponent/e}; exponent None is the absolute value of 0."""

    p: int
    e: int
    exponent: Optional[int]

    @property
    def is_zero(self) -> bool:
        return self.exponent is None

    def _key(self) -> float:
        return -math.inf if self.exponent is None else Fraction(self.exponent, self.e)

    def log_p(self) -> Fraction:
        """-𝔳, the exponent as a rational."""
        if self.exponent is None:
            raise ValueError("✘ log of |0|")
        return Fraction(self.exponent, self.e)

    def __eq__(self, other) -> bool:
        if isinstance(other, AbsoluteValue):
            return self.p == other.p and self._key() == other._key()
        if isinstance(other, (int, Fraction)):
            if other == 0:
                return self.exponent is None
            if self.exponent is None or self.exponent % self.e:
                return False
            return Fraction(self.p) ** (self.exponent // self.e) == other
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.p, self._key()))

    def __lt__(self, other) -> bool:
        if isinstance(other, AbsoluteValue):
            return self._key() < other._key()
        if isinstance(other, (int, Fraction)):
            return float(self) < other
        return NotImplemented

    def __mul__(self, other: "AbsoluteValue") -> "AbsoluteValue":
        if self.exponent is None or other.exponent is None:
            return AbsoluteValue(self.p, self.e, None)
        return AbsoluteValue(self.p, self.e, self.exponent + other.exponent)

    def __truediv__(self, other: "AbsoluteValue") -> "AbsoluteValue":
        if other.exponent is None:
            raise DivisionByZero("✘ division by |0|")
        if self.exponent is None:
            return self
        return AbsoluteValue(self.p, self.e, self.exponent - other.exponent)

    def __pow__(self, n: int) -> "AbsoluteValue":
        if self.exponent is None:
            if n <= 0:
                raise DivisionByZero("✘ non-positive power of |0|")
            return self
        return AbsoluteValue(self.p, self.e, self.exponent * n)

    def __float__(self) -> float:
        if self.exponent is None:
            return 0.0
        return float(self.p) ** (self.exponent / self.e)

    def __str__(self) -> str:
        if self.exponent is None:
            return "0"
        k = Fraction(self.exponent, self.e)
        if k.denominator == 1:
            return str(Fraction(self.p) ** k.numerator)
        return f"{self.p}^({k})"

    def to_json(self) -> Optional[str]:
        return None if self.exponent is None else str(self)


# ───────────────────────────── helpers ──────────────────────────────────────

def _is_null(c: Coefficient) -> bool:
    if isinstance(c, PAdicNumber):
        return c.is_zero()
    return c == 0


def _grid_shape_ok(params: FieldParams, grid) -> bool:
    return len(grid) == params.e and all(len(row) == params.f for row in grid)


def _multiply_grids(params: FieldParams, a: Grid, b: Grid) -> List[List[Coefficient]]:
    """Convolution in (β, γ) followed by γ^f and β^e reduction."""
    e, f = params.e, params.f
    tail = params.gamma_tail
    rows: List[List[Coefficient]] = [[ZERO] * (2 * f - 1) for _ in range(2 * e - 1)]
    for i1 in range(e):
        for j1 in range(f):
            x = a[i1][j1]
            if _is_null(x):
                continue
            for i2 in range(e):
                for j2 in range(f):
                    y = b[i2][j2]
                    if _is_null(y):
                        continue
                    rows[i1 + i2][j1 + j2] = rows[i1 + i2][j1 + j2] + x * y

    for row in rows:
        for d in range(2 * f - 2, f - 1, -1):
            c = row[d]
            if _is_null(c):
                continue
            row[d] = ZERO
            for t, g in enumerate(tail):
                if g:
                    row[d - f + t] = row[d - f + t] - c * g

    out = [row[:f] for row in rows[:e]]
    for i in range(e, 2 * e - 1):
        for j in range(f):
            c = rows[i][j]
            if not _is_null(c):
                out[i - e][j] = out[i - e][j] + c * params.ramifier
    return out


def _to_fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


# ───────────────────────────── elements ─────────────────────────────────────

@dataclass(frozen=True, eq=False)
class ExtElement:
    params: FieldParams
    coeffs: Grid

    def __post_init__(self):
        if not _grid_shape_ok(self.params, self.coeffs):
            raise PreconditionViolated(
                f"✘ coefficient grid must be {self.params.e}×{self.params.f}")
        cells = [c for row in self.coeffs for c in row]
        streamed = any(isinstance(c, PAdicNumber) and c.exact is None for c in cells)
        if streamed:
            grid = tuple(tuple(self._as_padic(c) for c in row) for row in self.coeffs)
        else:
            grid = tuple(tuple(c.exact if isinstance(c, PAdicNumber) else Fraction(c)
                               for c in row) for row in self.coeffs)
        object.__setattr__(self, "coeffs", grid)

    def _as_padic(self, c) -> PAdicNumber:
        if isinstance(c, PAdicNumber):
            return c
        return PAdicNumber.from_rational(Fraction(c), self.params.alphabet)

    # ---------------- construction ----------------
    @classmethod
    def zero(cls, params: FieldParams) -> "ExtElement":
        return cls(params, tuple(tuple(ZERO for _ in range(params.f)) for _ in range(params.e)))

    @classmethod
    def monomial(cls, params: FieldParams, i: int, j: int, value: Scalar = 1) -> "ExtElement":
        grid = [[ZERO] * params.f for _ in range(params.e)]
        grid[i][j] = Fraction(value)
        return cls(params, tuple(map(tuple, grid)))

    @classmethod
    def scalar(cls, params: FieldParams, value: Scalar) -> "ExtElement":
        return cls.monomial(params, 0, 0, value)

    @classmethod
    def one(cls, params: FieldParams) -> "ExtElement":
        return cls.scalar(params, 1)

    @classmethod
    def gamma(cls, params: FieldParams) -> "ExtElement":
        if params.f == 1:
            raise PreconditionViolated("✘ γ is only a generator when f > 1")
        return cls.monomial(params, 0, 1)

    @classmethod
    def beta(cls, params: FieldParams) -> "ExtElement":
        if params.e == 1:
            return cls.scalar(params, params.ramifier)
        return cls.monomial(params, 1, 0)

    @classmethod
    def from_rows(cls, params: FieldParams, rows: Sequence[Sequence]) -> "ExtElement":
        return cls(params, tuple(tuple(row) for row in rows))

    # ---------------- views ----------------
    @property
    def is_exact(self) -> bool:
        return isinstance(self.coeffs[0][0], Fraction)

    @property
    def p(self) -> int:
        return self.params.p

    def cells(self) -> Iterable[Tuple[int, int, Coefficient]]:
        for i, row in enumerate(self.coeffs):
            for j, c in enumerate(row):
                yield i, j, c

    @property
    def precision(self) -> Union[int, float]:
        """Smallest coefficient precision; ∞ for exact elements."""
        if self.is_exact:
            return INFINITY
        known = [c.precision for _, _, c in self.cells() if c.exact is None]
        return min(known) if known else INFINITY

    def is_zero(self) -> bool:
        if self.is_exact:
            return all(c == 0 for _, _, c in self.cells())
        return all(c.is_zero() for _, _, c in self.cells())

    def is_indistinguishable_from_zero(self) -> bool:
        if self.is_exact:
            return False
        return (not self.is_zero()) and all(
            c.is_zero() or c.is_indistinguishable_from_zero() for _, _, c in self.cells())

    def approximant(self) -> "ExtElement":
        """Exact element built from the known digits."""
        if self.is_exact:
            return self
        return ExtElement(self.params, tuple(tuple(c.approximant for c in row) for row in self.coeffs))

    def with_precision(self, precision: int) -> "ExtElement":
        """Stream copy whose coefficients are all known modulo p^precision."""
        grid = tuple(tuple(self._as_padic(c).truncate(precision) for c in row) for row in self.coeffs)
        return ExtElement(self.params, grid)

    def rationals(self) -> Tuple[Tuple[Fraction, ...], ...]:
        if not self.is_exact:
            raise PrecisionExhausted("✘ stream element has no exact coefficients")
        return self.coeffs

    def __eq__(self, other) -> bool:
        if isinstance(other, (int, Fraction)):
            other = ExtElement.scalar(self.params, other)
        if not isinstance(other, ExtElement):
            return NotImplemented
        if self.is_exact and other.is_exact:
            return self.params == other.params and self.coeffs == other.coeffs
        return self is other

    def __hash__(self) -> int:
        if self.is_exact:
            return hash((self.params, self.coeffs))
        return id(self)

    def __repr__(self) -> str:
        if self.is_exact:
            return f"ExtElement({format_grid(self.params, self.coeffs)})"
        return f"ExtElement(stream, N={self.precision})"

    __str__ = __repr__

    # ---------------- arithmetic ----------------
    def _coerce(self, other) -> Optional["ExtElement"]:
        if isinstance(other, ExtElement):
            if other.params != self.params:
                raise PreconditionViolated("✘ operands live in different fields")
            return other
        if isinstance(other, (int, Fraction)):
            return ExtElement.scalar(self.params, other)
        return None

    def __add__(self, other) -> "ExtElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        grid = tuple(tuple(a + b for a, b in zip(r1, r2)) for r1, r2 in zip(self.coeffs, other.coeffs))
        return ExtElement(self.params, grid)

    __radd__ = __add__

    def __neg__(self) -> "ExtElement":
        return ExtElement(self.params, tuple(tuple(-c for c in row) for row in self.coeffs))

    def __sub__(self, other) -> "ExtElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "ExtElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def __mul__(self, other) -> "ExtElement":
        if isinstance(other, (int, Fraction)):
            return ExtElement(self.params, tuple(tuple(c * other for c in row) for row in self.coeffs))
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        grid = _multiply_grids(self.params, self.coeffs, other.coeffs)
        return ExtElement(self.params, tuple(map(tuple, grid)))

    __rmul__ = __mul__

    def __pow__(self, n: int) -> "ExtElement":
        if n < 0:
            return self.invert() ** (-n)
        result, base = ExtElement.one(self.params), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other) -> "ExtElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.invert()

    def __rtruediv__(self, other) -> "ExtElement":
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.invert()

    def __abs__(self) -> AbsoluteValue:
        return abs_value(self)

    def invert(self) -> "ExtElement":
        if self.is_exact or self.precision == INFINITY:
            return _invert_exact(self.approximant())
        return _invert_stream(self)

    # ---------------- linear algebra ----------------
    def multiplication_matrix(self) -> DomainMatrix:
        """Matrix of y ↦ x·y on the basis γ^j β^i, index i·f + j."""
        params = self.params
        columns = []
        for i in range(params.e):
            for j in range(params.f):
                image = self * ExtElement.monomial(params, i, j)
                columns.append([c for row in image.rationals() for c in row])
        m = params.m
        rows = [[QQ(columns[col][row].numerator, columns[col][row].denominator)
                 for col in range(m)] for row in range(m)]
        return DomainMatrix(rows, (m, m), QQ)


# ───────────────────────────── partial quotients ────────────────────────────

@dataclass(frozen=True)
class ZElement:
    """
    Exact partial quotient: each coefficient is Σ_{j=0}^{k} a_j p^{-j} with
    alphabet digits, i.e. it is its own scalar floor.
    """

    params: FieldParams
    coeffs: Tuple[Tuple[Fraction, ...], ...]

    def __post_init__(self):
        if not _grid_shape_ok(self.params, self.coeffs):
            raise PreconditionViolated(
                f"✘ coefficient grid must be {self.params.e}×{self.params.f}")
        grid = tuple(tuple(Fraction(c) for c in row) for row in self.coeffs)
        for row in grid:
            for c in row:
                if floor_rational(c, self.params.alphabet) != c:
                    raise PreconditionViolated(f"✘ {c} is not a {self.params.variant.value} digit sum")
        object.__setattr__(self, "coeffs", grid)

    @classmethod
    def zero(cls, params: FieldParams) -> "ZElement":
        return cls(params, ExtElement.zero(params).coeffs)

    @classmethod
    def from_ext(cls, x: ExtElement) -> "ZElement":
        return cls(x.params, x.rationals())

    @cached_property
    def ext(self) -> ExtElement:
        return ExtElement(self.params, self.coeffs)

    def to_ext(self) -> ExtElement:
        return self.ext

    def is_zero(self) -> bool:
        return all(c == 0 for row in self.coeffs for c in row)

    def __abs__(self) -> AbsoluteValue:
        return abs_value(self.ext)

    @property
    def is_star(self) -> bool:
        """Member of Z*: |z| > 1."""
        a = abs(self)
        return a.exponent is not None and a.exponent > 0

    def neg_valuation(self) -> Fraction:
        return abs(self).log_p()

    def to_json(self) -> List[List[str]]:
        return [[str(c) for c in row] for row in self.coeffs]

    def __str__(self) -> str:
        return format_grid(self.params, self.coeffs)


# ───────────────────────────── operations ───────────────────────────────────

def abs_value(x: ExtElement) -> AbsoluteValue:
    """
    max |b_{i,j}|_p p^{i/e}. For stream elements every unknown coefficient
    must be bounded by the certified leading term.
    """
    params = x.params
    best: Optional[int] = None
    ceilings: List[int] = []
    for i, _, c in x.cells():
        if isinstance(c, Fraction):
            if c == 0:
                continue
            k = -valuation(c, params.p) * params.e + i
        elif c.is_zero():
            continue
        elif c.is_indistinguishable_from_zero():
            ceilings.append(-c.precision * params.e + i)
            continue
        else:
            k = -c.valuation * params.e + i
        best = k if best is None else max(best, k)
    if best is None and not ceilings:
        return AbsoluteValue(params.p, params.e, None)
    if best is None or any(ceiling > best for ceiling in ceilings):
        raise PrecisionExhausted(
            f"✘ leading term of |x| is undetermined at precision {x.precision}")
    return AbsoluteValue(params.p, params.e, best)


def det_norm_abs(x: ExtElement) -> AbsoluteValue:
    """|det M_x|_p^{1/m}, the norm-map absolute value of an exact element."""
    params = x.params
    if x.is_zero():
        return AbsoluteValue(params.p, params.e, None)
    det = _to_fraction(x.multiplication_matrix().det())
    v = valuation(det, params.p)
    if v % params.f:
        raise ArithmeticError(f"✘ v_p(det) = {v} is not divisible by f = {params.f}")
    return AbsoluteValue(params.p, params.e, -v // params.f)


def _invert_exact(x: ExtElement) -> ExtElement:
    if x.is_zero():
        raise DivisionByZero("✘ inverse of zero")
    params = x.params
    inverse = x.multiplication_matrix().inv().to_list()
    column = [_to_fraction(inverse[k][0]) for k in range(params.m)]
    grid = tuple(tuple(column[i * params.f + j] for j in range(params.f)) for i in range(params.e))
    return ExtElement(params, grid)


def _truncate_integral(y: ExtElement, digits: int) -> ExtElement:
    """Reduce each p-integral coefficient of y to its canonical residue mod p^digits."""
    alphabet = y.params.alphabet
    grid = tuple(tuple(Fraction(_scaled_residue(c, 0, digits, alphabet)) for c in row)
                 for row in y.rationals())
    return ExtElement(y.params, grid)


def _invert_stream(x: ExtElement) -> ExtElement:
    """
    Newton lifting y ← y(2 - u y) on the unit u = x·β^{-k}, |x| = p^{k/e},
    from the residue-field inverse of u. The result is known to
    N + ⌈(2k - e + 1)/e⌉ digits per coefficient.
    """
    params = x.params
    p, e = params.p, params.e
    N = x.precision
    k = abs_value(x).exponent
    if k is None:
        raise DivisionByZero("✘ inverse of zero")
    target = N + -((-(2 * k - e + 1)) // e)

    if params.m == 1:
        return ExtElement(params, ((x.coeffs[0][0].invert(),),))

    q, s = divmod(-k, e)
    shift = ExtElement.scalar(params, params.ramifier ** q) * ExtElement.beta(params) ** s
    u = x.approximant() * shift

    row0 = [_scaled_residue(c, 0, 1, params.alphabet) for c in u.rationals()[0]]
    y = ExtElement.from_rows(params, [residue_inverse(row0, params.gamma_poly, p)]
                             + [[0] * params.f for _ in range(e - 1)])

    W = target + abs(k) + 2
    for _ in range(CONFIG.precision.newton_max_iterations):
        error = ExtElement.one(params) - u * y
        size = abs_value(error)
        if size.exponent is None or size.exponent <= -W * e:
            break
        y = _truncate_integral(y * (ExtElement.one(params) + error), W + 1)
    else:
        raise PrecisionExhausted("✘ Newton inversion did not converge")

    result = y * shift
    grid = tuple(tuple(PAdicNumber.from_rational(c, params.alphabet, target).truncate(target)
                       for c in row) for row in result.rationals())
    return ExtElement(params, grid)


def floor(x: ExtElement) -> ZElement:
    """Coefficient-wise ⌊·⌋_p; |x - ⌊x⌋| ≤ p^{-1/e}."""
    params = x.params
    if x.is_exact:
        grid = tuple(tuple(floor_rational(c, params.alphabet) for c in row) for row in x.coeffs)
    else:
        grid = tuple(tuple(floor_p(c) for c in row) for row in x.coeffs)
    return ZElement(params, grid)


def in_ball(x: ExtElement, s: int, i: int = 0) -> bool:
    """
    x ∈ B(0, p^{s+i/e}) = {|x| < p^{s+i/e}}, tested coefficient-wise:
    b_{i',j} ∈ p^{⌊(i'-t)/e⌋+1} Z_p with t = s·e + i.
    """
    params = x.params
    if not 0 <= i < params.e:
        raise PreconditionViolated(f"✘ need 0 ≤ i < e, got i = {i}")
    t = s * params.e + i
    for row, _, c in x.cells():
        need = (row - t) // params.e + 1
        if isinstance(c, Fraction):
            if c != 0 and valuation(c, params.p) < need:
                return False
            continue
        if c.is_zero():
            continue
        if c.is_indistinguishable_from_zero():
            if c.precision < need:
                raise PrecisionExhausted(f"✘ coefficient known only to p^{c.precision}")
            continue
        if c.valuation < need:
            return False
    return True


def min_pairwise_distance(elements: Sequence[Union[ZElement, ExtElement]]) -> Optional[AbsoluteValue]:
    """Smallest |a - b| over distinct pairs; None for fewer than two elements."""
    exts = [z.ext if isinstance(z, ZElement) else z for z in elements]
    best: Optional[AbsoluteValue] = None
    for a, b in combinations(exts, 2):
        d = abs_value(a - b)
        if best is None or d < best:
            best = d
    return best


# ───────────────────────────── text form ────────────────────────────────────

def _monomial(params: FieldParams, i: int, j: int) -> str:
    gamma = params.gamma_name or "gamma"
    parts = [gamma] * j + ["beta"] * i
    return "*".join(parts)


def format_grid(params: FieldParams, grid: Sequence[Sequence[Fraction]]) -> str:
    """Literal text that parses back to the same element, e.g. `-1 + i`."""
    terms = []
    for i, row in enumerate(grid):
        for j, c in enumerate(row):
            c = Fraction(c)
            if c == 0:
                continue
            mono = _monomial(params, i, j)
            size = abs(c)
            if not mono:
                body = str(size)
            elif size == 1:
                body = mono
            else:
                body = f"{size}*{mono}"
            terms.append(("-" if c < 0 else "+", body))
    if not terms:
        return "0"
    sign, body = terms[0]
    text = ("-" if sign == "-" else "") + body
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
