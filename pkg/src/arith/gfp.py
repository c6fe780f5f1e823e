# src/arith/gfp.py

"""
Polynomials over GF(p) for the unramified layer L = Q_p(γ).

Two orders are used and kept apart:
  * a *minimal polynomial* is a list of integer coefficients high → low,
    monic, e.g. x²+1 → [1, 0, 1];
  * a *field element* of F_p[γ] is a list low → high of length f,
    matching the j-index of b_{i,j}.

Arithmetic is delegated to sympy's `Poly(..., modulus=p)`.
"""

from itertools import product
from typing import List, Sequence

from sympy import Poly, symbols
from sympy.polys.polyerrors import NotInvertible

from ..errors import DivisionByZero, NoIrreducibleFound, PreconditionViolated

X = symbols("x")

GAUSSIAN_POLY  = [1, 0, 1]   # x² + 1,     γ = i
EISENSTEIN_POLY = [1, 1, 1]  # x² + x + 1, γ = ω


def as_poly(coeffs: Sequence[int], p: int) -> Poly:
    """sympy polynomial over GF(p) from coefficients high → low."""
    return Poly([int(c) for c in coeffs], X, modulus=p)


def _to_list(poly: Poly, p: int, length: int) -> List[int]:
    """Coefficients low → high in {0..p-1}, zero padded to `length`."""
    coeffs = [int(c) % p for c in reversed(poly.all_coeffs())]
    coeffs += [0] * (length - len(coeffs))
    return coeffs[:length]


def is_monic(coeffs: Sequence[int]) -> bool:
    return len(coeffs) >= 2 and int(coeffs[0]) == 1


def is_irreducible(coeffs: Sequence[int], p: int) -> bool:
    if not is_monic(coeffs):
        return False
    return bool(as_poly(coeffs, p).is_irreducible)


def next_irreducible(f: int, p: int, bound: int) -> List[int]:
    """First monic irreducible of degree f in lexicographic order of the tail."""
    for tried, tail in enumerate(product(range(p), repeat=f)):
        if tried >= bound:
            break
        candidate = [1, *tail]
        if is_irreducible(candidate, p):
            return candidate
    raise NoIrreducibleFound(
        f"✘ no irreducible polynomial of degree {f} over GF({p}) within {bound} candidates")


def default_gamma_poly(p: int, f: int, bound: int) -> List[int]:
    """
    Built-in table: x for f = 1; x²+1 when p ≡ 3 mod 4 and x²+x+1 when
    p ≡ 2 mod 3 for f = 2; otherwise a searched irreducible.
    """
    if f < 1:
        raise PreconditionViolated(f"✘ residue degree f must be ≥ 1, got {f}")
    if f == 1:
        return [1, 0]
    if f == 2 and p % 4 == 3:
        return list(GAUSSIAN_POLY)
    if f == 2 and p % 3 == 2:
        return list(EISENSTEIN_POLY)
    return next_irreducible(f, p, bound)


def residue_inverse(element: Sequence[int], gamma_poly: Sequence[int], p: int) -> List[int]:
    """Inverse of Σ element[j] γ^j in F_p[γ] / (gamma_poly); low → high."""
    f = len(gamma_poly) - 1
    a = as_poly(list(reversed([int(c) for c in element])), p)
    try:
        inverse = a.invert(as_poly(gamma_poly, p))
    except NotInvertible:
        raise DivisionByZero("✘ residue is zero in the residue field")
    return _to_list(inverse, p, f)


def format_poly(coeffs: Sequence[int]) -> str:
    """x^2 + x + 1 style label for a high → low coefficient list."""
    degree = len(coeffs) - 1
    terms = []
    for k, c in enumerate(coeffs):
        c = int(c)
        if c == 0:
            continue
        power = degree - k
        mono = "" if power == 0 else ("x" if power == 1 else f"x^{power}")
        if not mono:
            body = str(abs(c))
        else:
            body = mono if abs(c) == 1 else f"{abs(c)}*{mono}"
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    head_sign, head = terms[0]
    text = ("-" if head_sign == "-" else "") + head
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
