# src/evals/measure.py

"""
Exact Haar-measure combinatorics on K, normalized so μ(B(0,1)) = 1 where
B(0, ρ) = {|x| < ρ}:

    μ(B(0, p^{s+i/e}))              = p^{sm + fi}
    #{c ∈ Z* : |c| = p^{n/e}}       = p^{fn}(p^f - 1)
    Δ_{c_1..c_n}                    = B([0; c_1, …, c_n], |c_1⋯c_n|^{-2})
    μ(Δ_{c_1..c_n})                 = |c_1⋯c_n|^{-2m}

Everything here is an exact Fraction or int.
"""

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Dict, List, Optional, Sequence

import pandas as pd

from ..config import CONFIG
from ..errors import BudgetExceeded, IdentityViolated, PreconditionViolated
from ..arith.extension import AbsoluteValue, ExtElement, FieldParams, ZElement, in_ball
from ..arith.literals import format_element
from ..expansion.cf import convergents


def ball_measure(s: int, i: int, params: FieldParams) -> Fraction:
    if not 0 <= i < params.e:
        raise PreconditionViolated(f"✘ need 0 ≤ i < e, got i = {i}")
    return Fraction(params.p) ** (s * params.m + params.f * i)


def scaling_holds(s: int, params: FieldParams) -> bool:
    """μ(B(0, p^{s+1})) = p^m μ(B(0, p^s))."""
    return ball_measure(s + 1, 0, params) == params.p ** params.m * ball_measure(s, 0, params)


@dataclass(frozen=True)
class BallSpec:
    """B(center, p^{s + i/e}), open."""

    params: FieldParams
    center: ExtElement
    s: int
    i: int = 0

    def __post_init__(self):
        if not 0 <= self.i < self.params.e:
            raise PreconditionViolated(f"✘ need 0 ≤ i < e, got i = {self.i}")

    @property
    def radius(self) -> AbsoluteValue:
        return AbsoluteValue(self.params.p, self.params.e, self.s * self.params.e + self.i)

    def measure(self) -> Fraction:
        return ball_measure(self.s, self.i, self.params)

    def contains(self, x: ExtElement) -> bool:
        return in_ball(x - self.center, self.s, self.i)

    def to_dict(self) -> dict:
        return {"center": format_element(self.center), "radius": str(self.radius),
                "measure": str(self.measure())}


# ───────────────────────────── counting ─────────────────────────────────────

def count_zstar(n: int, params: FieldParams) -> int:
    if n < 1:
        raise PreconditionViolated(f"✘ Z* has no elements with |c| = p^({n}/e); need n ≥ 1")
    return params.p ** (params.f * n) * (params.q - 1)


def count_z_upto(n: int, params: FieldParams) -> int:
    """#{c ∈ Z : |c| ≤ p^{n/e}} = p^{f(n+1)} for n ≥ 0."""
    return params.p ** (params.f * (n + 1))


def digit_depth(n: int, row: int, e: int) -> int:
    """Digit positions a_0..a_D available to a row-`row` coefficient when |c| ≤ p^{n/e}."""
    return max(0, (n - row) // e + 1)


def enumerate_z(max_n: int, params: FieldParams, budget: Optional[int] = None) -> List[ZElement]:
    """All c ∈ Z with |c| ≤ p^{max_n/e}, in canonical digit order."""
    budget = budget or CONFIG.enumeration.budget
    total = count_z_upto(max_n, params)
    if total > budget:
        raise BudgetExceeded(f"✘ {total} elements exceed the enumeration budget {budget}")

    p, e, f = params.p, params.e, params.f
    digits = list(params.alphabet.digits)
    depths = [digit_depth(max_n, i, e) for i in range(e) for _ in range(f)]
    choices = [list(product(digits, repeat=d)) for d in depths]

    out = []
    for pick in product(*choices):
        cells = [sum(Fraction(a, p ** t) for t, a in enumerate(word)) for word in pick]
        grid = tuple(tuple(cells[i * f + j] for j in range(f)) for i in range(e))
        out.append(ZElement(params, grid))
    return out


def enumerate_zstar(max_n: int, params: FieldParams,
                    budget: Optional[int] = None) -> Dict[int, List[ZElement]]:
    """{n: [c ∈ Z* with |c| = p^{n/e}]} for 1 ≤ n ≤ max_n; empty for max_n < 1."""
    groups: Dict[int, List[ZElement]] = {n: [] for n in range(1, max_n + 1)}
    if max_n < 1:
        return groups
    for z in enumerate_z(max_n, params, budget):
        k = abs(z).exponent
        if k is not None and k >= 1:
            groups[k].append(z)
    return groups


def count_table(max_n: int, params: FieldParams, budget: Optional[int] = None) -> pd.DataFrame:
    groups = enumerate_zstar(max_n, params, budget)
    return pd.DataFrame({
        "n":                list(groups),
        "formula_count":    [count_zstar(n, params) for n in groups],
        "enumerated_count": [len(group) for group in groups.values()],
    })


# ───────────────────────────── cylinders ────────────────────────────────────

def _require_star(quotients: Sequence[ZElement]) -> None:
    for k, c in enumerate(quotients, start=1):
        if not c.is_star:
            raise PreconditionViolated(f"✘ c_{k} = {c} is not in Z* (|c| > 1 required)")


def _exponent_sum(quotients: Sequence[ZElement]) -> int:
    return sum(abs(c).exponent for c in quotients)


def cylinder_measure(quotients: Sequence[ZElement], params: FieldParams) -> Fraction:
    """|c_1⋯c_n|^{-2m}."""
    _require_star(quotients)
    return Fraction(params.p) ** (-2 * params.f * _exponent_sum(quotients))


@dataclass(frozen=True)
class CylinderSpec:
    params: FieldParams
    quotients: tuple

    @property
    def ball(self) -> BallSpec:
        return cylinder(self.quotients, self.params)

    def measure(self) -> Fraction:
        return cylinder_measure(self.quotients, self.params)


def cylinder(quotients: Sequence[ZElement], params: FieldParams) -> BallSpec:
    """B([0; c_1, …, c_n], |c_1⋯c_n|^{-2})."""
    _require_star(quotients)
    if not quotients:
        return BallSpec(params, ExtElement.zero(params), 0, 0)
    s_n, t_n = convergents([ZElement.zero(params), *quotients])[-1]
    s, i = divmod(-2 * _exponent_sum(quotients), params.e)
    return BallSpec(params, s_n / t_n, s, i)


def product_identity_check(c_list: Sequence[ZElement], d_list: Sequence[ZElement],
                           params: FieldParams) -> bool:
    """μ(Δ_{c‖d}) = μ(Δ_c) μ(Δ_d), exactly."""
    joined = cylinder_measure([*c_list, *d_list], params)
    return joined == cylinder_measure(c_list, params) * cylinder_measure(d_list, params)


def preservation_partial_sum(c_list: Sequence[ZElement], cutoff: int, params: FieldParams) -> Fraction:
    """
    Σ over c ∈ Z*, |c| ≤ p^{N/e} of μ(Δ_{c, c_1..c_n}), from the counts;
    equals μ(Δ_{c_1..c_n})(1 - p^{-fN}).
    """
    if cutoff < 1:
        raise PreconditionViolated(f"✘ cutoff must be ≥ 1, got {cutoff}")
    base = cylinder_measure(c_list, params)
    p, f = params.p, params.f
    total = sum(count_zstar(n, params) * Fraction(p) ** (-2 * f * n) * base
                for n in range(1, cutoff + 1))
    closed = base * (1 - Fraction(p) ** (-f * cutoff))
    if total != closed:
        raise IdentityViolated(f"✘ partial sum {total} differs from {closed}")
    return total
