# src/expansion/cf.py

"""
Continued fractions over K:

    c_n = ⌊α_n⌋,   α_{n+1} = (α_n - c_n)^{-1}

with convergents s_n / t_n from

    s_n = c_n s_{n-1} + s_{n-2},   s_{-1} = 1, s_{-2} = 0
    t_n = c_n t_{n-1} + t_{n-2},   t_{-1} = 0, t_{-2} = 1

Exact inputs (rational grids or ExactCyclo) can terminate; stream inputs
stop when the remainder is indistinguishable from zero and report
precision exhaustion, never termination.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterator, List, Optional, Tuple, Union

from ..config import CONFIG
from ..errors import IdentityViolated, PrecisionExhausted, PreconditionViolated
from ..arith.cyclo import ExactCyclo
from ..arith.extension import AbsoluteValue, ExtElement, FieldParams, ZElement, abs_value, floor
from ..arith.literals import format_element

Number = Union[ExtElement, ExactCyclo]


class Status(str, Enum):
    TERMINATED          = "terminated"
    TRUNCATED           = "truncated"
    PRECISION_EXHAUSTED = "precision_exhausted"


@dataclass
class CFExpansion:
    params: FieldParams
    quotients: List[ZElement]
    status: Status
    max_steps: int
    tail: Optional[Number] = None
    complete_quotients: List[Number] = field(default_factory=list)
    exact: bool = True
    precision: Optional[int] = None
    indistinguishable_from_zero: bool = False

    @property
    def steps(self) -> int:
        """Index n of the last quotient c_n."""
        return len(self.quotients) - 1

    def to_dict(self) -> dict:
        return {
            "field":      self.params.descriptor(),
            "quotients":  [z.to_json() for z in self.quotients],
            "literals":   [format_element(z) for z in self.quotients],
            "abs":        [str(abs(z)) for z in self.quotients],
            "status":     self.status.value,
            "steps":      self.steps,
            "max_steps":  self.max_steps,
            "exact":      self.exact,
            "precision":  self.precision,
            "indistinguishable_from_zero": self.indistinguishable_from_zero,
        }


# ───────────────────────────── expansion ────────────────────────────────────

def _floor(alpha: Number, params: FieldParams) -> Tuple[ZElement, Number]:
    """(c, c in the arithmetic of alpha)."""
    if isinstance(alpha, ExactCyclo):
        c = alpha.floor(params.alphabet)
        return c.to_zelement(params), c
    c = floor(alpha)
    return c, c.ext


def _field_of(alpha: Number, params: Optional[FieldParams]) -> FieldParams:
    if isinstance(alpha, ExtElement):
        if params is not None and params != alpha.params:
            raise PreconditionViolated("✘ α lives in a different field than requested")
        return alpha.params
    if params is None:
        raise PreconditionViolated("✘ cyclotomic inputs need explicit field parameters")
    if params.gamma_poly != alpha.gamma_poly or params.e != 1:
        raise PreconditionViolated("✘ cyclotomic input does not match the field parameters")
    return params


def expand(alpha: Number, max_steps: Optional[int] = None,
           params: Optional[FieldParams] = None) -> CFExpansion:
    """Partial quotients c_0..c_n of α with n ≤ max_steps."""
    params = _field_of(alpha, params)
    max_steps = CONFIG.expansion.max_steps if max_steps is None else max_steps
    if max_steps < 0:
        raise PreconditionViolated(f"✘ max_steps must be non-negative, got {max_steps}")
    exact = isinstance(alpha, ExactCyclo) or alpha.is_exact

    quotients: List[ZElement] = []
    completes: List[Number] = []
    current: Number = alpha
    for k in range(max_steps + 1):
        completes.append(current)
        try:
            c, c_native = _floor(current, params)
        except PrecisionExhausted:
            return CFExpansion(params, quotients, Status.PRECISION_EXHAUSTED, max_steps,
                               current, completes if exact else [], exact, _precision(current))
        quotients.append(c)
        remainder = current - c_native

        if remainder.is_zero():
            if not exact:
                # a stream value can only look like zero
                return CFExpansion(params, quotients, Status.PRECISION_EXHAUSTED, max_steps,
                                   None, [], exact, _precision(current), True)
            return CFExpansion(params, quotients, Status.TERMINATED, max_steps,
                               None, completes, exact)
        if not exact and remainder.is_indistinguishable_from_zero():
            return CFExpansion(params, quotients, Status.PRECISION_EXHAUSTED, max_steps,
                               None, [], exact, _precision(remainder), True)

        try:
            current = remainder.invert()
        except PrecisionExhausted:
            return CFExpansion(params, quotients, Status.PRECISION_EXHAUSTED, max_steps,
                               None, [], exact, _precision(remainder))

        if k == max_steps:
            return CFExpansion(params, quotients, Status.TRUNCATED, max_steps,
                               current, completes if exact else [], exact, _precision(current))

    raise AssertionError("unreachable")


def iter_quotients(alpha: Number, params: Optional[FieldParams] = None) -> Iterator[ZElement]:
    """Lazy c_0, c_1, …; stops on termination or when precision runs out."""
    params = _field_of(alpha, params)
    current = alpha
    exact = isinstance(alpha, ExactCyclo) or alpha.is_exact
    while True:
        try:
            c, c_native = _floor(current, params)
        except PrecisionExhausted:
            return
        yield c
        remainder = current - c_native
        if remainder.is_zero() or (not exact and remainder.is_indistinguishable_from_zero()):
            return
        try:
            current = remainder.invert()
        except PrecisionExhausted:
            return


def _precision(x: Number) -> Optional[int]:
    if isinstance(x, ExtElement) and not x.is_exact:
        return x.precision
    return None


# ───────────────────────────── convergents ──────────────────────────────────

def convergents(exp: Union[CFExpansion, List[ZElement]]) -> List[Tuple[ExtElement, ExtElement]]:
    """(s_k, t_k) for k = 0..n, checking t_k s_{k-1} - s_k t_{k-1} = (-1)^k."""
    quotients = exp.quotients if isinstance(exp, CFExpansion) else list(exp)
    if not quotients:
        raise PreconditionViolated("✘ convergents need at least one quotient")
    params = quotients[0].params
    one, zero = ExtElement.one(params), ExtElement.zero(params)
    s_prev2, s_prev = zero, one
    t_prev2, t_prev = one, zero
    out = []
    for k, c in enumerate(quotients):
        s = c.ext * s_prev + s_prev2
        t = c.ext * t_prev + t_prev2
        det = t * s_prev - s * t_prev
        if det != (-1) ** k:
            raise IdentityViolated(f"✘ t_k s_(k-1) - s_k t_(k-1) = {det} at k = {k}")
        out.append((s, t))
        s_prev2, s_prev = s_prev, s
        t_prev2, t_prev = t_prev, t
    return out


def fold(quotients: List[ZElement], tail: Optional[Number] = None) -> ExtElement:
    """[c_0; c_1, …, c_k, tail] evaluated from the right."""
    if not quotients:
        raise PreconditionViolated("✘ nothing to fold")
    params = quotients[0].params
    items = [c.ext for c in quotients]
    if tail is not None:
        items.append(tail.to_ext(params) if isinstance(tail, ExactCyclo) else tail)
    value = items[-1]
    for c in reversed(items[:-1]):
        value = c + value.invert()
    return value


def approximation_error(alpha: Number, exp: CFExpansion, k: int) -> AbsoluteValue:
    """|α - s_k/t_k|, checked against 1/(|t_k||t_{k+1}|) (0 at the terminating step)."""
    params = exp.params
    if isinstance(alpha, ExactCyclo):
        alpha = alpha.to_ext(params)
    if k < 0 or k > exp.steps:
        raise PreconditionViolated(f"✘ k must lie in 0..{exp.steps}, got {k}")
    terminal = exp.status is Status.TERMINATED and k == exp.steps
    if not terminal and k + 1 > exp.steps:
        raise PrecisionExhausted(f"✘ c_{k + 1} is not available")

    pairs = convergents(exp.quotients[:k + 2] if not terminal else exp.quotients)
    s_k, t_k = pairs[k]
    error = abs_value(alpha - s_k / t_k)
    if terminal:
        expected = AbsoluteValue(params.p, params.e, None)
    else:
        expected = AbsoluteValue(params.p, params.e, 0) / (abs_value(t_k) * abs_value(pairs[k + 1][1]))
    if error != expected:
        raise IdentityViolated(f"✘ |α - s_k/t_k| = {error}, expected {expected} at k = {k}")
    return error
