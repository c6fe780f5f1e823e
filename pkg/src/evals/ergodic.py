# src/evals/ergodic.py

"""
The Gauss map T(α) = 1/α - ⌊1/α⌋ on B(0,1), Haar-uniform sampling of its
domain, and the index/window selectors the statistics average over.
"""

from dataclasses import dataclass, field
from math import ceil, isqrt
from typing import List, Optional, Sequence, Tuple, Union

from sympy import primerange

from ..config import CONFIG
from ..errors import PrecisionExhausted, PreconditionViolated
from ..arith.cyclo import ExactCyclo
from ..arith.extension import ExtElement, FieldParams, ZElement, floor, in_ball
from ..arith.padic import DigitTape
from ..expansion.cf import Status, expand
from .theory import mean_neg_valuation_limit


def gauss_map(alpha: ExtElement) -> ExtElement:
    """T(0) = 0, otherwise 1/α - ⌊1/α⌋; α must lie in B(0,1)."""
    if alpha.is_zero():
        return alpha
    if not in_ball(alpha, 0, 0):
        raise PreconditionViolated(f"✘ T is defined on B(0,1) = {{|x| < 1}}, got |α| = {abs(alpha)}")
    inverse = alpha.invert()
    return inverse - floor(inverse).ext


def orbit(alpha: ExtElement, n: int) -> ExtElement:
    """T^n α."""
    for _ in range(n):
        alpha = gauss_map(alpha)
    return alpha


# ───────────────────────────── sampling ─────────────────────────────────────

@dataclass(frozen=True)
class HaarSampler:
    """
    Uniform points of B(0,1). Sample `index` draws every coefficient b_{i,j}
    from its own tape keyed (index, i, j) with digits from position 1, so each
    coefficient lies in pZ_p and the point is Haar distributed on the ball.
    """

    params: FieldParams
    seed: int

    def tape(self, index: int, i: int, j: int) -> DigitTape:
        return DigitTape(self.params.alphabet, self.seed, (index, i, j), first_index=1)

    def sample(self, index: int, precision: int) -> ExtElement:
        grid = tuple(tuple(self.tape(index, i, j).to_padic(precision) for j in range(self.params.f))
                     for i in range(self.params.e))
        return ExtElement(self.params, grid)


def initial_precision(params: FieldParams, steps: int) -> int:
    """Digits needed to survive `steps` Gauss-map iterations on average."""
    loss = 2 * mean_neg_valuation_limit(params) + 1
    return max(CONFIG.precision.initial_digits, ceil(steps * loss) + 16)


def trajectory_quotients(source: Union[ExtElement, ExactCyclo, Tuple[HaarSampler, int]],
                         steps: int, params: Optional[FieldParams] = None) -> List[ZElement]:
    """
    c_1..c_steps of α ∈ B(0,1) (fewer if an exact α terminates). A (sampler,
    index) source is re-drawn with doubled precision until all steps are
    determined.
    """
    if steps < 0:
        raise PreconditionViolated(f"✘ steps must be non-negative, got {steps}")
    if not isinstance(source, tuple):
        exp = expand(source, steps, params)
        return exp.quotients[1:]

    sampler, index = source
    precision = initial_precision(sampler.params, steps)
    while precision <= CONFIG.precision.max_digits:
        exp = expand(sampler.sample(index, precision), steps)
        if exp.status is Status.TRUNCATED or exp.steps >= steps:
            return exp.quotients[1:steps + 1]
        precision *= 2
    raise PrecisionExhausted(
        f"✘ sample {index} needs more than {CONFIG.precision.max_digits} digits for {steps} steps")


def trajectory_job(job: Tuple[dict, int, int, int]) -> List[ZElement]:
    """Worker job: (field descriptor, seed, sample index, steps) → c_1..c_steps."""
    descriptor, seed, index, steps = job
    params = FieldParams.from_descriptor(descriptor)
    return trajectory_quotients((HaarSampler(params, seed), index), steps)


# ───────────────────────────── selectors ────────────────────────────────────

@dataclass(frozen=True)
class IndexSequence:
    """Strictly increasing positions a_1 < a_2 < … (1-based quotient indices)."""

    kind: str = "identity"
    values: Tuple[int, ...] = field(default_factory=tuple)

    def __post_init__(self):
        if self.kind not in ("identity", "squares", "primes", "custom"):
            raise PreconditionViolated(f"✘ unknown index sequence {self.kind!r}")
        if self.kind == "custom":
            if not self.values:
                raise PreconditionViolated("✘ a custom index sequence needs values")
            if self.values[0] < 1 or any(b <= a for a, b in zip(self.values, self.values[1:])):
                raise PreconditionViolated("✘ custom indices must be positive and strictly increasing")

    @classmethod
    def custom(cls, values: Sequence[int]) -> "IndexSequence":
        return cls("custom", tuple(int(v) for v in values))

    def positions(self, limit: int) -> List[int]:
        """All a_j ≤ limit."""
        if self.kind == "identity":
            return list(range(1, limit + 1))
        if self.kind == "squares":
            return [n * n for n in range(1, isqrt(max(limit, 0)) + 1)]
        if self.kind == "primes":
            return [int(q) for q in primerange(2, limit + 1)]
        return [a for a in self.values if a <= limit]

    def label(self) -> str:
        return self.kind if self.kind != "custom" else f"custom{list(self.values)}"


@dataclass(frozen=True)
class MovingWindow:
    """
    Window pairs (a_n, b_n); the window average is over positions
    a_n + 1 … a_n + b_n.
    """

    kind: str = "n,n"
    pairs: Tuple[Tuple[int, int], ...] = field(default_factory=tuple)

    PRESETS = ("n,n", "1,n", "n2,n", "custom")

    def __post_init__(self):
        if self.kind not in self.PRESETS:
            raise PreconditionViolated(f"✘ unknown moving window {self.kind!r} ({', '.join(self.PRESETS)})")
        if self.kind == "custom":
            if not self.pairs or any(a < 0 or b < 1 for a, b in self.pairs):
                raise PreconditionViolated("✘ custom window pairs need a ≥ 0 and b ≥ 1")

    def pair(self, n: int) -> Tuple[int, int]:
        if self.kind == "n,n":
            return n, n
        if self.kind == "1,n":
            return 1, n
        if self.kind == "n2,n":
            return n * n, n
        return self.pairs[n - 1]

    def windows(self, steps: int, arity: int = 1) -> List[Tuple[int, int, int]]:
        """Every (n, a_n, b_n) whose window plus arity - 1 lookahead fits in `steps`."""
        out = []
        if self.kind == "custom":
            for n, (a, b) in enumerate(self.pairs, start=1):
                if a + b + arity - 1 <= steps:
                    out.append((n, a, b))
            return out
        n = 1
        while True:
            a, b = self.pair(n)
            if a + b + arity - 1 > steps:
                return out
            out.append((n, a, b))
            n += 1

    def tail(self, steps: int, arity: int = 1) -> Tuple[int, int]:
        """The last pair whose window fits in `steps`."""
        fitting = self.windows(steps, arity)
        if not fitting:
            raise PreconditionViolated(f"✘ no {self.kind} window fits in {steps} steps")
        return fitting[-1][1:]

    def positions(self, steps: int, arity: int = 1) -> List[int]:
        a, b = self.tail(steps, arity)
        return list(range(a + 1, a + b + 1))

    def label(self) -> str:
        return self.kind if self.kind != "custom" else f"custom{[list(p) for p in self.pairs]}"
