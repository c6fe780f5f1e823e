# src/evals/theory.py

"""
Theoretical limits of the metrical statistics.

Under the invariant measure the first quotient has

    P(|c_1| = p^{n/e}) = (p^f - 1) p^{-fn},   n ≥ 1

and distinct quotient positions behave like independent draws, so every
limit is either a closed form or a series over this law. Series stop once
a certified geometric tail falls below `ergodic.series_tolerance` of the
partial sum.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..config import CONFIG
from ..errors import NotIntegrable, PreconditionViolated
from ..arith.extension import FieldParams, ZElement


# ───────────────────────────── closed forms ─────────────────────────────────

def abs_distribution(n: int, params: FieldParams) -> Fraction:
    if n < 1:
        return Fraction(0)
    return Fraction(params.q - 1, params.q ** n)


def freq_limit(z: ZElement, params: FieldParams) -> Fraction:
    """1/|z|^{2m}."""
    if not z.is_star:
        raise PreconditionViolated(f"✘ z = {z} must lie in Z* (|z| > 1)")
    return Fraction(1, params.p ** (2 * params.f * abs(z).exponent))


def mean_neg_valuation_limit(params: FieldParams) -> Fraction:
    """p^f / ((p^f - 1) e)."""
    return Fraction(params.q, (params.q - 1) * params.e)


def freq_abs_limit(mode: str, l: int, params: FieldParams, k: Optional[int] = None) -> Fraction:
    """
    eq:    P(|c| = p^{l/e})             = (p^f - 1)/p^{fl}
    ge:    P(|c| ≥ p^{l/e})             = p^{-f(l-1)}
    range: P(p^{k/e} ≤ |c| < p^{l/e})   = p^{-f(k-1)} - p^{-f(l-1)}
    """
    q = params.q
    if l < 1:
        raise PreconditionViolated(f"✘ l must be ≥ 1, got {l}")
    if mode == "eq":
        return Fraction(q - 1, q ** l)
    if mode == "ge":
        return Fraction(1, q ** (l - 1))
    if mode == "range":
        if k is None or not 1 <= k <= l:
            raise PreconditionViolated(f"✘ range mode needs 1 ≤ k ≤ l, got k={k}, l={l}")
        return Fraction(1, q ** (k - 1)) - Fraction(1, q ** (l - 1))
    raise PreconditionViolated(f"✘ unknown freq-abs mode {mode!r}")


def abs_condition(mode: str, l: int, k: Optional[int] = None) -> Callable[[int], bool]:
    """Predicate on the exponent n of |c| = p^{n/e}, matching freq_abs_limit."""
    if mode == "eq":
        return lambda n: n == l
    if mode == "ge":
        return lambda n: n >= l
    if mode == "range":
        return lambda n: k <= n < l
    raise PreconditionViolated(f"✘ unknown freq-abs mode {mode!r}")


# ───────────────────────────── transforms ───────────────────────────────────

@dataclass(frozen=True)
class Transform:
    """Monotone F used by the generalized mean, evaluated on |c| = p^{n/e}."""

    name: str
    a: float = 1.0

    @classmethod
    def parse(cls, text: str) -> "Transform":
        if text in ("log_p", "identity"):
            return cls(text)
        if text.startswith("power:"):
            try:
                a = float(text.split(":", 1)[1])
            except ValueError:
                raise PreconditionViolated(f"✘ bad power transform {text!r}")
            if a == 0:
                raise PreconditionViolated("✘ power:0 is not monotone")
            return cls("power", a)
        raise PreconditionViolated(f"✘ unknown transform {text!r} (log_p, identity, power:<a>)")

    @property
    def label(self) -> str:
        return f"power:{self.a:g}" if self.name == "power" else self.name

    def forward(self, n, params: FieldParams):
        """F(p^{n/e}) for an exponent n (works on mpf, float or numpy arrays)."""
        x = mpmath.mpf(n) / params.e if not isinstance(n, np.ndarray) else n / params.e
        if self.name == "log_p":
            return x
        if self.name == "identity":
            return params.p ** x
        return params.p ** (self.a * x)

    def inverse(self, y, p: int):
        if self.name == "log_p":
            return mpmath.power(p, y)
        if self.name == "identity":
            return mpmath.mpf(y)
        return mpmath.power(y, 1 / mpmath.mpf(self.a))

    def inverse_slope(self, y, p: int):
        """d F^{-1}/dy, for propagating standard errors."""
        if self.name == "log_p":
            return mpmath.power(p, y) * mpmath.log(p)
        if self.name == "identity":
            return mpmath.mpf(1)
        a = mpmath.mpf(self.a)
        return mpmath.power(y, 1 / a - 1) / a


# ───────────────────────────── series ───────────────────────────────────────

def certified_series(term: Callable[[int], mpmath.mpf], *, start: int = 1,
                     tolerance: Optional[float] = None,
                     max_terms: Optional[int] = None) -> mpmath.mpf:
    """
    Σ_{n ≥ start} term(n) for eventually geometric positive terms. Stops when
    the ratio bound ρ = t_{n+1}/t_n < 1 gives t_{n+1}/(1-ρ) below tolerance
    times the partial sum; a ratio ≥ 1 after the first terms raises NotIntegrable.
    """
    tolerance = CONFIG.ergodic.series_tolerance if tolerance is None else tolerance
    max_terms = max_terms or CONFIG.ergodic.series_max_terms
    total = mpmath.mpf(0)
    current = term(start)
    for n in range(start, start + max_terms):
        following = term(n + 1)
        total += current
        if current != 0:
            ratio = following / current
            if ratio >= 1 and n - start >= 16:
                raise NotIntegrable(f"✘ series terms stop shrinking (ratio {mpmath.nstr(ratio, 6)})")
            if ratio < 1:
                tail = following / (1 - ratio)
                if tail <= tolerance * abs(total):
                    return total
        elif following == 0 and total != 0 and n - start >= 16:
            return total
        current = following
    raise NotIntegrable(f"✘ series did not settle within {max_terms} terms")


def generalized_mean_limit(transform: Transform, params: FieldParams) -> Tuple[mpmath.mpf, Optional[str]]:
    """F^{-1}(Σ F(p^{n/e}) (p^f-1) p^{-fn}), after checking Σ F² (p^f-1) p^{-fn} < ∞."""
    with mpmath.workdps(CONFIG.ergodic.dps):
        weight = lambda n: mpmath.mpf(params.q - 1) / mpmath.power(params.q, n)
        certified_series(lambda n: transform.forward(n, params) ** 2 * weight(n))
        mean = certified_series(lambda n: transform.forward(n, params) * weight(n))
        value = transform.inverse(mean, params.p)
    exact = None
    if transform.name == "log_p":
        exact = f"{params.p}^({mean_neg_valuation_limit(params)})"
    return value, exact


# ───────────────────────────── window functions ─────────────────────────────

@dataclass(frozen=True)
class WindowFunction:
    """
    H(|c_1|, …, |c_k|) as a left fold over the exponents n_j of |c_j| = p^{n_j/e}:
    state ← step(state, n_j, l), then H = score(state, e).
    """

    name: str
    initial: float
    step: Callable[[np.ndarray, np.ndarray, int], np.ndarray]
    score: Callable[[np.ndarray, int], np.ndarray]

    def __call__(self, exponents: Sequence[int], e: int, l: int = 1) -> float:
        state = np.float64(self.initial)
        for n in exponents:
            state = self.step(state, np.float64(n), l)
        return float(self.score(state, e))


WINDOW_FUNCTIONS = {
    "one": WindowFunction(
        "one", 0.0,
        lambda s, n, l: s + 0 * n,
        lambda s, e: np.ones_like(s),
    ),
    "indicator": WindowFunction(
        "indicator", 1.0,
        lambda s, n, l: s * (n == l),
        lambda s, e: s,
    ),
    "log-sum": WindowFunction(
        "log-sum", 0.0,
        lambda s, n, l: s + n,
        lambda s, e: s / e,
    ),
    "log-max": WindowFunction(
        "log-max", 0.0,
        lambda s, n, l: np.maximum(s, n),
        lambda s, e: s / e,
    ),
}


def window_function(name: str) -> WindowFunction:
    try:
        return WINDOW_FUNCTIONS[name]
    except KeyError:
        raise PreconditionViolated(f"✘ unknown window function {name!r} ({', '.join(WINDOW_FUNCTIONS)})")


def _window_law(H: WindowFunction, arity: int, depth: int, params: FieldParams,
                l: int) -> Tuple[np.ndarray, np.ndarray]:
    """Distinct fold states after `arity` coordinates truncated at `depth`, with their mass."""
    n = np.arange(1, depth + 1, dtype=np.float64)
    weights = (params.q - 1) * np.power(float(params.q), -n)
    states = np.array([H.initial], dtype=np.float64)
    mass = np.ones(1)
    for _ in range(arity):
        grown = H.step(states[:, None], n[None, :], l).ravel()
        spread = (mass[:, None] * weights[None, :]).ravel()
        states, inverse = np.unique(grown, return_inverse=True)
        mass = np.bincount(inverse.ravel(), weights=spread, minlength=len(states))
    return states, mass


def window_function_limit(name: str, arity: int, params: FieldParams,
                          l: int = 1) -> Tuple[float, Optional[Fraction]]:
    """
    Σ over (n_1..n_k) ∈ N^k of H(p^{n_1/e}, …) Π (p^f-1) p^{-f n_j}, truncated
    at depth D per coordinate. NotIntegrable when the H² mass added by the
    shell at D is still above tolerance. Returns (value, exact closed form
    when known).
    """
    if arity < 1:
        raise PreconditionViolated(f"✘ arity must be ≥ 1, got {arity}")
    H = window_function(name)
    tolerance = CONFIG.ergodic.series_tolerance
    depth = int(np.ceil(np.log(1 / tolerance) / (params.f * np.log(params.p)))) + 12

    def moments(d: int) -> Tuple[float, float]:
        states, mass = _window_law(H, arity, d, params, l)
        values = H.score(states, params.e)
        return float((values * mass).sum()), float((values ** 2 * mass).sum())

    value, squares = moments(depth)
    _, inner_squares = moments(depth - 1)
    if squares - inner_squares > tolerance * max(squares, tolerance):
        raise NotIntegrable(f"✘ H² is not summable for window function {name!r}")

    exact: Optional[Fraction] = None
    if name == "one":
        exact = Fraction(1)
    elif name == "indicator":
        exact = freq_abs_limit("eq", l, params) ** arity
    elif name == "log-sum":
        exact = arity * mean_neg_valuation_limit(params)
    return value, exact


# ───────────────────────────── dispatch ─────────────────────────────────────

def theoretical_limit(stat: str, params: FieldParams, *, z: Optional[ZElement] = None,
                      l: int = 1, k: Optional[int] = None, mode: str = "eq",
                      transform: Optional[Transform] = None, h: str = "one",
                      arity: int = 1) -> Tuple[float, Optional[str]]:
    """(numeric limit, exact text) for a statistic id."""
    if stat == "freq":
        if z is None:
            raise PreconditionViolated("✘ freq needs a quotient z")
        exact = freq_limit(z, params)
        return float(exact), str(exact)
    if stat == "mean-neg-val":
        exact = mean_neg_valuation_limit(params)
        return float(exact), str(exact)
    if stat == "freq-abs":
        exact = freq_abs_limit(mode, l, params, k)
        return float(exact), str(exact)
    if stat == "gen-mean":
        value, exact_text = generalized_mean_limit(transform or Transform("log_p"), params)
        return float(value), exact_text
    if stat == "window":
        value, exact = window_function_limit(h, arity, params, l)
        return value, (str(exact) if exact is not None else None)
    raise PreconditionViolated(f"✘ no theoretical limit for statistic {stat!r}")
