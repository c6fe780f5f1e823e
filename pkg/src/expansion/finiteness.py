# src/expansion/finiteness.py

"""
Finiteness certificates over Q(i) and Q(ω) with Browkin digits.

For α = X_0 / Y_0 (p ∤ Y_0) the expansion is followed through

    U_k = s_k - α t_k,   Y_k = Y_0 U_k,   T_k = H(Y_k) / p^k

with Y_{-1} = Y_0, Y_{-2} = -Y_0 α. Every step checks

    H(c_k) < p/√2  (Q(i))      or  p√3/2  (Q(ω))     exactly, on H²
    Y_k = c_k Y_{k-1} + Y_{k-2}
    Y_k / p^k ∈ Z[γ]
    T_k < D_1 T_{k-1} + D_2 T_{k-2},   D_1 = bound/p,  D_2 = 1/p²

and U_k against the complete quotients, U_k = (-1)^{k+1} Π_{j≤k+1} α_j^{-1}.
"""

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

import mpmath
import numpy as np

from ..config import CONFIG
from ..errors import IdentityViolated, NonTermination, PreconditionViolated
from ..arith.cyclo import ExactCyclo, galois_height
from ..arith.extension import AbsoluteValue, FieldParams, ZElement, make_field
from ..arith.gfp import EISENSTEIN_POLY, GAUSSIAN_POLY
from ..arith.padic import Variant
from .cf import Status, expand

FIELDS = {"i": tuple(GAUSSIAN_POLY), "w": tuple(EISENSTEIN_POLY)}


@dataclass
class FinitenessCertificate:
    alpha: ExactCyclo
    params: FieldParams
    quotients: List[ZElement]
    U: List[ExactCyclo]                  # U_{-2}, U_{-1}, U_0, …
    Y: List[ExactCyclo]                  # Y_{-2}, Y_{-1}, Y_0, …
    T: List[mpmath.mpf]                  # T_{-2}, T_{-1}, T_0, …
    bound: mpmath.mpf
    D1: mpmath.mpf
    D2: mpmath.mpf
    delta: mpmath.mpf
    scale: int
    terminated: bool = True
    height_ratios: List[float] = field(default_factory=list)

    @property
    def steps(self) -> int:
        return len(self.quotients) - 1

    def to_dict(self) -> dict:
        return {
            "alpha":         str(self.alpha),
            "field":         self.params.descriptor(),
            "steps":         self.steps,
            "terminated":    self.terminated,
            "Y0":            self.scale,
            "bound":         mpmath.nstr(self.bound, 15),
            "D1":            mpmath.nstr(self.D1, 15),
            "D2":            mpmath.nstr(self.D2, 15),
            "delta":         mpmath.nstr(self.delta, 15),
            "heights":       [mpmath.nstr(t, 15) for t in self.T[2:]],
            "max_height_ratio": max(self.height_ratios, default=0.0),
        }


# ───────────────────────────── gates ────────────────────────────────────────

def field_name(alpha: ExactCyclo) -> str:
    for name, poly in FIELDS.items():
        if alpha.gamma_poly == poly:
            return name
    raise PreconditionViolated("✘ finiteness runs over Q(i) or Q(ω) only")


def check_pairing(name: str, p: int) -> None:
    if name == "i" and p % 4 != 3:
        raise PreconditionViolated(f"✘ Q(i) needs p ≡ 3 mod 4, got p = {p} ≡ {p % 4} mod 4")
    if name == "w" and p % 12 != 5:
        raise PreconditionViolated(f"✘ Q(ω) needs p ≡ 5 mod 12, got p = {p} ≡ {p % 12} mod 12")


def finiteness_params(name: str, p: int) -> FieldParams:
    check_pairing(name, p)
    return make_field(p, 1, 2, variant=Variant.BROWKIN, gamma_poly=name)


def _height_bound_ok(c: ExactCyclo, name: str, p: int) -> bool:
    h2 = c.height_squared()
    if name == "i":
        return 2 * h2 < p * p
    return 4 * h2 < 3 * p * p


# ───────────────────────────── certificate ──────────────────────────────────

def finiteness_test(alpha: ExactCyclo, p: int, max_steps: Optional[int] = None,
                    variant: Variant = Variant.BROWKIN, dps: Optional[int] = None) -> FinitenessCertificate:
    name = field_name(alpha)
    if Variant(variant) is not Variant.BROWKIN:
        raise PreconditionViolated("✘ finiteness certificates need the Browkin alphabet")
    params = finiteness_params(name, p)
    max_steps = CONFIG.expansion.max_steps if max_steps is None else max_steps
    dps = dps or CONFIG.finiteness.dps

    exp = expand(alpha, max_steps, params)

    with mpmath.workdps(dps):
        root = mpmath.sqrt(2) if name == "i" else 2 / mpmath.sqrt(3)
        bound = mpmath.mpf(p) / root
        delta = p - mpmath.mpf(1) / p - bound
        D1 = (p - mpmath.mpf(1) / p - delta) / p
        D2 = mpmath.mpf(1) / (p * p)

        Y0 = alpha.scale(p)
        U = [-alpha, ExactCyclo(alpha.gamma_poly, (1, 0))]
        Y = [u * Y0 for u in U]
        T = [galois_height(Y[0], dps) * p * p, galois_height(Y[1], dps) * p]
        ratios: List[float] = []
        product = ExactCyclo(alpha.gamma_poly, (1, 0))

        for k, z in enumerate(exp.quotients):
            c = ExactCyclo.from_ext(z.ext)
            if not _height_bound_ok(c, name, p):
                raise IdentityViolated(f"✘ H(c_{k})² = {c.height_squared()} breaks the height bound")
            ratios.append(float(galois_height(c, dps) / bound))

            u = c * U[-1] + U[-2]
            y = c * Y[-1] + Y[-2]
            if y != u * Y0:
                raise IdentityViolated(f"✘ Y_{k} ≠ Y_0 U_{k}")
            if k >= 0 and not (y * Fraction(1, p ** k)).is_integral():
                raise IdentityViolated(f"✘ Y_{k} / p^{k} = {y * Fraction(1, p ** k)} is not in Z[γ]")

            t = galois_height(y, dps) / mpmath.mpf(p) ** k
            if not y.is_zero() and not t < D1 * T[-1] + D2 * T[-2]:
                raise IdentityViolated(f"✘ contraction fails at k = {k}: T = {mpmath.nstr(t, 20)}")

            if k < exp.steps:
                product = product * exp.complete_quotients[k + 1].invert()
                expected = product * (-1) ** (k + 1)
                if u != expected:
                    raise IdentityViolated(f"✘ U_{k} differs from the complete-quotient product")
                size = u.abs_value(p)
                shrink = AbsoluteValue(p, 1, 0)
                for zj in exp.quotients[1:k + 2]:
                    shrink = shrink / abs(zj)
                if size != shrink:
                    raise IdentityViolated(f"✘ |U_{k}| = {size}, expected {shrink}")

            U.append(u)
            Y.append(y)
            T.append(t)

    cert = FinitenessCertificate(alpha, params, exp.quotients, U, Y, T, bound, D1, D2, delta, Y0,
                                 exp.status is Status.TERMINATED, ratios)
    if exp.status is not Status.TERMINATED:
        raise NonTermination(
            f"✘ {alpha} did not terminate within {max_steps} steps (candidate for review)", cert)
    if not U[-1].is_zero():
        raise IdentityViolated("✘ U_n ≠ 0 at the terminating step")
    return cert


# ───────────────────────────── batches ──────────────────────────────────────

def random_inputs(name: str, p: int, count: int, bound: int, seed: int) -> List[ExactCyclo]:
    """(a + bγ)/c with |a|, |b| ≤ bound, 1 ≤ c ≤ bound and p ∤ c, from a seeded generator."""
    rng = np.random.default_rng(np.random.SeedSequence([seed, p, ord(name)]))
    poly = FIELDS[name]
    out = []
    while len(out) < count:
        a, b = (int(v) for v in rng.integers(-bound, bound + 1, size=2))
        c = int(rng.integers(1, bound + 1))
        if c % p == 0:
            continue
        out.append(ExactCyclo(poly, (Fraction(a, c), Fraction(b, c))))
    return out


def certify_input(job: Tuple[str, int, Tuple[str, str], int, int]) -> Dict:
    """Worker job: one certificate, reduced to a plain record."""
    name, p, coords, max_steps, dps = job
    alpha = ExactCyclo(FIELDS[name], tuple(Fraction(c) for c in coords))
    try:
        cert = finiteness_test(alpha, p, max_steps, dps=dps)
    except NonTermination as exc:
        partial = exc.certificate
        return {"alpha": str(alpha), "terminated": False,
                "steps": partial.steps if partial else None, "max_height_ratio": None}
    return {"alpha": str(alpha), "terminated": True, "steps": cert.steps,
            "max_height_ratio": max(cert.height_ratios, default=0.0)}


def batch_jobs(name: str, p: int, inputs: Sequence[ExactCyclo], max_steps: int, dps: int) -> List[tuple]:
    return [(name, p, tuple(str(c) for c in x.coords), max_steps, dps) for x in inputs]


def summarize(name: str, p: int, records: Sequence[Dict]) -> Dict:
    done = [r for r in records if r["terminated"]]
    steps = [r["steps"] for r in done]
    return {
        "field":       "Q(i)" if name == "i" else "Q(w)",
        "p":           p,
        "count":       len(records),
        "terminated":  len(done),
        "candidates":  [r["alpha"] for r in records if not r["terminated"]],
        "max_steps_seen":  max(steps, default=0),
        "mean_steps":      (sum(steps) / len(steps)) if steps else 0.0,
        "max_height_ratio": max((r["max_height_ratio"] for r in done), default=0.0),
    }
