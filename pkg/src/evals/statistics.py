# src/evals/statistics.py

"""
Monte Carlo estimates of the metrical statistics, each paired with its
theoretical limit.

Every evaluator follows the same two-step protocol:

    ev.update(quotients)      # one trajectory c_1..c_n, returns its sum
    ev.compute_metrics()      # mean, batch-means standard error, n_obs

Trajectories come from `HaarSampler` through `run_jobs`, so a fixed seed
gives the same report for any worker count.
"""

from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

import mpmath
import numpy as np
import pandas as pd

from ..config import CONFIG, default_seed
from ..errors import PreconditionViolated
from ..arith.extension import FieldParams, ZElement
from ..utils.pipeline_runner import run_jobs
from .ergodic import HaarSampler, IndexSequence, MovingWindow, trajectory_job
from .measure import cylinder, cylinder_measure
from .theory import Transform, abs_condition, generalized_mean_limit, theoretical_limit, window_function

Selector = Union[IndexSequence, MovingWindow]


@dataclass
class StatReport:
    stat: str
    field: dict
    params: dict
    empirical: float
    theoretical: float
    theoretical_exact: Optional[str]
    n_obs: int
    std_err: Optional[float]
    seed: int
    quotients_consumed: int
    samples: int = 0
    steps: int = 0
    details: dict = field(default_factory=dict)

    @property
    def z_score(self) -> Optional[float]:
        if not self.std_err:
            return None
        return (self.empirical - self.theoretical) / self.std_err

    def to_dict(self) -> dict:
        return {
            "stat":               self.stat,
            "field":              self.field,
            "params":             self.params,
            "empirical":          self.empirical,
            "theoretical":        self.theoretical,
            "theoretical_exact":  self.theoretical_exact,
            "n_obs":              self.n_obs,
            "std_err":            self.std_err,
            "z_score":            self.z_score,
            "seed":               self.seed,
            "samples":            self.samples,
            "steps":              self.steps,
            "quotients_consumed": self.quotients_consumed,
            "details":            self.details,
        }


def batch_means(sums: Sequence[float], counts: Sequence[int],
                batches: Optional[int] = None) -> Tuple[float, Optional[float]]:
    """Pooled mean and its standard error from contiguous batches of trajectories."""
    sums, counts = np.asarray(sums, dtype=np.float64), np.asarray(counts, dtype=np.int64)
    total = counts.sum()
    if total == 0:
        raise PreconditionViolated("✘ no observations; increase steps or samples")
    mean = float(sums.sum() / total)
    B = min(batches or CONFIG.ergodic.batches, len(sums))
    groups = [g for g in np.array_split(np.arange(len(sums)), B) if counts[g].sum() > 0]
    if len(groups) < 2:
        return mean, None
    means = np.array([sums[g].sum() / counts[g].sum() for g in groups])
    return mean, float(means.std(ddof=1) / np.sqrt(len(means)))


# ───────────────────────────── evaluators ───────────────────────────────────

class TrajectoryEvaluator:
    """
    Average of g(c_a, …, c_{a+arity-1}) over the selected positions a.

    With a `MovingWindow` selector the pooled estimate is the tail window;
    every fitting window n also gets its own average, kept per trajectory
    and reported as `window_sequence`.
    """

    arity = 1

    def __init__(self, params: FieldParams, selector: Optional[Selector], steps: int):
        self.params    = params
        self.selector  = selector or IndexSequence()
        self.positions = self._positions(steps)
        self.windows: List[Tuple[int, int, int]] = (
            self.selector.windows(steps, self.arity) if isinstance(self.selector, MovingWindow) else [])
        self.sums: List[float] = []
        self.counts: List[int] = []
        self.window_means: List[np.ndarray] = []

    def _positions(self, steps: int) -> List[int]:
        if isinstance(self.selector, MovingWindow):
            return self.selector.positions(steps, self.arity)
        return self.selector.positions(steps - self.arity + 1)

    def value(self, window: Sequence[ZElement]) -> float:
        raise NotImplementedError

    def values(self, quotients: Sequence[ZElement]) -> np.ndarray:
        """g at every start position 1 … len - arity + 1."""
        starts = range(len(quotients) - self.arity + 1)
        return np.array([self.value(quotients[a:a + self.arity]) for a in starts], dtype=np.float64)

    def update(self, quotients: Sequence[ZElement]) -> float:
        if self.windows:
            return self._update_windows(quotients)
        total, n = 0.0, 0
        for a in self.positions:
            if a + self.arity - 1 > len(quotients):
                break
            total += self.value(quotients[a - 1:a - 1 + self.arity])
            n += 1
        self.sums.append(total)
        self.counts.append(n)
        return total

    def _update_windows(self, quotients: Sequence[ZElement]) -> float:
        values = self.values(quotients)
        cumulative = np.concatenate(([0.0], np.cumsum(values)))
        fits = len(values)
        means = np.full(len(self.windows), np.nan)
        for i, (_, a, b) in enumerate(self.windows):
            if a + b <= fits:
                means[i] = (cumulative[a + b] - cumulative[a]) / b
        self.window_means.append(means)

        picked = [a for a in self.positions if a <= fits]
        total = float(values[np.array(picked, dtype=np.int64) - 1].sum()) if picked else 0.0
        self.sums.append(total)
        self.counts.append(len(picked))
        return total

    def window_sequence(self) -> List[Dict[str, float]]:
        """Per-window averages over trajectories, in window order."""
        if not self.window_means:
            return []
        table = np.vstack(self.window_means)
        out = []
        for i, (n, a, b) in enumerate(self.windows):
            column = table[:, i]
            column = column[~np.isnan(column)]
            mean = float(column.mean()) if column.size else None
            out.append({"n": n, "a": a, "b": b, "mean": mean})
        return out

    def compute_metrics(self) -> Dict[str, float]:
        mean, se = batch_means(self.sums, self.counts)
        metrics = {"empirical": mean, "std_err": se, "n_obs": int(sum(self.counts))}
        if self.windows:
            metrics["window_sequence"] = self.window_sequence()
        return metrics


class QuotientFrequency(TrajectoryEvaluator):
    def __init__(self, z: ZElement, *args):
        super().__init__(*args)
        self.z = z

    def value(self, window):
        return 1.0 if window[0] == self.z else 0.0


class NegValuationMean(TrajectoryEvaluator):
    def value(self, window):
        return abs(window[0]).exponent / self.params.e


class AbsFrequency(TrajectoryEvaluator):
    def __init__(self, mode: str, l: int, k: Optional[int], *args):
        super().__init__(*args)
        self.condition = abs_condition(mode, l, k)

    def value(self, window):
        return 1.0 if self.condition(abs(window[0]).exponent) else 0.0


class GeneralizedMean(TrajectoryEvaluator):
    """Mean of F(|c|), reported as F^{-1} of that mean."""

    def __init__(self, transform: Transform, *args):
        super().__init__(*args)
        self.transform = transform

    def value(self, window):
        return float(self.transform.forward(abs(window[0]).exponent, self.params))

    def compute_metrics(self) -> Dict[str, float]:
        metrics = super().compute_metrics()
        y = metrics["empirical"]
        with mpmath.workdps(CONFIG.ergodic.dps):
            metrics["empirical"] = float(self.transform.inverse(y, self.params.p))
            if metrics["std_err"] is not None:
                slope = abs(self.transform.inverse_slope(y, self.params.p))
                metrics["std_err"] = float(slope * metrics["std_err"])
            for row in metrics.get("window_sequence", []):
                if row["mean"] is not None:
                    row["mean"] = float(self.transform.inverse(row["mean"], self.params.p))
        metrics["transformed_mean"] = y
        return metrics


class WindowFunctionMean(TrajectoryEvaluator):
    def __init__(self, h: str, arity: int, l: int, params: FieldParams, selector, steps):
        self.arity = arity
        self.H = window_function(h)
        self.l = l
        super().__init__(params, selector, steps)

    def value(self, window):
        return self.H([abs(c).exponent for c in window], self.params.e, self.l)


class CylinderJoint(TrajectoryEvaluator):
    """Indicator of α ∈ Δ_c and T^{|c|}α ∈ Δ_d, one observation per trajectory."""

    def __init__(self, c_list: Sequence[ZElement], d_list: Sequence[ZElement],
                 params: FieldParams):
        self.c_list, self.d_list = list(c_list), list(d_list)
        super().__init__(params, IndexSequence.custom([1]), len(self.c_list) + len(self.d_list))

    def update(self, quotients: Sequence[ZElement]) -> float:
        n = len(self.c_list)
        hit = (list(quotients[:n]) == self.c_list
               and list(quotients[n:n + len(self.d_list)]) == self.d_list)
        self.sums.append(1.0 if hit else 0.0)
        self.counts.append(1)
        return self.sums[-1]


# ───────────────────────────── driver ───────────────────────────────────────

def sample_trajectories(params: FieldParams, samples: int, steps: int, seed: int,
                        workers: int = 1) -> List[List[ZElement]]:
    if samples < 2:
        raise PreconditionViolated(f"✘ need at least 2 samples, got {samples}")
    jobs = [(params.descriptor(), seed, index, steps) for index in range(samples)]
    return run_jobs(trajectory_job, jobs, max_workers=workers, label="trajectories")


def _defaults(samples, steps, seed) -> Tuple[int, int, int]:
    return (samples or CONFIG.ergodic.samples, steps or CONFIG.ergodic.steps,
            default_seed() if seed is None else seed)


def _report(stat: str, evaluator: TrajectoryEvaluator, params: FieldParams, stat_params: dict,
            theory: Tuple[float, Optional[str]], samples: int, steps: int, seed: int,
            workers: int) -> StatReport:
    trajectories = sample_trajectories(params, samples, steps, seed, workers)
    for quotients in trajectories:
        evaluator.update(quotients)
    metrics = evaluator.compute_metrics()
    selector = evaluator.selector
    details = {k: v for k, v in metrics.items() if k not in ("empirical", "std_err", "n_obs")}
    details["selector"] = selector.label()
    if isinstance(selector, MovingWindow):
        details["window"] = list(selector.tail(steps, evaluator.arity))
    return StatReport(stat, params.descriptor(), stat_params, metrics["empirical"], theory[0],
                      theory[1], metrics["n_obs"], metrics["std_err"], seed,
                      sum(len(q) for q in trajectories), samples, steps, details)


def freq_of_quotient(z: ZElement, params: FieldParams, *, samples: Optional[int] = None,
                     steps: Optional[int] = None, seed: Optional[int] = None,
                     selector: Optional[Selector] = None, workers: int = 1) -> StatReport:
    """Frequency of c_{a_j} = z against 1/|z|^{2m}."""
    samples, steps, seed = _defaults(samples, steps, seed)
    theory = theoretical_limit("freq", params, z=z)
    evaluator = QuotientFrequency(z, params, selector, steps)
    return _report("freq", evaluator, params, {"z": str(z)}, theory, samples, steps, seed, workers)


def mean_neg_valuation(params: FieldParams, *, samples: Optional[int] = None,
                       steps: Optional[int] = None, seed: Optional[int] = None,
                       selector: Optional[Selector] = None, workers: int = 1) -> StatReport:
    """Mean of -v(c_{a_j}) against p^f/((p^f-1)e)."""
    samples, steps, seed = _defaults(samples, steps, seed)
    theory = theoretical_limit("mean-neg-val", params)
    evaluator = NegValuationMean(params, selector, steps)
    return _report("mean-neg-val", evaluator, params, {}, theory, samples, steps, seed, workers)


def freq_abs(l: int, params: FieldParams, *, mode: str = "eq", k: Optional[int] = None,
             samples: Optional[int] = None, steps: Optional[int] = None,
             seed: Optional[int] = None, selector: Optional[Selector] = None,
             workers: int = 1) -> StatReport:
    samples, steps, seed = _defaults(samples, steps, seed)
    theory = theoretical_limit("freq-abs", params, mode=mode, l=l, k=k)
    evaluator = AbsFrequency(mode, l, k, params, selector, steps)
    return _report("freq-abs", evaluator, params, {"mode": mode, "l": l, "k": k},
                   theory, samples, steps, seed, workers)


def generalized_mean(transform: Union[Transform, str], params: FieldParams, *,
                     samples: Optional[int] = None, steps: Optional[int] = None,
                     seed: Optional[int] = None, selector: Optional[Selector] = None,
                     workers: int = 1) -> StatReport:
    """F^{-1} of the mean of F(|c_{a_j}|); NotIntegrable is raised before sampling."""
    if isinstance(transform, str):
        transform = Transform.parse(transform)
    samples, steps, seed = _defaults(samples, steps, seed)
    value, exact = generalized_mean_limit(transform, params)
    evaluator = GeneralizedMean(transform, params, selector, steps)
    return _report("gen-mean", evaluator, params, {"transform": transform.label},
                   (float(value), exact), samples, steps, seed, workers)


def window_function_mean(h: str, arity: int, params: FieldParams, *, l: int = 1,
                         samples: Optional[int] = None, steps: Optional[int] = None,
                         seed: Optional[int] = None, selector: Optional[Selector] = None,
                         workers: int = 1) -> StatReport:
    samples, steps, seed = _defaults(samples, steps, seed)
    theory = theoretical_limit("window", params, h=h, arity=arity, l=l)
    evaluator = WindowFunctionMean(h, arity, l, params, selector, steps)
    return _report("window", evaluator, params, {"h": h, "arity": arity, "l": l},
                   theory, samples, steps, seed, workers)


STATISTICS: Dict[str, Callable[..., StatReport]] = {
    "freq":         freq_of_quotient,
    "mean-neg-val": mean_neg_valuation,
    "freq-abs":     freq_abs,
    "gen-mean":     generalized_mean,
    "window":       window_function_mean,
}


def run_statistic(stat: str, params: FieldParams, **kwargs) -> StatReport:
    try:
        fn = STATISTICS[stat]
    except KeyError:
        raise PreconditionViolated(f"✘ unknown statistic {stat!r} ({', '.join(STATISTICS)})")
    return fn(params=params, **kwargs)


def moving_average(stat: str, window: MovingWindow, params: FieldParams, **kwargs) -> StatReport:
    """
    `stat` averaged over every window a_n + 1 … a_n + b_n that fits in `steps`.

    `details["window_sequence"]` holds the per-n averages in order; the
    reported estimate and its standard error belong to the last (tail) window.
    """
    return run_statistic(stat, params, selector=window, **kwargs)


# ───────────────────────────── measure checks ───────────────────────────────

def mixing_check(c_list: Sequence[ZElement], d_list: Sequence[ZElement], params: FieldParams, *,
                 samples: Optional[int] = None, seed: Optional[int] = None,
                 workers: int = 1) -> StatReport:
    """Joint frequency of (α ∈ Δ_c, T^{|c|}α ∈ Δ_d) against μ(Δ_c)μ(Δ_d)."""
    if not c_list:
        raise PreconditionViolated("✘ mixing needs a non-empty first cylinder")
    samples, _, seed = _defaults(samples, None, seed)
    exact = cylinder_measure(c_list, params) * cylinder_measure(d_list, params)
    evaluator = CylinderJoint(c_list, d_list, params)
    steps = len(c_list) + len(d_list)
    stat_params = {"c": [str(c) for c in c_list], "d": [str(d) for d in d_list]}
    return _report("mixing", evaluator, params, stat_params, (float(exact), str(exact)),
                   samples, steps, seed, workers)


def cylinder_mass_check(c_list: Sequence[ZElement], params: FieldParams, *,
                        samples: Optional[int] = None, seed: Optional[int] = None) -> StatReport:
    """Fraction of Haar samples inside the cylinder ball against its exact measure."""
    samples, _, seed = _defaults(samples, None, seed)
    ball = cylinder(c_list, params)
    exact = ball.measure()
    if exact != cylinder_measure(c_list, params):
        raise PreconditionViolated("✘ cylinder ball and cylinder measure disagree")
    precision = max(CONFIG.precision.initial_digits, -ball.s + 2)
    sampler = HaarSampler(params, seed)
    hits = [1.0 if ball.contains(sampler.sample(index, precision)) else 0.0 for index in range(samples)]
    mean, se = batch_means(hits, [1] * samples)
    return StatReport("cylinder-mass", params.descriptor(), {"c": [str(c) for c in c_list]},
                      mean, float(exact), str(exact), samples, se, seed, 0, samples, 0,
                      {"ball": ball.to_dict()})


def digit_uniformity(params: FieldParams, *, samples: Optional[int] = None,
                     precision: int = 64, seed: Optional[int] = None) -> StatReport:
    """Largest |z-score| of the per-digit counts over every sampled coefficient."""
    samples, _, seed = _defaults(samples, None, seed)
    sampler = HaarSampler(params, seed)
    span = params.alphabet.digits
    counts = np.zeros(len(span), dtype=np.int64)
    for index in range(samples):
        for i in range(params.e):
            for j in range(params.f):
                digits = np.asarray(sampler.tape(index, i, j).digits(precision + 1))
                counts += np.bincount(digits - span.start, minlength=len(span))
    total = int(counts.sum())
    share = 1 / params.p
    scores = (counts - total * share) / np.sqrt(total * share * (1 - share))
    worst = float(np.abs(scores).max())
    return StatReport("digits", params.descriptor(), {"precision": precision}, worst, 0.0, "0",
                      total, None, seed, 0, samples, 0,
                      {"counts": {int(d): int(n) for d, n in zip(span, counts)}})


def convergence_profile(stat: str, params: FieldParams, budgets: Sequence[int], *,
                        repetitions: int = 5, seed: Optional[int] = None, **kwargs) -> pd.DataFrame:
    """Median |empirical - theoretical| over `repetitions` seeds for each sample budget."""
    seed = default_seed() if seed is None else seed
    rows = []
    for budget in budgets:
        errors = [abs(r.empirical - r.theoretical) for r in (
            run_statistic(stat, params, samples=budget, seed=seed + rep, **kwargs)
            for rep in range(repetitions))]
        rows.append({"samples": budget, "repetitions": repetitions,
                     "median_abs_error": float(np.median(errors))})
    return pd.DataFrame(rows)
