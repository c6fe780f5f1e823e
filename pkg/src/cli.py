# src/cli.py

"""
Command-line front end.

    python3 run_cf.py expand     --p 3 --f 2 --variant browkin --alpha "(1-i)/2"
    python3 run_cf.py finiteness --p 7 --field i --count 100 --workers 4
    python3 run_cf.py enumerate  --p 3 --e 2 --r 1/3 --max-n 3 --format csv
    python3 run_cf.py measures   --p 3 --cylinder "1/3" --then "1/3" --cutoff 2
    python3 run_cf.py ergodic    --p 3 --stat mean-neg-val --samples 200 --steps 500
    python3 run_cf.py limits     --p 3 --f 2

Reports go to stdout (or --out) as JSON or CSV; progress goes to stderr.
Exit codes: 0 ok, 2 precondition, 3 precision, 4 budget.
"""

import argparse
import os
import sys
from typing import Any, Dict, List, Optional, Tuple

from .config import CONFIG, default_seed
from .errors import NonTermination, PadicCFError, PrecisionExhausted, PreconditionViolated
from .arith.cyclo import ExactCyclo
from .arith.extension import FieldParams, make_field
from .arith.literals import format_element, parse_element, parse_quotients, parse_rational
from .evals.ergodic import IndexSequence, MovingWindow
from .evals.measure import (
    ball_measure,
    count_table,
    cylinder,
    cylinder_measure,
    preservation_partial_sum,
    product_identity_check,
    scaling_holds,
)
from .evals.statistics import (
    cylinder_mass_check,
    digit_uniformity,
    mixing_check,
    moving_average,
    run_statistic,
)
from .evals.theory import (
    Transform,
    freq_abs_limit,
    generalized_mean_limit,
    mean_neg_valuation_limit,
    theoretical_limit,
    window_function_limit,
)
from .expansion.cf import Status, approximation_error, convergents, expand
from .expansion.finiteness import (
    batch_jobs,
    certify_input,
    finiteness_params,
    finiteness_test,
    random_inputs,
    summarize,
)
from .utils.logging import console, initialize_file_logging, log, safe_print
from .utils.pipeline_runner import run_jobs, write_report

Payload = Tuple[Dict[str, Any], Optional[List[Dict[str, Any]]]]


def build_field(args: argparse.Namespace) -> FieldParams:
    r = args.r
    if r is None and args.e > 1 and args.p == CONFIG.field.p:
        r = CONFIG.field.r
    r = parse_rational(str(r)) if r is not None else None
    return make_field(args.p, args.e, args.f, r, args.variant, gamma_poly=args.gamma)


# ───────────────────────────── commands ─────────────────────────────────────

def cmd_expand(args: argparse.Namespace) -> Payload:
    params = build_field(args)
    alpha = parse_element(args.alpha, params)
    if args.precision:
        alpha = alpha.with_precision(args.precision)
    max_steps = CONFIG.expansion.expand_max_steps if args.max_steps is None else args.max_steps
    exp = expand(alpha, max_steps)

    payload = {"alpha": args.alpha, **exp.to_dict()}
    if exp.quotients:
        payload["convergents"] = [format_element(s / t) for s, t in convergents(exp)]
    if exp.exact:
        last = exp.steps if exp.status is Status.TERMINATED else exp.steps - 1
        payload["errors"] = [str(approximation_error(alpha, exp, k)) for k in range(last + 1)]

    table = [{"k": k, "quotient": format_element(c), "abs": str(abs(c))}
             for k, c in enumerate(exp.quotients)]
    return payload, table


def cmd_finiteness(args: argparse.Namespace) -> Payload:
    p = args.p
    max_steps = args.max_steps or CONFIG.expansion.max_steps
    dps = CONFIG.finiteness.dps

    if args.alpha:
        params = finiteness_params(args.field, p)
        alpha = ExactCyclo.from_ext(parse_element(args.alpha, params))
        try:
            cert = finiteness_test(alpha, p, max_steps, dps=dps)
        except NonTermination as exc:
            log(f"[yellow]{exc}")
            cert = exc.certificate
        table = [{"k": k, "quotient": str(c), "height": h}
                 for k, (c, h) in enumerate(zip(cert.quotients, cert.to_dict()["heights"]))]
        return cert.to_dict(), table

    finiteness_params(args.field, p)
    count = args.count or CONFIG.finiteness.count
    bound = args.bound or CONFIG.finiteness.bound
    inputs = random_inputs(args.field, p, count, bound, args.seed)
    records = run_jobs(certify_input, batch_jobs(args.field, p, inputs, max_steps, dps),
                       max_workers=args.workers, label="finiteness inputs")
    summary = summarize(args.field, p, records)
    for candidate in summary["candidates"]:
        safe_print(candidate, "non-terminating candidate")
    summary.update({"seed": args.seed, "bound": bound, "max_steps": max_steps})
    return summary, records


def cmd_enumerate(args: argparse.Namespace) -> Payload:
    params = build_field(args)
    frame = count_table(args.max_n, params)
    rows = frame.to_dict(orient="records")
    payload = {
        "field":  params.descriptor(),
        "max_n":  args.max_n,
        "counts": rows,
        "match":  bool((frame["formula_count"] == frame["enumerated_count"]).all()),
    }
    return payload, rows


def cmd_measures(args: argparse.Namespace) -> Payload:
    params = build_field(args)
    c_list = parse_quotients(args.cylinder, params) if args.cylinder else []
    payload: Dict[str, Any] = {
        "field":        params.descriptor(),
        "unit_ball":    str(ball_measure(0, 0, params)),
        "scaling_holds": scaling_holds(0, params),
        "cylinder":     [str(c) for c in c_list],
        "ball":         cylinder(c_list, params).to_dict(),
        "measure":      str(cylinder_measure(c_list, params)),
    }
    if args.then:
        d_list = parse_quotients(args.then, params)
        payload["then"] = [str(d) for d in d_list]
        payload["joint_measure"] = str(cylinder_measure([*c_list, *d_list], params))
        payload["product_identity"] = product_identity_check(c_list, d_list, params)
    if args.cutoff:
        payload["cutoff"] = args.cutoff
        payload["partial_sum"] = str(preservation_partial_sum(c_list, args.cutoff, params))
    return payload, None


def _selector(args: argparse.Namespace):
    if args.window:
        return MovingWindow(args.window)
    if args.index == "custom":
        if not args.custom_index:
            raise PreconditionViolated("✘ --index custom needs --custom-index 1,4,9,…")
        return IndexSequence.custom(int(v) for v in args.custom_index.split(","))
    return IndexSequence(args.index)


def cmd_ergodic(args: argparse.Namespace) -> Payload:
    params = build_field(args)
    common = {"samples": args.samples, "seed": args.seed}

    if args.stat == "mixing":
        if not args.cylinder:
            raise PreconditionViolated("✘ mixing needs --cylinder (and usually --then)")
        d_list = parse_quotients(args.then, params) if args.then else []
        report = mixing_check(parse_quotients(args.cylinder, params), d_list, params,
                              workers=args.workers, **common)
    elif args.stat == "cylinder-mass":
        report = cylinder_mass_check(parse_quotients(args.cylinder or "", params), params, **common)
    elif args.stat == "digits":
        report = digit_uniformity(params, precision=CONFIG.precision.initial_digits, **common)
    else:
        kwargs: Dict[str, Any] = {**common, "steps": args.steps, "workers": args.workers}
        if args.stat == "freq":
            if not args.z:
                raise PreconditionViolated("✘ --stat freq needs --z")
            kwargs["z"] = parse_quotients(args.z, params)[0]
        elif args.stat == "freq-abs":
            kwargs.update(l=args.l, k=args.k, mode=args.mode)
        elif args.stat == "gen-mean":
            kwargs["transform"] = Transform.parse(args.transform)
        elif args.stat == "window":
            kwargs.update(h=args.h, arity=args.arity, l=args.l)

        selector = _selector(args)
        if isinstance(selector, MovingWindow):
            report = moving_average(args.stat, selector, params, **kwargs)
        else:
            report = run_statistic(args.stat, params, selector=selector, **kwargs)

    payload = report.to_dict()
    return payload, [{k: v for k, v in payload.items() if not isinstance(v, (dict, list))}]


def cmd_limits(args: argparse.Namespace) -> Payload:
    params = build_field(args)
    rows: List[Dict[str, Any]] = []

    def add(stat: str, detail: str, value: float, exact: Optional[str]) -> None:
        rows.append({"stat": stat, "detail": detail, "value": value, "exact": exact})

    mean = mean_neg_valuation_limit(params)
    add("mean-neg-val", "", float(mean), str(mean))
    for l in range(1, args.l + 1):
        eq = freq_abs_limit("eq", l, params)
        ge = freq_abs_limit("ge", l, params)
        add("freq-abs", f"eq l={l}", float(eq), str(eq))
        add("freq-abs", f"ge l={l}", float(ge), str(ge))
    if args.k is not None:
        rng = freq_abs_limit("range", args.l, params, args.k)
        add("freq-abs", f"range k={args.k} l={args.l}", float(rng), str(rng))
    if args.z:
        value, exact = theoretical_limit("freq", params, z=parse_quotients(args.z, params)[0])
        add("freq", args.z, value, exact)

    value, exact = generalized_mean_limit(Transform.parse(args.transform), params)
    add("gen-mean", args.transform, float(value), exact)
    for h in ("one", "indicator", "log-sum", "log-max"):
        value, exact = window_function_limit(h, args.arity, params, 1)
        add("window", f"{h} arity={args.arity}", value, str(exact) if exact is not None else None)

    return {"field": params.descriptor(), "limits": rows}, rows


COMMANDS = {
    "expand":     cmd_expand,
    "finiteness": cmd_finiteness,
    "enumerate":  cmd_enumerate,
    "measures":   cmd_measures,
    "ergodic":    cmd_ergodic,
    "limits":     cmd_limits,
}


# ───────────────────────────── parser ───────────────────────────────────────

def _shared_parser() -> argparse.ArgumentParser:
    shared = argparse.ArgumentParser(add_help=False)
    field = shared.add_argument_group("field")
    field.add_argument("--p", type=int, default=CONFIG.field.p, help="prime p")
    field.add_argument("--e", type=int, default=CONFIG.field.e, help="ramification index")
    field.add_argument("--f", type=int, default=CONFIG.field.f, help="residue degree")
    field.add_argument("--r", default=None, help="ramifier r with v_p(r) = -1, e.g. 1/15")
    field.add_argument("--variant", default=CONFIG.field.variant, choices=["ruban", "browkin"])
    field.add_argument("--gamma", default="auto", choices=["auto", "i", "w"],
                       help="γ polynomial: built-in table, x^2+1 or x^2+x+1")

    out = shared.add_argument_group("output")
    out.add_argument("--format", default="json", choices=["json", "csv"])
    out.add_argument("--out", default=None, help="write the report here instead of stdout")
    out.add_argument("--seed", type=int, default=None,
                     help=f"seed (default: ${CONFIG.runtime.seed_env} or {CONFIG.runtime.default_seed})")
    out.add_argument("--no-timestamp", action="store_true", help="omit generated_at for byte-stable output")
    out.add_argument("--workers", type=int, default=CONFIG.runtime.workers, help="process pool size")
    out.add_argument("--log-file", default=None, help="also write progress to this file")
    return shared


def build_parser() -> argparse.ArgumentParser:
    shared = _shared_parser()
    parser = argparse.ArgumentParser(prog="run_cf.py",
                                     description="p-adic continued fractions in finite extensions of Q_p")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", parents=[shared], help="partial quotients of an element literal")
    p.add_argument("--alpha", required=True, help='element literal, e.g. "(1-i)/2" or "-1/4*beta"')
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--precision", type=int, default=None, help="expand a stream copy known to p^N")

    p = sub.add_parser("finiteness", parents=[shared], help="finiteness certificates over Q(i) / Q(w)")
    p.add_argument("--field", required=True, choices=["i", "w"])
    p.add_argument("--count", type=int, default=None)
    p.add_argument("--bound", type=int, default=None)
    p.add_argument("--max-steps", type=int, default=None)
    p.add_argument("--alpha", default=None, help="certify a single literal instead of a random batch")

    p = sub.add_parser("enumerate", parents=[shared], help="count partial quotients by absolute value")
    p.add_argument("--max-n", type=int, required=True)

    p = sub.add_parser("measures", parents=[shared], help="cylinder balls and their measures")
    p.add_argument("--cylinder", default="", help='comma separated quotients, e.g. "1/3,1/3"')
    p.add_argument("--then", default=None, help="second cylinder for the product identity")
    p.add_argument("--cutoff", type=int, default=None, help="partial sum over |c| ≤ p^(N/e)")

    p = sub.add_parser("ergodic", parents=[shared], help="Monte Carlo statistics against their limits")
    p.add_argument("--stat", required=True,
                   choices=["freq", "mean-neg-val", "freq-abs", "gen-mean", "window",
                            "mixing", "cylinder-mass", "digits"])
    p.add_argument("--samples", type=int, default=None)
    p.add_argument("--steps", type=int, default=None)
    p.add_argument("--index", default="identity", choices=["identity", "squares", "primes", "custom"])
    p.add_argument("--custom-index", default=None)
    p.add_argument("--window", default=None, choices=["n,n", "1,n", "n2,n"],
                   help="moving average reported at the tail window")
    p.add_argument("--z", default=None, help="quotient literal for --stat freq")
    p.add_argument("--l", type=int, default=1)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--mode", default="eq", choices=["eq", "ge", "range"])
    p.add_argument("--transform", default="log_p", help="log_p | identity | power:<a>")
    p.add_argument("--h", default="log-sum", choices=["one", "indicator", "log-sum", "log-max"])
    p.add_argument("--arity", type=int, default=1)
    p.add_argument("--cylinder", default=None)
    p.add_argument("--then", default=None)

    p = sub.add_parser("limits", parents=[shared], help="theoretical limits for the field")
    p.add_argument("--l", type=int, default=3)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--z", default=None)
    p.add_argument("--transform", default="log_p")
    p.add_argument("--arity", type=int, default=2)
    return parser


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    if args.seed is None:
        args.seed = default_seed()

    if args.log_file:
        initialize_file_logging(args.log_file)
    elif CONFIG.runtime.log_to_file:
        os.makedirs(CONFIG.runtime.results_dir, exist_ok=True)
        initialize_file_logging(os.path.join(CONFIG.runtime.results_dir, f"{args.command}.log"))

    try:
        payload, table = COMMANDS[args.command](args)
    except PadicCFError as exc:
        console.print(str(exc), markup=False, highlight=False)
        return exc.exit_code

    write_report(payload, fmt=args.format, out=args.out, table=table,
                 timestamp=not args.no_timestamp)
    if payload.get("status") == Status.PRECISION_EXHAUSTED.value:
        console.print(f"✘ precision exhausted after {len(payload.get('literals', []))} quotients",
                      markup=False, highlight=False)
        return PrecisionExhausted.exit_code
    console.rule(f"[green]✓ {args.command} done")
    return 0


if __name__ == "__main__":
    sys.exit(main())
