"""
Run independent jobs (finiteness inputs, Monte Carlo trajectories) and
write their reports.

Core helpers
------------
run_jobs(fn, jobs, *, max_workers=1, label=…)
    Map a module-level `fn` over `jobs`, in a process pool when
    `max_workers > 1`, and return the results **in input order** so every
    aggregate built from them is deterministic. Progress is logged every
    `CONFIG.runtime.print_every` jobs.

write_report(payload, *, fmt="json", out=None, table=None, timestamp=True)
    Serialise one report: orjson (sorted keys, 2-space indent) or a pandas
    CSV table. Without `out` the bytes go to stdout.

Typical usage (inside src/cli.py)
---------------------------------
    results = run_jobs(certify_input, jobs, max_workers=4, label="inputs")
    write_report(summary, fmt="json", out="results/finiteness.json")
"""

import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from datetime import datetime, timezone
from fractions import Fraction
from typing import Any, Callable, Iterable, List, Optional, Sequence

import numpy as np
import orjson
import pandas as pd

from ..config import CONFIG
from .logging import log


PRINT_EVERY = CONFIG.runtime.print_every


def run_jobs(fn: Callable[[Any], Any], jobs: Sequence[Any], *,
             max_workers: int = 1, label: str = "jobs") -> List[Any]:
    """Ordered map of `fn` over `jobs`; `fn` must be picklable for workers > 1."""
    t0_global = time.time()
    total = len(jobs)
    log(f"[green]▶ Starting {total} {label}")

    executor = ProcessPoolExecutor(max_workers=max_workers) if max_workers > 1 else None
    iterator = executor.map(fn, jobs) if executor else map(fn, jobs)

    results = []
    try:
        for idx, result in enumerate(iterator, start=1):
            results.append(result)
            if idx % PRINT_EVERY == 0:
                avg = (time.time() - t0_global) / idx
                log(f"processed {idx}/{total} {label} (avg {avg:.2f}s)")
    finally:
        if executor:
            executor.shutdown(wait=True)

    elapsed = time.time() - t0_global
    log(f"[green]▶ Finished {total} {label} in {elapsed:.1f}s")
    return results


def _json_default(obj):
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if hasattr(obj, "to_json"):
        return obj.to_json()
    # mpmath numbers and anything else numeric-looking
    return str(obj)


def to_json_bytes(payload: dict, *, timestamp: bool = True) -> bytes:
    if timestamp:
        payload = {**payload, "generated_at": datetime.now(timezone.utc).isoformat()}
    return orjson.dumps(
        payload,
        default=_json_default,
        option=orjson.OPT_SORT_KEYS | orjson.OPT_INDENT_2 | orjson.OPT_SERIALIZE_NUMPY,
    ) + b"\n"


def write_report(payload: dict, *, fmt: str = "json", out: Optional[str] = None,
                 table: Optional[Iterable[dict]] = None, timestamp: bool = True) -> None:
    """JSON report, or the CSV form of `table` (one row per record)."""
    if out:
        os.makedirs(os.path.dirname(out) or ".", exist_ok=True)

    if fmt == "csv":
        frame = pd.DataFrame(list(table) if table is not None else [payload])
        if out:
            frame.to_csv(out, index=False)
        else:
            frame.to_csv(sys.stdout, index=False)
        return

    data = to_json_bytes(payload, timestamp=timestamp)
    if out:
        with open(out, "wb") as f:
            f.write(data)
    else:
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
