# src/utils/logging.py
"""
Progress output for the CLI and the job runner.

Reports own stdout, so everything here writes to stderr. `log` mirrors each
line into a plain-text run log once `initialize_file_logging` has opened one.
"""

import os
from typing import Any, Optional

from rich.console import Console
from rich.panel import Panel

DEBUG_FLAG = bool(os.environ.get("DEBUG"))

# plain text unless DEBUG is set
if not DEBUG_FLAG:
    os.environ["RICH_DISABLE"] = "1"

console = Console(stderr=True)

file_console: Optional[Console] = None


def initialize_file_logging(log_filename: str) -> bool:
    """Open (truncate) `log_filename` as the run log; False if it cannot be opened."""
    global file_console
    try:
        stream = open(log_filename, "w", encoding="utf-8")
    except OSError as exc:
        console.print(f"✘ cannot open run log {log_filename!r}: {exc}", markup=False, highlight=False)
        file_console = None
        return False
    file_console = Console(file=stream, highlight=False, force_terminal=False, width=120)
    console.print(f"run log: [blue]{log_filename}[/blue]")
    return True


def log(text: str) -> None:
    console.log(text)
    if file_console is not None:
        file_console.print(text)


def safe_print(obj: Any, title: str = "") -> None:
    """A panel under DEBUG, otherwise one line cut at 120 characters."""
    if DEBUG_FLAG:
        console.print(Panel(str(obj), title=str(title)))
        return
    line = str(obj)
    if len(line) > 120:
        line = line[:120] + "…"
    console.print(f"[{title}] {line}", markup=False, highlight=False)
