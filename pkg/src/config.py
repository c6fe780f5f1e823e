# src/config.py
# =============================================================================
# Configuration loader for padic-cf
#
# This module reads the `config.yaml` file located in the project root (or
# the shipped `config.example.yaml` when no override exists), parses its
# contents, and converts the nested dictionary structure into a Python
# object with attribute-style access. All configuration values can then be
# accessed via the global `CONFIG` constant, e.g.:
#
#     from src.config import CONFIG
#     print(CONFIG.expansion.max_steps)
#     print(CONFIG.ergodic.batches)
#
# The default seed can be overridden from the environment variable named in
# `runtime.seed_env` (see `default_seed()`).
# =============================================================================


import os
import yaml
from pathlib import Path
from types import SimpleNamespace

# Path to the YAML configuration file
PROJECT_ROOT  = Path(__file__).parent.parent
_CONFIG_PATH  = PROJECT_ROOT / "config.yaml"
_EXAMPLE_PATH = PROJECT_ROOT / "config.example.yaml"


def _to_namespace(data):
    """
    Recursively convert nested dicts into SimpleNamespace objects.
    """
    if isinstance(data, dict):
        return SimpleNamespace(**{
            key: _to_namespace(value) for key, value in data.items()
        })
    return data


def load_config(path: Path = None) -> SimpleNamespace:
    path = path or (_CONFIG_PATH if _CONFIG_PATH.exists() else _EXAMPLE_PATH)
    if not path.exists():
        raise FileNotFoundError(f"✘ configuration not found: {path}")
    with open(path, "r") as f:
        return _to_namespace(yaml.safe_load(f))


def default_seed() -> int:
    """Seed from the environment variable named in the config, else the YAML default."""
    raw = os.environ.get(CONFIG.runtime.seed_env)
    if raw is None or raw == "":
        return int(CONFIG.runtime.default_seed)
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"✘ {CONFIG.runtime.seed_env} must be an integer, got {raw!r}")


# Load and parse the YAML file once at import time
CONFIG = load_config()
