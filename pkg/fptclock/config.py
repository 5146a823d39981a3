# fptclock/config.py

import os
from dotenv import load_dotenv

dotenv_path = os.path.join(os.path.dirname(__file__), '..', '.env')

# Load .env file into environment
load_dotenv(dotenv_path)


def _float_env(name: str, default: float) -> float:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return float(raw)
    except ValueError:
        raise ValueError(f"❌ {name} must be a number, got '{raw}'")


def _int_env(name: str, default: int) -> int:
    raw = os.getenv(name)
    if raw is None:
        return default
    try:
        return int(raw)
    except ValueError:
        raise ValueError(f"❌ {name} must be an integer, got '{raw}'")

# ==================== Logging ====================

LOG_LEVEL = os.getenv("FPT_LOG_LEVEL", "WARNING").upper()
if LOG_LEVEL not in {"CRITICAL", "ERROR", "WARNING", "INFO", "DEBUG"}:
    raise ValueError(f"❌ FPT_LOG_LEVEL must be a logging level name, got '{LOG_LEVEL}'")

# ==================== Series Truncation ====================

DEFAULT_TERM_TOL = _float_env("FPT_SERIES_TERM_TOL", 1e-16)
if not DEFAULT_TERM_TOL > 0:
    raise ValueError("❌ FPT_SERIES_TERM_TOL must be positive")

DEFAULT_MAX_TERMS = _int_env("FPT_SERIES_MAX_TERMS", 1_000_000)
if DEFAULT_MAX_TERMS < 1:
    raise ValueError("❌ FPT_SERIES_MAX_TERMS must be at least 1")

# ==================== Simulation ====================

# Steps per unit of accumulated variation
DEFAULT_CLOCK_STEPS = _int_env("FPT_SIM_CLOCK_STEPS", 500)
if DEFAULT_CLOCK_STEPS < 1:
    raise ValueError("❌ FPT_SIM_CLOCK_STEPS must be at least 1")

# Paths per RNG block; a block's stream depends only on (seed, block index)
DEFAULT_BLOCK_SIZE = _int_env("FPT_SIM_BLOCK_SIZE", 10_000)
if DEFAULT_BLOCK_SIZE < 1:
    raise ValueError("❌ FPT_SIM_BLOCK_SIZE must be at least 1")

DEFAULT_WORKERS = _int_env("FPT_SIM_WORKERS", 1)
if DEFAULT_WORKERS < 1:
    raise ValueError("❌ FPT_SIM_WORKERS must be at least 1")

# ==================== Defaults Export ====================

__all__ = [
    "LOG_LEVEL",
    "DEFAULT_TERM_TOL",
    "DEFAULT_MAX_TERMS",
    "DEFAULT_CLOCK_STEPS",
    "DEFAULT_BLOCK_SIZE",
    "DEFAULT_WORKERS",
]
