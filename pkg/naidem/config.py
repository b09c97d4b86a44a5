"""
config.py
• Defaults for the solver, the spectral routines and the extremal search.
• Every value can be overridden through a NAIDEM_* environment variable;
  CLI flags override the environment.
"""

import os

import logging


def _env_float(name: str, default: str) -> float:
    raw = os.getenv(name, default)
    try:
        return float(raw)
    except ValueError:
        raise RuntimeError(f"{name} must be a number, got {raw!r}")


def _env_int(name: str, default: str) -> int:
    raw = os.getenv(name, default)
    try:
        return int(raw)
    except ValueError:
        raise RuntimeError(f"{name} must be an integer, got {raw!r}")


SEED            = _env_int("NAIDEM_SEED", "0")
TRACK_TOL       = _env_float("NAIDEM_TRACK_TOL", "1e-10")
DS_INIT         = _env_float("NAIDEM_DS_INIT", "0.01")
DS_MIN          = _env_float("NAIDEM_DS_MIN", "1e-9")
DS_MAX          = _env_float("NAIDEM_DS_MAX", "0.1")
DIVERGENCE_NORM = _env_float("NAIDEM_DIVERGENCE_NORM", "1e8")
DEDUP_TOL       = _env_float("NAIDEM_DEDUP_TOL", "1e-6")
REFINE_TOL      = _env_float("NAIDEM_REFINE_TOL", "1e-12")
MAX_NEWTON      = _env_int("NAIDEM_MAX_NEWTON", "50")
MAX_STEPS       = _env_int("NAIDEM_MAX_STEPS", "20000")
ENDGAME_START   = _env_float("NAIDEM_ENDGAME_START", "0.95")

CLUSTER_TOL     = _env_float("NAIDEM_CLUSTER_TOL", "1e-6")
RANK_TOL        = _env_float("NAIDEM_RANK_TOL", "1e-8")
UNIT_TOL        = _env_float("NAIDEM_UNIT_TOL", "1e-10")
MAX_DIM         = _env_int("NAIDEM_MAX_DIM", "12")

EXTREMAL_STARTS = _env_int("NAIDEM_EXTREMAL_STARTS", "32")

LOG_LEVEL       = os.getenv("NAIDEM_LOG_LEVEL", "WARNING").upper()
if not isinstance(logging.getLevelName(LOG_LEVEL), int):
    raise RuntimeError(f"NAIDEM_LOG_LEVEL invalido: {LOG_LEVEL!r}")
