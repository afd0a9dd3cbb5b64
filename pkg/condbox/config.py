"""
Runtime configuration for Cond Box.

Settings come from the environment (a local .env file is loaded first).
Command-line flags override them through Settings.replace().

Environment Variables:
    CONDBOX_SEED: Base seed for randomized suites (default: 1)
    CONDBOX_CASES: Cases per suite (default: 200)
    CONDBOX_ATOMS_MAX: Largest number of atoms in generated algebras (default: 3)
    CONDBOX_CARRIER_MAX: Largest per-atom carrier in generated sets (default: 4)
    CONDBOX_DIGITS: Decimal digits for approximate output (default: 12)
    CONDBOX_WORKERS: Worker threads for suite execution (default: 4)
    CONDBOX_LOG_LEVEL: Logging level name (default: WARNING)
    CONDBOX_MATERIALIZE_ATOMS: Atom bound for full enumeration of S(X) (default: 3)
    CONDBOX_MATERIALIZE_CARRIER: Carrier bound for full enumeration of S(X) (default: 4)
"""

import logging
import os
from dataclasses import dataclass, replace
from typing import Any

from dotenv import load_dotenv

from .base import ConfigError

load_dotenv()


def _env_int(name: str, default: int) -> int:
    raw = os.environ.get(name, "")
    if not raw.strip():
        return default
    try:
        return int(raw)
    except ValueError:
        raise ConfigError(f"{name} must be an integer, got {raw!r}") from None


def _env_level(name: str, default: str) -> str:
    level = os.environ.get(name, "").strip().upper() or default
    if not isinstance(logging.getLevelName(level), int):
        raise ConfigError(f"{name} must be a logging level name, got {level!r}")
    return level


@dataclass(frozen=True)
class Settings:
    """Resolved configuration values."""
    seed: int = 1
    cases: int = 200
    atoms_max: int = 3
    carrier_max: int = 4
    digits: int = 12
    workers: int = 4
    log_level: str = "WARNING"
    materialize_atoms: int = 3
    materialize_carrier: int = 4

    @classmethod
    def from_env(cls) -> "Settings":
        return cls(
            seed=_env_int("CONDBOX_SEED", 1),
            cases=_env_int("CONDBOX_CASES", 200),
            atoms_max=_env_int("CONDBOX_ATOMS_MAX", 3),
            carrier_max=_env_int("CONDBOX_CARRIER_MAX", 4),
            digits=_env_int("CONDBOX_DIGITS", 12),
            workers=max(1, _env_int("CONDBOX_WORKERS", 4)),
            log_level=_env_level("CONDBOX_LOG_LEVEL", "WARNING"),
            materialize_atoms=_env_int("CONDBOX_MATERIALIZE_ATOMS", 3),
            materialize_carrier=_env_int("CONDBOX_MATERIALIZE_CARRIER", 4),
        )

    def replace(self, **overrides: Any) -> "Settings":
        """Copy with the non-None overrides applied."""
        return replace(self, **{k: v for k, v in overrides.items() if v is not None})


_settings = None


def get_settings() -> Settings:
    """Get the process-wide settings, reading the environment once."""
    global _settings
    if _settings is None:
        _settings = Settings.from_env()
    return _settings


def set_settings(settings: Settings) -> None:
    """Install settings (used by the CLI after parsing flags)."""
    global _settings
    _settings = settings
