"""
Configuration objects.

Each concern gets one small validated value object with sensible defaults;
``RunConfig`` is what the CLI builds from flags plus an optional JSON file
before any computation starts.
"""

import json
import logging
import os
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional

from .errors import ConfigError

logger = logging.getLogger(__name__)

THREADS_ENV = "KAC_ROOTS_THREADS"
LOG_LEVEL_ENV = "KAC_ROOTS_LOG_LEVEL"


@dataclass(frozen=True)
class QuadratureConfig:
    """Adaptive quadrature settings for the density integrals."""

    rel_tol: float = 1e-10
    limit: int = 400

    def __post_init__(self) -> None:
        if not self.rel_tol > 0:
            raise ConfigError(f"rel_tol must be positive, got {self.rel_tol}")
        if self.limit < 1:
            raise ConfigError(f"limit must be >= 1, got {self.limit}")


@dataclass(frozen=True)
class IsolationConfig:
    """Root isolation settings for the near-double-root diagnostics.

    ``width_exp`` fixes the refinement width ``2**-width_exp``; the
    derivative at a root is reported once its enclosure is tighter than
    ``deriv_rel_accuracy`` relative to the value.
    """

    width_exp: int = 80
    max_depth: int = 4096
    deriv_rel_accuracy: float = 1e-6
    max_extra_bits: int = 256

    def __post_init__(self) -> None:
        if self.width_exp < 1:
            raise ConfigError(f"width_exp must be >= 1, got {self.width_exp}")
        if self.max_depth < 1:
            raise ConfigError(f"max_depth must be >= 1, got {self.max_depth}")
        if not 0 < self.deriv_rel_accuracy < 1:
            raise ConfigError(
                f"deriv_rel_accuracy must lie in (0, 1), got {self.deriv_rel_accuracy}"
            )

    @property
    def width(self) -> Fraction:
        return Fraction(1, 1 << self.width_exp)


def default_threads() -> int:
    """Worker count from ``KAC_ROOTS_THREADS`` (1 when unset)."""
    raw = os.environ.get(THREADS_ENV)
    if raw is None or raw.strip() == "":
        return 1
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"expected an integer, got {raw!r}", flag=THREADS_ENV) from None
    if value < 1:
        raise ConfigError(f"must be >= 1, got {value}", flag=THREADS_ENV)
    return value


def default_log_level() -> Optional[str]:
    raw = os.environ.get(LOG_LEVEL_ENV)
    return raw.strip().upper() if raw else None


def load_config_file(path: str) -> Dict[str, Any]:
    """Read a JSON object whose keys mirror command-line flag names."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as e:
        raise ConfigError(f"cannot read config file {path}: {e.strerror}", flag="--config") from None
    except json.JSONDecodeError as e:
        raise ConfigError(f"invalid JSON in {path}: {e.msg} (line {e.lineno})", flag="--config") from None
    if not isinstance(data, dict):
        raise ConfigError(f"{path} must contain a JSON object", flag="--config")
    normalized = {}
    for key, value in data.items():
        normalized[str(key).lstrip("-").replace("-", "_")] = value
    logger.debug("loaded %d keys from %s", len(normalized), path)
    return normalized


@dataclass(frozen=True)
class RunConfig:
    """A fully validated CLI invocation."""

    command: str
    options: Mapping[str, Any] = field(default_factory=dict)
    threads: int = 1
    out: Optional[str] = None
    summary: Optional[str] = None
    svg: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.command:
            raise ConfigError("a subcommand is required")
        if self.threads < 1:
            raise ConfigError(f"must be >= 1, got {self.threads}", flag="--threads")
        if self.out is not None and self.out == "":
            raise ConfigError("output path must not be empty", flag="--out")

    def option(self, name: str, default: Any = None) -> Any:
        return self.options.get(name, default)
