"""Configuration management for semiscale.

Settings are layered with priority:
environment (SEMISCALE_<KEY>) > ~/.semiscale/config.json > defaults

Experiment configs override the grid, schedule and quadrature sections per run.
"""

import logging
import os
from pathlib import Path
from typing import Any

import orjson

logger = logging.getLogger(__name__)

# Keys grouped by the object built from them
SECTIONS: dict[str, dict[str, Any]] = {
    "grid": {"grid_a": -40.0, "grid_b": 40.0, "grid_n": 16001, "compact_density": 2001},
    "schedule": {
        "t_min": 1e-6,
        "t_max": 1e2,
        "t_points": 81,
        "lambda_min": 1e-2,
        "lambda_max": 1e6,
        "lambda_points": 81,
    },
    "quadrature": {
        "quad_panels": 256,
        "quad_tol": 1e-6,
        "quad_max_step": 0.1,
        "quad_max_intervals": 4096,
        "kernel_max_nodes": 8193,
    },
    "runtime": {"workers": 4, "cache_max_entries": 32, "cache_max_mb": 512, "log_level": "INFO"},
}

DEFAULTS: dict[str, Any] = {key: value for section in SECTIONS.values() for key, value in section.items()}

ENV_MAPPINGS = {key: f"SEMISCALE_{key.upper()}" for key in DEFAULTS}

# Keys that must be strictly positive when set
POSITIVE_KEYS = frozenset(
    {
        "grid_n",
        "compact_density",
        "t_min",
        "t_max",
        "t_points",
        "lambda_min",
        "lambda_max",
        "lambda_points",
        "quad_panels",
        "quad_tol",
        "quad_max_step",
        "quad_max_intervals",
        "kernel_max_nodes",
        "workers",
        "cache_max_entries",
        "cache_max_mb",
    }
)


class Config:
    """Layered semiscale settings."""

    DEFAULTS = DEFAULTS
    ENV_MAPPINGS = ENV_MAPPINGS
    SECTIONS = SECTIONS

    def __init__(self, config_dir: Path | None = None):
        self.config_dir = config_dir or (Path.home() / ".semiscale")
        self.config_file = self.config_dir / "config.json"

    def get(self, key: str, default: Any = None) -> Any:
        """Value of `key` from the first layer that defines it."""
        env_value = os.getenv(ENV_MAPPINGS.get(key, key.upper()))
        if env_value is not None:
            return self._parse_value(env_value, key)

        stored = self._load_config_file()
        if key in stored:
            return stored[key]

        return DEFAULTS.get(key, default)

    def get_all(self) -> dict[str, Any]:
        merged = dict(DEFAULTS)
        merged.update(self._load_config_file())
        for key, env_key in ENV_MAPPINGS.items():
            env_value = os.getenv(env_key)
            if env_value is not None:
                merged[key] = self._parse_value(env_value, key)
        return merged

    def section(self, name: str) -> dict[str, Any]:
        """Resolved values of one section, e.g. `grid` or `quadrature`."""
        if name not in SECTIONS:
            raise KeyError(f"Unknown config section '{name}'")
        return {key: self.get(key) for key in SECTIONS[name]}

    def source(self, key: str) -> str:
        """Which layer supplies `key`: environment, config file or default."""
        if os.getenv(ENV_MAPPINGS.get(key, key.upper())) is not None:
            return "environment"
        if key in self._load_config_file():
            return "config file"
        return "default"

    def set(self, key: str, value: Any):
        stored = self._load_config_file()
        stored[key] = value
        self._save_config_file(stored)
        logger.debug(f"[Config] {key} = {value!r} written to {self.config_file}")

    def unset(self, key: str):
        stored = self._load_config_file()
        if stored.pop(key, None) is not None:
            self._save_config_file(stored)

    @staticmethod
    def coerce(key: str, raw: str) -> Any:
        """Strictly convert a command-line value to the type of the key's default.

        Raises:
            KeyError: unknown key
            ValueError: wrong type or a non-positive value for a positive key
        """
        if key not in DEFAULTS:
            raise KeyError(key)
        default = DEFAULTS[key]
        value: Any = raw
        if isinstance(default, int):
            try:
                value = int(raw)
            except ValueError:
                raise ValueError(f"{key} must be an integer") from None
        elif isinstance(default, float):
            try:
                value = float(raw)
            except ValueError:
                raise ValueError(f"{key} must be a number") from None
        elif key == "log_level":
            value = raw.upper()
            if value not in ("DEBUG", "INFO", "WARNING", "ERROR"):
                raise ValueError(f"{key} must be one of DEBUG, INFO, WARNING, ERROR")
        if key in POSITIVE_KEYS and not value > 0:
            raise ValueError(f"{key} must be positive")
        return value

    def _ensure_config_dir(self) -> bool:
        try:
            self.config_dir.mkdir(parents=True, exist_ok=True)
            return True
        except OSError as e:
            logger.warning(f"[Config] Cannot create {self.config_dir}: {e}")
            return False

    def _load_config_file(self) -> dict[str, Any]:
        if not self.config_file.exists():
            return {}
        try:
            data = orjson.loads(self.config_file.read_bytes())
        except (OSError, orjson.JSONDecodeError) as e:
            logger.warning(f"[Config] Ignoring unreadable {self.config_file}: {e}")
            return {}
        return data if isinstance(data, dict) else {}

    def _save_config_file(self, config_data: dict[str, Any]):
        if not self._ensure_config_dir():
            return
        self.config_file.write_bytes(orjson.dumps(config_data, option=orjson.OPT_INDENT_2 | orjson.OPT_SORT_KEYS))

    def _parse_value(self, value: str, key: str) -> Any:
        """Environment values are parsed leniently: a malformed number falls back to the default."""
        default = DEFAULTS.get(key)
        if isinstance(default, bool):
            return value.lower() in ("true", "1", "yes", "on")
        if isinstance(default, int | float):
            try:
                return type(default)(value)
            except ValueError:
                logger.warning(f"[Config] Ignoring {ENV_MAPPINGS.get(key)}={value!r}, using {default!r}")
                return default
        return value
