"""Logging configuration for semiscale."""

import logging
import sys

from ..config import Config

LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
LEVELS = ("DEBUG", "INFO", "WARNING", "ERROR")


def resolve_level(log_level: str | None = None) -> int:
    """Numeric level for a level name, or for the configured `log_level` when None."""
    name = str(log_level if log_level is not None else Config().get("log_level", "INFO")).upper()
    if name not in LEVELS:
        logging.getLogger(__name__).warning(f"[Logging] Unknown log level '{name}', using INFO")
        return logging.INFO
    return getattr(logging, name)


def setup_logging(log_level: str | None = None) -> int:
    """Configure the root logger on stdout and return the level in effect.

    Floating-point RuntimeWarnings from numpy and scipy (log of zero, degenerate
    regressions) are routed into the log under `py.warnings`.
    """
    level = resolve_level(log_level)
    logging.basicConfig(level=level, format=LOG_FORMAT, datefmt=DATE_FORMAT, stream=sys.stdout)
    # basicConfig is a no-op once handlers exist
    logging.getLogger().setLevel(level)
    logging.captureWarnings(True)
    return level
