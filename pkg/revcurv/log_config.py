"""Structured logging setup.

All modules log through loguru; this module installs the single JSON sink.
"""

from __future__ import annotations

import os
import sys

from loguru import logger


def configure_logging(level: str | None = None) -> None:
    """Replace any installed sinks with one stderr JSON sink at ``level``."""
    level = level or os.getenv("REVCURV_LOG_LEVEL") or os.getenv("LOG_LEVEL", "INFO")
    logger.remove()
    logger.add(
        sys.stderr,
        serialize=True,
        backtrace=True,
        diagnose=False,
        level=level.upper(),
    )
