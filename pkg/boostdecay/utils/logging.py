"""
Logging configuration
"""

import logging
import sys
from typing import Optional

from boostdecay.config.settings import get_settings


def setup_logging(level: Optional[str] = None) -> None:
    """
    Setup application logging configuration

    Args:
        level: Log level override (uses settings if not provided)
    """
    settings = get_settings()

    log_level = level or settings.log_level
    numeric_level = getattr(logging, log_level.upper(), logging.INFO)

    # stdout carries data when --out is omitted, so logs go to stderr
    logging.basicConfig(
        level=numeric_level,
        format=settings.log_format,
        handlers=[logging.StreamHandler(sys.stderr)],
        force=True,
    )

    loggers = {
        "scipy": logging.WARNING,
        "numpy": logging.WARNING,
        "boostdecay": numeric_level,
    }

    for logger_name, logger_level in loggers.items():
        logging.getLogger(logger_name).setLevel(logger_level)

    logging.getLogger("boostdecay").debug(f"Logging configured with level: {log_level}")
