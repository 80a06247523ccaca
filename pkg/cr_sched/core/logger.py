# cr_sched/core/logger.py

"""
This module defines a globally accessible logger.
"""

import logging
import sys

# Create or retrieve a logger named "cr_sched"
logger = logging.getLogger("cr_sched")

# INFO by default; the CLI adjusts it with -v / -q
logger.setLevel(logging.INFO)

# Log to stderr so that reports written to stdout stay machine-readable
handler = logging.StreamHandler(sys.stderr)

# Define the log message format (timestamp, log level, logger name, and message)
formatter = logging.Formatter(
    "%(asctime)s %(levelname)s [%(name)s] %(message)s"
)

handler.setFormatter(formatter)
logger.addHandler(handler)


def set_level(level: str | int) -> None:
    """Change the level of the shared logger (accepts names like "DEBUG")."""
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
    logger.setLevel(level)
