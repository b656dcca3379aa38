"""Logging configuration for the torusq command line.

Records go to stderr as one line each; ``extra={...}`` fields are appended as
sorted ``key=value`` pairs. stdout is reserved for the JSON report.
"""

from __future__ import annotations

import logging
import time
from logging.config import dictConfig
from typing import Any, Dict

PACKAGE_LOGGER = "src"
LOG_FORMAT = "%(asctime)s %(levelname)-7s [%(name)s] %(message)s"

_RECORD_FIELDS = frozenset(vars(logging.makeLogRecord({}))) | {"message", "asctime"}


class ISO8601UTCFormatter(logging.Formatter):
    """UTC ISO-8601 timestamps with milliseconds, plus the record's context fields."""

    converter = time.gmtime

    def formatTime(self, record: logging.LogRecord, datefmt: str | None = None) -> str:  # noqa: N802
        formatted = super().formatTime(record, datefmt="%Y-%m-%dT%H:%M:%S")
        return f"{formatted}.{int(record.msecs):03d}Z"

    def format(self, record: logging.LogRecord) -> str:
        line = super().format(record)
        context = {k: v for k, v in vars(record).items() if k not in _RECORD_FIELDS}
        if not context:
            return line
        pairs = " ".join(f"{key}={context[key]!r}" for key in sorted(context))
        head, sep, tail = line.partition("\n")
        return f"{head} {pairs}{sep}{tail}"


def setup_logging(level: str) -> None:
    config: Dict[str, Any] = {
        "version": 1,
        "disable_existing_loggers": False,
        "formatters": {
            "context": {
                "()": ISO8601UTCFormatter,
                "format": LOG_FORMAT,
            }
        },
        "handlers": {
            "stderr": {
                "class": "logging.StreamHandler",
                "stream": "ext://sys.stderr",
                "formatter": "context",
                "level": level,
            }
        },
        "loggers": {
            # "__main__" covers `python -m src.cli`.
            name: {"handlers": ["stderr"], "level": level, "propagate": False}
            for name in (PACKAGE_LOGGER, "__main__")
        },
        "root": {"handlers": ["stderr"], "level": "WARNING"},
    }

    dictConfig(config)
