"""Logging helpers with structured extras."""

from __future__ import annotations

import logging
import os

_LOG_LEVEL = os.getenv("LOG_LEVEL", "INFO").upper()

_RESERVED = set(vars(logging.LogRecord("", 0, "", 0, "", (), None))) | {"message", "asctime"}


class StructuredFormatter(logging.Formatter):
    """Append `extra=` fields to the message as sorted key=value pairs."""

    def format(self, record: logging.LogRecord) -> str:  # noqa: D401
        base = super().format(record)
        extras = {key: value for key, value in vars(record).items() if key not in _RESERVED}
        if not extras:
            return base
        rendered = " ".join(f"{key}={extras[key]}" for key in sorted(extras))
        return f"{base} {rendered}"


def get_logger(name: str) -> logging.Logger:
    logger = logging.getLogger(name)
    if logger.handlers:
        return logger
    handler = logging.StreamHandler()
    handler.setFormatter(StructuredFormatter(fmt="%(asctime)s %(name)s %(levelname)s %(message)s"))
    logger.addHandler(handler)
    logger.setLevel(_LOG_LEVEL)
    logger.propagate = False
    return logger


__all__ = ["get_logger", "StructuredFormatter"]
