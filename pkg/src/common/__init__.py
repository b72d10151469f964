"""Shared utilities: configuration, logging, errors and report storage."""

from .config import load_config

__all__ = ["load_config"]
