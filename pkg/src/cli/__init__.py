"""Command-line front end."""

from .handler import main

__all__ = ["main"]
