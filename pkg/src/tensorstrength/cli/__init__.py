"""Command-line surface: file formats, example families and the batch driver."""

from .main import main

__all__ = ["main"]
