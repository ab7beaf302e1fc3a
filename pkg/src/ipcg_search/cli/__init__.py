"""Command-line interface for k-IPCG generation."""

from ipcg_search.cli.main import main

__all__ = ["main"]
