"""Command-line package for the Painleve VI toolkit."""

from .app import EXIT_USAGE, PainleveCLI, UsageError

__all__ = ['PainleveCLI', 'UsageError', 'EXIT_USAGE']
