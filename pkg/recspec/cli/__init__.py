"""Command-line surface: run files, subcommands and artifacts."""
from recspec.cli.application import get_parser, main, run

__all__ = ["get_parser", "main", "run"]
