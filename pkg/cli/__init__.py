"""Command-line interface for bglfrps."""
