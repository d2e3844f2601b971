"""Version information for bglfrps."""

__version__ = "0.1.0"
