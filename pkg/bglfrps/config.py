"""Configuration management for bglfrps."""

import os
from dataclasses import fields
from pathlib import Path
from typing import Any, Optional

try:
    import tomllib
except ImportError:
    import tomli as tomllib

from .typing_ import Config

ENV_PREFIX = "BGLFRPS_"


def get_home() -> Path:
    """Directory holding the config file and run logs."""
    override = os.environ.get(f"{ENV_PREFIX}HOME")
    if override:
        return Path(override)
    return Path.home() / ".bglfrps"


def _coerce(value: Any, kind: type) -> Optional[Any]:
    """Convert a file or environment value to the field's type, or None."""
    if kind is bool:
        if isinstance(value, bool):
            return value
        if isinstance(value, str):
            return value.strip().lower() in ("1", "true", "yes", "on")
        return None
    try:
        return kind(value)
    except (TypeError, ValueError):
        return None


def get_config() -> Config:
    """
    Get configuration with precedence: env vars > config file > defaults.

    Command-line flags are applied on top of this by the CLI.

    Returns:
        Config object with current settings
    """
    # Start with defaults
    config = Config()
    kinds = {f.name: type(getattr(config, f.name)) for f in fields(config)}

    # Load from config file
    config_file = get_home() / "config.toml"
    if config_file.exists():
        try:
            with open(config_file, "rb") as f:
                file_config = tomllib.load(f)

            for name, kind in kinds.items():
                if name in file_config:
                    value = _coerce(file_config[name], kind)
                    if value is not None:
                        setattr(config, name, value)
        except Exception:
            # Ignore config file errors
            pass

    # Override with environment variables
    for name, kind in kinds.items():
        env_name = f"{ENV_PREFIX}{name.upper()}"
        if env_name in os.environ:
            value = _coerce(os.environ[env_name], kind)
            if value is not None:
                setattr(config, name, value)

    return config


def save_config(config: Config) -> None:
    """
    Save configuration to file.

    Args:
        config: Configuration to save
    """
    config_dir = get_home()
    config_dir.mkdir(parents=True, exist_ok=True)

    config_file = config_dir / "config.toml"

    with open(config_file, "w") as f:
        f.write("# bglfrps configuration\n")
        f.write("# This file is automatically generated\n\n")

        for field in fields(config):
            value = getattr(config, field.name)
            if isinstance(value, bool):
                f.write(f"{field.name} = {str(value).lower()}\n")
            elif isinstance(value, float):
                f.write(f"{field.name} = {value!r}\n")
            else:
                f.write(f"{field.name} = {value}\n")


def create_default_config() -> None:
    """Create default configuration file if it doesn't exist."""
    config_file = get_home() / "config.toml"
    if not config_file.exists():
        try:
            save_config(Config())
        except OSError:
            pass
