"""
Configuration loader module for gsframes.

This module provides functions to load, validate, and access the numerical
settings (tolerances, limits, probe set, seeds) from a YAML file with support
for environment variable overrides and caching.
"""

import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

import yaml
from dotenv import load_dotenv


# Global configuration cache
_config_cache: Optional[Dict[str, Any]] = None
_default_config_path = Path(__file__).resolve().parent / "config" / "config.yaml"
_ENV_PREFIX = "GSFRAMES_"

_TOLERANCE_KEYS = ["residual", "exact", "invertibility", "structural_zero", "unimodular"]
_VALID_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]
_OUTPUT_FORMATS = ["text", "machine"]


class ConfigError(ValueError):
    """Raised when the settings file is present but unusable."""
    pass


def default_config_path() -> Path:
    """Return the path of the settings file shipped with the package."""
    return _default_config_path


def load_config(config_path: Optional[str] = None, env_file: Optional[str] = None) -> Dict[str, Any]:
    """
    Load settings from a YAML file with environment variable support.

    Args:
        config_path: Path to the settings YAML file. If None, uses the packaged defaults.
        env_file: Path to .env file to load. If None, looks for .env in current directory.

    Returns:
        Dictionary containing the loaded settings.

    Raises:
        FileNotFoundError: If the settings file doesn't exist.
        yaml.YAMLError: If the YAML is malformed.
        ConfigError: If the settings fail validation.
    """
    global _config_cache

    config_file = Path(config_path) if config_path is not None else _default_config_path

    _load_environment_variables(env_file)

    if not config_file.exists():
        raise FileNotFoundError(f"Configuration file not found: {config_file}")

    try:
        with open(config_file, "r", encoding="utf-8") as f:
            config = yaml.safe_load(f)
    except yaml.YAMLError as e:
        raise yaml.YAMLError(f"Invalid YAML in configuration file: {e}")

    if not isinstance(config, dict):
        raise ConfigError("Configuration must be a dictionary")

    config = _apply_environment_overrides(config)

    if not validate_config(config):
        raise ConfigError(f"Configuration validation failed: {config_file}")

    _config_cache = config
    return config


def get_config(key: Optional[str] = None) -> Union[Dict[str, Any], Any]:
    """
    Get settings value(s), loading the packaged defaults on first use.

    Args:
        key: Key to retrieve. If None, returns the entire settings dictionary.
             Supports dot notation for nested values (e.g., 'tolerances.residual').

    Returns:
        Settings value or entire settings dictionary.

    Raises:
        KeyError: If the requested key doesn't exist.
    """
    if _config_cache is None:
        load_config()

    if key is None:
        return _config_cache

    value: Any = _config_cache
    for part in key.split("."):
        if not isinstance(value, dict) or part not in value:
            raise KeyError(f"Configuration key not found: {key}")
        value = value[part]
    return value


def get_tolerances() -> Dict[str, float]:
    """Return a copy of the tolerance section as floats."""
    return {name: float(value) for name, value in get_config("tolerances").items()}


def validate_config(config: Dict[str, Any]) -> bool:
    """
    Validate settings structure and values.

    Args:
        config: Settings dictionary to validate.

    Returns:
        True if the settings are valid, False otherwise.
    """
    if not isinstance(config, dict):
        return False

    required_sections = ["tolerances", "limits", "probes", "random", "logging", "output"]
    for section in required_sections:
        if section not in config or not isinstance(config[section], dict):
            return False

    tolerances = config["tolerances"]
    for name in _TOLERANCE_KEYS:
        value = tolerances.get(name)
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            return False
        if not value > 0:
            return False

    max_order = config["limits"].get("max_group_order")
    if not _is_positive_int(max_order):
        return False

    probes = config["probes"]
    if not _is_non_negative_int(probes.get("random_count")):
        return False
    if not _is_non_negative_int(probes.get("seed")):
        return False

    if not _is_non_negative_int(config["random"].get("default_seed")):
        return False

    logging_config = config["logging"]
    for field in ["level", "format", "file_path"]:
        if field not in logging_config:
            return False
    if logging_config["level"] not in _VALID_LEVELS:
        return False
    if not isinstance(logging_config["format"], str):
        return False
    if logging_config["file_path"] is not None and not isinstance(logging_config["file_path"], str):
        return False

    output = config["output"]
    if output.get("format") not in _OUTPUT_FORMATS:
        return False
    if not _is_positive_int(output.get("float_digits")):
        return False

    return True


def _is_positive_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value > 0


def _is_non_negative_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def _load_environment_variables(env_file: Optional[str] = None) -> None:
    """
    Load environment variables from .env file.

    Args:
        env_file: Path to .env file. If None, looks for .env in current directory.
    """
    if env_file:
        load_dotenv(env_file)
    else:
        env_path = Path(".env")
        if env_path.exists():
            load_dotenv(env_path)


def _apply_environment_overrides(config: Dict[str, Any]) -> Dict[str, Any]:
    """
    Apply environment variable overrides to the settings.

    Args:
        config: Settings dictionary.

    Returns:
        A copy of the settings with overrides applied.
    """
    config = copy.deepcopy(config)

    # Format: GSFRAMES_SECTION_KEY (e.g., GSFRAMES_TOLERANCES_STRUCTURAL_ZERO)
    for env_key, env_value in os.environ.items():
        if not env_key.startswith(_ENV_PREFIX):
            continue
        key_parts = env_key[len(_ENV_PREFIX):].lower().split("_")
        if len(key_parts) < 2:
            continue
        section = key_parts[0]
        field = "_".join(key_parts[1:])
        if section in config and isinstance(config[section], dict):
            config[section][field] = _convert_env_value(env_value)

    return config


def _convert_env_value(value: str) -> Union[str, int, float, bool, None]:
    """
    Convert environment variable string value to appropriate type.

    Args:
        value: String value from environment variable.

    Returns:
        Converted value with appropriate type.
    """
    if value.lower() in ("true", "false"):
        return value.lower() == "true"
    if value.lower() in ("null", "none"):
        return None

    try:
        return int(value)
    except ValueError:
        pass

    try:
        return float(value)
    except ValueError:
        pass

    return value


def reload_config(config_path: Optional[str] = None, env_file: Optional[str] = None) -> Dict[str, Any]:
    """
    Reload settings, clearing cache first.

    Args:
        config_path: Path to settings YAML file.
        env_file: Path to .env file to load.

    Returns:
        Reloaded settings dictionary.
    """
    clear_config_cache()
    return load_config(config_path, env_file)


def clear_config_cache() -> None:
    """Clear the settings cache."""
    global _config_cache
    _config_cache = None
