"""
Logging configuration module for gsframes.

Console output goes to stderr so that verification reports own stdout; an
optional file handler is added when the CLI is given a log file. Only the
handlers installed here are ever removed, so handlers attached to the root
logger by a host application or test runner survive setup and reset.
"""

import logging
import sys
from pathlib import Path
from typing import List, Optional

_DEFAULT_LOG_FORMAT = "%(asctime)s - %(name)s - %(levelname)s - %(message)s"
_DATE_FORMAT = "%Y-%m-%d %H:%M:%S"
_VALID_LEVELS = ["DEBUG", "INFO", "WARNING", "ERROR", "CRITICAL"]

_installed: List[logging.Handler] = []


def _level(name: str, what: str) -> int:
    if name.upper() not in _VALID_LEVELS:
        raise ValueError(f"Invalid {what}: {name}. Must be one of: {_VALID_LEVELS}")
    return getattr(logging, name.upper())


def _remove_installed() -> None:
    root_logger = logging.getLogger()
    while _installed:
        handler = _installed.pop()
        root_logger.removeHandler(handler)
        handler.close()


def setup_logging(
    log_file: Optional[str] = None,
    log_level: str = "WARNING",
    console_level: Optional[str] = None,
    log_format: Optional[str] = None,
) -> None:
    """
    Install a stderr console handler and, optionally, a file handler on the root logger.

    Calling it again replaces the handlers of the previous call.

    Args:
        log_file: Path to log file. If None, only console logging is enabled.
        log_level: Minimum level for file logging.
        console_level: Minimum level for console logging. If None, uses log_level.
        log_format: Format string. If None, uses the default format.

    Raises:
        ValueError: If log_level or console_level is not a valid logging level.
    """
    file_level = _level(log_level, "log level")
    console_log_level = _level(console_level or log_level, "console log level")
    formatter = logging.Formatter(log_format or _DEFAULT_LOG_FORMAT, _DATE_FORMAT)

    _remove_installed()
    root_logger = logging.getLogger()
    root_logger.setLevel(min(file_level, console_log_level))

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setLevel(console_log_level)
    console_handler.setFormatter(formatter)
    _installed.append(console_handler)

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_path, mode='a', encoding='utf-8')
        file_handler.setLevel(file_level)
        file_handler.setFormatter(formatter)
        _installed.append(file_handler)

    for handler in _installed:
        root_logger.addHandler(handler)


def get_logger(name: str) -> logging.Logger:
    return logging.getLogger(name)


def reset_logging() -> None:
    """Close and detach the installed handlers and restore the WARNING root level."""
    _remove_installed()
    logging.getLogger().setLevel(logging.WARNING)
