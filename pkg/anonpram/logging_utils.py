"""
anonpram/logging_utils.py

Logging for the simulator and the harness:
 - Rich console logs on standard error, so CSV written to standard output stays clean.
 - An opt-in JSON-lines debug log ('anonpram_debug.jsonl', rotated) whose records
   carry the trial context (algorithm, n, trial, seed) when a call site passes it
   through ``extra``.
 - --suppress-logs keeps only warnings and errors on the console.

The library never installs handlers on import; the CLI calls configure_logging.
"""

import atexit
import json
import logging
import logging.handlers
import os
import sys
from typing import Any, Dict, Mapping

from rich.console import Console
from rich.logging import RichHandler

PACKAGE_LOGGER = "anonpram"
DEBUG_LOG_NAME = "anonpram_debug.jsonl"

# Fields a record may carry via ``extra=trial_context(...)``.
CONTEXT_FIELDS = ("algorithm_id", "n", "trial", "seed")

_LEVELS: Mapping[str, int] = {
    "DEBUG": logging.DEBUG,
    "INFO": logging.INFO,
    "WARNING": logging.WARNING,
    "ERROR": logging.ERROR,
    "CRITICAL": logging.CRITICAL,
}
_THIRD_PARTY_LOGGERS = ("numpy", "statsmodels", "matplotlib")
_LOG_FILE_MAX_BYTES = 10 * 1024 * 1024
_LOG_FILE_BACKUP_COUNT = 3

_shutdown_registered = False


def _get_log_directory() -> str:
    """Platform log directory for anonpram, created on demand."""
    if sys.platform == "darwin":
        base = os.path.expanduser("~/Library/Logs")
    elif sys.platform == "win32":
        base = os.environ.get("LOCALAPPDATA", os.path.expanduser("~"))
    else:
        base = os.environ.get("XDG_STATE_HOME", os.path.expanduser("~/.local/state"))
    log_dir = os.path.join(base, PACKAGE_LOGGER)
    os.makedirs(log_dir, exist_ok=True)
    return log_dir


def parse_level(name: str) -> int:
    """Level for a case-insensitive name; unknown names fall back to INFO."""
    return _LEVELS.get(name.upper(), logging.INFO)


def trial_context(algorithm_id: str, n: int, trial: int, seed: int) -> Dict[str, Any]:
    """``extra`` mapping that tags a record with the trial it belongs to."""
    return {"algorithm_id": algorithm_id, "n": n, "trial": trial, "seed": seed}


class JSONFormatter(logging.Formatter):
    """One JSON object per line: level, logger, message, source, trial context."""

    def format(self, record: logging.LogRecord) -> str:
        payload: Dict[str, Any] = {
            "time": self.formatTime(record, self.datefmt),
            "level": record.levelname,
            "logger": record.name,
            "message": record.getMessage(),
            "funcName": record.funcName,
            "lineno": record.lineno,
        }
        for field in CONTEXT_FIELDS:
            value = getattr(record, field, None)
            if value is not None:
                payload[field] = value
        if record.exc_info:
            payload["exc_info"] = self.formatException(record.exc_info)
        return json.dumps(payload, ensure_ascii=False)


def _file_handler() -> logging.Handler:
    handler = logging.handlers.RotatingFileHandler(
        os.path.join(_get_log_directory(), DEBUG_LOG_NAME),
        mode="a",
        encoding="utf-8",
        maxBytes=_LOG_FILE_MAX_BYTES,
        backupCount=_LOG_FILE_BACKUP_COUNT,
    )
    handler.setLevel(logging.DEBUG)
    handler.setFormatter(JSONFormatter())
    return handler


def _console_handler(level: int) -> logging.Handler:
    return RichHandler(
        console=Console(stderr=True),
        level=level,
        markup=True,
        show_time=False,
        show_path=False,
    )


def configure_logging(
    log_level: str,
    suppress_logs: bool = False,
    enable_file_logging: bool = False,
) -> None:
    """Configure the ``anonpram`` logger.

    Args:
        log_level: level name such as 'DEBUG' or 'info'.
        suppress_logs: raise the console threshold to WARNING.
        enable_file_logging: also write the JSON debug log. Off by default for
            library use; the CLI turns it on.

    Calling it again only adjusts levels; handlers are installed once.
    """
    global _shutdown_registered

    level = parse_level(log_level)
    console_level = max(level, logging.WARNING) if suppress_logs else level

    pkg_logger = logging.getLogger(PACKAGE_LOGGER)
    pkg_logger.setLevel(level)

    if pkg_logger.handlers:
        for handler in pkg_logger.handlers:
            if isinstance(handler, RichHandler):
                handler.setLevel(console_level)
    else:
        if enable_file_logging:
            pkg_logger.addHandler(_file_handler())
        pkg_logger.addHandler(_console_handler(console_level))
        if not _shutdown_registered:
            atexit.register(_shutdown_logging)
            _shutdown_registered = True

    # numpy / statsmodels chatter only when the user asked for DEBUG.
    third_party_level = logging.DEBUG if level == logging.DEBUG else logging.WARNING
    for lib_name in _THIRD_PARTY_LOGGERS:
        logging.getLogger(lib_name).setLevel(third_party_level)


def _shutdown_logging() -> None:
    for handler in logging.getLogger(PACKAGE_LOGGER).handlers:
        handler.flush()
        handler.close()


def get_logger(name: str = __name__) -> logging.Logger:
    return logging.getLogger(name)
