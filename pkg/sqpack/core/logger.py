"""
Structured logging for sqpack.

Records go to stderr; stdout is reserved for command results.
"""
import logging
import sys

from sqpack.core.config import LOG_LEVELS, settings


def setup_logger(name: str = "sqpack", level: str | None = None) -> logging.Logger:
    """
    Create a configured logger instance.

    An unknown level falls back to INFO; Settings.validate reports it.

    Args:
        name: Logger name for identification
        level: Level name, LOG_LEVEL when omitted

    Returns:
        Configured logger instance
    """
    logger = logging.getLogger(name)

    if logger.handlers:
        return logger

    level = (level or settings.LOG_LEVEL).upper()
    if level not in LOG_LEVELS:
        level = "INFO"
    logger.setLevel(level)

    handler = logging.StreamHandler(sys.stderr)
    handler.setLevel(level)

    formatter = logging.Formatter(
        fmt="%(asctime)s | %(levelname)-8s | %(name)s | %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S"
    )
    handler.setFormatter(formatter)
    logger.addHandler(handler)

    return logger


# Global logger instance
logger = setup_logger()


def log_command(name: str, detail: str = "") -> None:
    """Log a subcommand invocation."""
    msg = f"Command: {name}"
    if detail:
        msg += f" {detail}"
    logger.info(msg)


def log_result(context: str, status: str, duration_ms: float | None = None) -> None:
    """Log a finished unit of work with optional duration."""
    msg = f"Result: {context} -> {status}"
    if duration_ms is not None:
        msg += f" ({duration_ms:.0f}ms)"
    logger.info(msg)


def log_error(context: str, error: Exception) -> None:
    """Log error with context."""
    logger.error(f"Error in {context}: {type(error).__name__}: {str(error)}")
