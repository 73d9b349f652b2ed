"""Logging configuration for coopnet."""

from __future__ import annotations

import logging


LogLevel = int | str


def get_logger(name: str, log_level: LogLevel | None = None) -> logging.Logger:
    """Get a logger below the coopnet namespace.

    Args:
        name: Dotted name relative to the package (``"analysis.metrics"``)
        log_level: Optional level to set on the returned logger

    Returns:
        The configured logger
    """
    logger = logging.getLogger(f"coopnet.{name}")
    if log_level is not None:
        logger.setLevel(log_level)
    return logger


def configure_logging(log_level: LogLevel = logging.WARNING) -> None:
    """Install a basic stderr handler for command-line use."""
    logging.basicConfig(
        level=log_level,
        format="%(asctime)s %(levelname)s %(name)s %(message)s",
        datefmt="%Y-%m-%d %H:%M:%S",
    )
