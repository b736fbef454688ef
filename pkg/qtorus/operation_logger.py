"""
Operation Logger

File-based logging for diagnostics runs with automatic rotation at 10MB.
"""

import logging
import logging.handlers
import sys
from pathlib import Path
from typing import Optional, Union

LOGGER_NAME = 'torus_operations'


def setup_logger(
    log_file: Optional[str] = None,
    level: Union[int, str] = logging.INFO,
    console: bool = False
) -> logging.Logger:
    """
    Setup and configure the operation logger.

    Args:
        log_file: Optional path to log file. Defaults to 'logs/operations.log'
        level: Logging level (name or number) applied to every handler
        console: Also echo records to stderr

    Returns:
        Configured logger instance
    """
    if log_file is None:
        log_file = "logs/operations.log"
    if isinstance(level, str):
        level = logging.getLevelName(level.upper())
        if not isinstance(level, int):
            level = logging.INFO

    log_path = Path(log_file)
    log_path.parent.mkdir(parents=True, exist_ok=True)

    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(level)

    # Remove existing handlers to avoid duplicates
    for handler in list(logger.handlers):
        handler.close()
    logger.handlers.clear()

    formatter = logging.Formatter(
        '%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        datefmt='%Y-%m-%d %H:%M:%S'
    )

    max_bytes = 10 * 1024 * 1024  # 10MB
    file_handler = logging.handlers.RotatingFileHandler(
        log_file,
        maxBytes=max_bytes,
        backupCount=1,
        encoding='utf-8'
    )
    file_handler.setLevel(level)
    file_handler.setFormatter(formatter)
    logger.addHandler(file_handler)

    if console:
        stream_handler = logging.StreamHandler(sys.stderr)
        stream_handler.setLevel(level)
        stream_handler.setFormatter(formatter)
        logger.addHandler(stream_handler)

    return logger


def get_logger() -> logging.Logger:
    """
    Get the operation logger instance.

    Library modules only ever call this; the handlers are installed by
    setup_logger (the command line does it from settings.ini). Until then
    records go to a NullHandler so importing qtorus never touches the disk.

    Returns:
        Logger instance
    """
    logger = logging.getLogger(LOGGER_NAME)
    if not logger.handlers:
        logger.addHandler(logging.NullHandler())
    return logger
