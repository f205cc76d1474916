"""Logging setup for mirs."""

import logging
import datetime
import os
import sys

from src.config import LOG_DIR, LOG_DIR_ENV, MAX_LOG_FILES


def get_logs_dir():
    """Return the log directory, honoring the MIRS_LOG_DIR override."""
    return os.environ.get(LOG_DIR_ENV, LOG_DIR)


def get_logger(name=None, console_level=logging.WARNING):
    """Get a logger instance with proper configuration.

    Args:
        name: Optional name for the logger, defaults to the root logger
        console_level: Level of the stderr handler; stdout carries command output

    Returns:
        A configured logger instance
    """
    # Get the logger - either named or root
    logger = logging.getLogger(name)

    # Only configure if handlers haven't been set up
    if not logger.handlers:
        logger.setLevel(logging.DEBUG)

        logs_dir = get_logs_dir()
        if not os.path.exists(logs_dir):
            os.makedirs(logs_dir)

        current_time = datetime.datetime.now().strftime("%Y%m%d_%H%M%S")
        log_filename = os.path.join(logs_dir, f"mirs_session_{current_time}.log")

        # Set up file handler for debug+ messages
        file_handler = logging.FileHandler(log_filename)
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(
            logging.Formatter('%(asctime)s - %(name)s - %(levelname)s - %(message)s')
        )

        console_handler = logging.StreamHandler(sys.stderr)
        console_handler.setLevel(console_level)
        console_handler.setFormatter(
            logging.Formatter('%(levelname)s: %(message)s')
        )

        logger.addHandler(file_handler)
        logger.addHandler(console_handler)

        logger.info(f"Logger initialized. Logging to: {log_filename}")

    return logger


def set_console_level(level, name=None):
    """Change the stderr handler level of an already configured logger."""
    for handler in logging.getLogger(name).handlers:
        if isinstance(handler, logging.StreamHandler) and not isinstance(handler, logging.FileHandler):
            handler.setLevel(level)


def rotate_logs(max_logs=MAX_LOG_FILES):
    """Keep only the newest max_logs session logs."""
    logs_dir = get_logs_dir()
    if not os.path.exists(logs_dir):
        return
    log_files = sorted(f for f in os.listdir(logs_dir) if f.endswith('.log'))
    for old_log in log_files[:-max_logs] if len(log_files) > max_logs else []:
        try:
            os.remove(os.path.join(logs_dir, old_log))
        except OSError as e:
            logging.getLogger(__name__).warning(f"Error removing log file {old_log}: {str(e)}")
