#!/usr/bin/env python3

import logging
import os
from typing import Optional

LOGGER_NAME = "rop"
_FORMAT = "%(asctime)s [%(levelname)s] %(name)s: %(message)s"
_console_level = logging.INFO

def get_logger(name: str) -> logging.Logger:
    """Return a child of the package logger, e.g. get_logger("significance") -> rop.significance"""
    return logging.getLogger(f"{LOGGER_NAME}.{name}")

def log_init(outlog: Optional[str] = None, level: Optional[int] = None) -> logging.Logger:
    """
    Configure the package logger

    Args:
      outlog: Optional path of a log file; its directory is created if missing.
      level: Console log level; keeps the previous one when omitted. The file handler always records DEBUG.

    Returns:
      logging.Logger: the configured "rop" logger
    """
    global _console_level
    if level is not None:
        _console_level = level
    logger = logging.getLogger(LOGGER_NAME)
    logger.setLevel(logging.DEBUG)
    # re-running a command in the same process must not duplicate handlers
    for handler in list(logger.handlers):
        logger.removeHandler(handler)
        handler.close()

    console = logging.StreamHandler()
    console.setLevel(_console_level)
    console.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
    logger.addHandler(console)

    if outlog:
        log_dir = os.path.dirname(outlog)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = logging.FileHandler(outlog, mode="w")
        file_handler.setLevel(logging.DEBUG)
        file_handler.setFormatter(logging.Formatter(_FORMAT))
        logger.addHandler(file_handler)

    logger.propagate = False
    return logger
