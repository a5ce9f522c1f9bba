"""
Logging Configuration
Logging setup shared by the CLI, the API and sweep worker processes
"""

import logging
import sys
from pathlib import Path
from typing import Optional

from config.settings import settings

ROOT_LOGGER = "persuasion_toolkit"

# sweeps fan out to worker processes; the pid tells their records apart
LOG_FORMAT = "%(asctime)s - %(name)s - %(process)d - %(levelname)s - %(message)s"


def setup_logging(level: Optional[str] = None) -> logging.Logger:
    """Configure the toolkit logger.

    Records go to standard error so that documents and CSV on standard
    out stay machine-readable. With LOG_FILE set they are also appended
    there. Python warnings (SciPy's OptimizeWarning among them) are
    routed through logging.
    """
    logger = logging.getLogger(ROOT_LOGGER)
    logger.setLevel(getattr(logging, (level or settings.LOG_LEVEL).upper()))

    for handler in logger.handlers[:]:
        logger.removeHandler(handler)
        handler.close()

    formatter = logging.Formatter(LOG_FORMAT)

    console_handler = logging.StreamHandler(sys.stderr)
    console_handler.setFormatter(formatter)
    logger.addHandler(console_handler)

    if settings.LOG_FILE:
        log_file = Path(settings.LOG_FILE)
        log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file)
        file_handler.setFormatter(formatter)
        logger.addHandler(file_handler)

    logging.captureWarnings(True)
    warnings_logger = logging.getLogger("py.warnings")
    warnings_logger.handlers = logger.handlers[:]
    warnings_logger.propagate = False

    return logger


def get_logger(name: str = ROOT_LOGGER) -> logging.Logger:
    return logging.getLogger(name)


setup_logging()
