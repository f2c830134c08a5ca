import os
import sys
from pathlib import Path

from loguru import logger

LOG_LEVEL_ENV = "REITHOM_LOG"
LOG_DIR_ENV = "REITHOM_LOG_DIR"


def _log_dir() -> Path:
    override = os.getenv(LOG_DIR_ENV)
    return Path(override) if override else Path.home() / ".reithom" / "logs"


def setup_logger() -> Path | None:
    """File sink under ``~/.reithom/logs`` plus a stderr sink when ``REITHOM_LOG`` is set.

    Returns the log file, or None when the directory cannot be created.
    """
    logger.remove()
    log_file: Path | None = _log_dir() / "reithom.log"
    try:
        log_file.parent.mkdir(parents=True, exist_ok=True)
        logger.add(log_file, rotation="10 MB", retention="7 days", compression="zip")
    except OSError:
        log_file = None

    level = os.getenv(LOG_LEVEL_ENV)
    if level:
        logger.add(sys.stderr, level=level.upper())
    return log_file
