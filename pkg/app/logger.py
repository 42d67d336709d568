import sys
from datetime import datetime
from typing import Optional

from loguru import logger as _logger

from app.config import PROJECT_ROOT, config


_print_level = "INFO"


def define_log_level(
    print_level: str = "INFO",
    logfile_level: str = "DEBUG",
    name: Optional[str] = None,
    log_dir: Optional[str] = None,
):
    """Adjust the log level to above level, optionally mirroring into a file"""
    global _print_level
    _print_level = print_level

    current_date = datetime.now()
    formatted_date = current_date.strftime("%Y%m%d%H%M%S")
    log_name = (
        f"{name}_{formatted_date}" if name else formatted_date
    )  # name a log with prefix name

    _logger.remove()
    _logger.add(sys.stderr, level=print_level)
    if log_dir:
        _logger.add(
            (PROJECT_ROOT / log_dir / f"{log_name}.log")
            if not log_dir.startswith("/")
            else f"{log_dir}/{log_name}.log",
            level=logfile_level,
        )
    return _logger


logger = define_log_level(config.log_level)


if __name__ == "__main__":
    logger.info("Starting simulator")
    logger.debug("Debug message")
    logger.warning("Warning message")
    logger.error("Error message")

    try:
        raise ValueError("Test error")
    except Exception as e:
        logger.exception(f"An error occurred: {e}")
