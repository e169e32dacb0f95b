import sys

from loguru import logger

LOG_FORMAT = "<green>{time:HH:mm:ss.SSS}</green> | <level>{level: <7}</level> | <cyan>{name}</cyan> - {message}"


def setup_logging(level: str = "INFO") -> None:
    """
    Route all log output to a single stderr sink.

    Args:
        level: Minimum level to emit
    """
    logger.remove()
    logger.add(sys.stderr, level=level.upper(), format=LOG_FORMAT, colorize=False)
