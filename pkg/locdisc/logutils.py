import logging
import sys
from typing import Union

import click

from locdisc.defaults import DEFAULT_LOGGING_DATE_FORMAT, DEFAULT_LOGGING_FORMAT

LEVEL_COLORS = {
    logging.WARNING: 'yellow',
    logging.ERROR: 'red',
    logging.CRITICAL: 'red',
}


class ColorizingStreamHandler(logging.StreamHandler):
    """Colors the first line of warnings and errors when the stream is a terminal."""

    def format(self, record):
        message = super().format(record)
        color = LEVEL_COLORS.get(record.levelno)
        isatty = getattr(self.stream, 'isatty', None)
        if color is None or not (isatty and isatty()):
            return message
        # tracebacks stay uncolored
        first, sep, rest = message.partition('\n')
        return click.style(first, fg=color) + sep + rest


def setup_loghandlers(
    level: Union[int, str, None] = None,
    date_format: str = DEFAULT_LOGGING_DATE_FORMAT,
    log_format: str = DEFAULT_LOGGING_FORMAT,
    name: str = 'locdisc',
):
    """Sets up the locdisc log handlers.

    Records below ERROR go to stdout, ERROR and above to stderr. Nothing is
    installed when some logger up the hierarchy already has a handler, e.g.
    after `DICT_CONFIG` was applied.

    Args:
        level (Union[int, str, None], optional): An integer level or a level name such as "debug".
            Defaults to None, which leaves the level untouched.
        date_format (str, optional): The date format. Defaults to DEFAULT_LOGGING_DATE_FORMAT.
        log_format (str, optional): The record format. Defaults to DEFAULT_LOGGING_FORMAT.
        name (str, optional): The logger to configure. Defaults to 'locdisc'.
    """
    logger = logging.getLogger(name)

    if not _has_effective_handler(logger):
        formatter = logging.Formatter(fmt=log_format, datefmt=date_format)
        for stream, keep in (
            (sys.stdout, lambda record: record.levelno < logging.ERROR),
            (sys.stderr, lambda record: record.levelno >= logging.ERROR),
        ):
            handler = ColorizingStreamHandler(stream=stream)
            handler.setFormatter(formatter)
            handler.addFilter(keep)
            logger.addHandler(handler)

    if level is not None:
        logger.setLevel(level if isinstance(level, int) else level.upper())


def _has_effective_handler(logger: logging.Logger) -> bool:
    while logger is not None:
        if logger.handlers:
            return True
        logger = logger.parent  # type: ignore[assignment]
    return False
