"""Logging for fanofloer.

JSON reports own stdout, so log records go to stderr (and optionally a
file). Every record carries the command of the job being run, set with
job_context() by the orchestrator; "-" outside a job.
"""

import logging
import sys
from contextlib import contextmanager
from contextvars import ContextVar
from typing import Iterator, Optional, TextIO

from app.settings import Settings, settings

ROOT_LOGGER_NAME = "fanofloer"
LOG_FORMAT = "%(asctime)s | %(levelname)-8s | %(name)s | %(job)s | %(message)s"

_current_job: ContextVar[str] = ContextVar("fanofloer_job", default="-")


class JobFilter(logging.Filter):
    """Stamp records with the current job command."""

    def filter(self, record: logging.LogRecord) -> bool:
        record.job = _current_job.get()
        return True


@contextmanager
def job_context(command: str) -> Iterator[None]:
    token = _current_job.set(command)
    try:
        yield
    finally:
        _current_job.reset(token)


def setup_logging(
    config: Optional[Settings] = None, stream: Optional[TextIO] = None
) -> logging.Logger:
    """Configure the fanofloer logger hierarchy from settings.

    Reconfiguring replaces the previous handlers.

    Args:
        config: Settings supplying log_level and log_file (default: global settings)
        stream: Console stream (default: stderr)

    Returns:
        Root logger of the application
    """
    config = config or settings
    formatter = logging.Formatter(LOG_FORMAT, datefmt="%Y-%m-%d %H:%M:%S")
    job_filter = JobFilter()

    root_logger = logging.getLogger(ROOT_LOGGER_NAME)
    root_logger.setLevel(getattr(logging, config.log_level.upper(), logging.WARNING))
    for handler in root_logger.handlers:
        handler.close()
    root_logger.handlers.clear()

    console_handler = logging.StreamHandler(stream or sys.stderr)
    console_handler.setFormatter(formatter)
    console_handler.addFilter(job_filter)
    root_logger.addHandler(console_handler)

    if config.log_file:
        config.log_file.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(config.log_file, encoding="utf-8")
        file_handler.setFormatter(formatter)
        file_handler.addFilter(job_filter)
        root_logger.addHandler(file_handler)

    return root_logger


def get_logger(name: str) -> logging.Logger:
    """Child logger "fanofloer.<name>", e.g. get_logger("toric.floer")."""
    return logging.getLogger(f"{ROOT_LOGGER_NAME}.{name}")
