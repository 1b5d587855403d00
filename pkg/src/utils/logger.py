"""Logging configuration for zooc."""

import logging
import sys
from typing import Optional

import structlog


_configured = False


def setup_logger(
    level: str = "WARNING",
    json_output: bool = False,
    stream: Optional[object] = None,
) -> None:
    """Set up structlog on top of the standard logging module.

    Args:
        level: Logging level name
        json_output: Render events as JSON lines instead of console text
        stream: Output stream, defaults to stderr so stdout stays clean
    """
    global _configured

    numeric_level = getattr(logging, level.upper(), logging.WARNING)

    renderer = (
        structlog.processors.JSONRenderer()
        if json_output
        else structlog.dev.ConsoleRenderer(colors=False)
    )

    # Stdlib records and structlog events share one formatter
    formatter = structlog.stdlib.ProcessorFormatter(
        processor=renderer,
        foreign_pre_chain=[
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
        ],
    )

    handler = logging.StreamHandler(stream or sys.stderr)
    handler.setLevel(numeric_level)
    handler.setFormatter(formatter)

    root_logger = logging.getLogger()
    root_logger.handlers.clear()
    root_logger.addHandler(handler)
    root_logger.setLevel(numeric_level)

    structlog.configure(
        processors=[
            structlog.contextvars.merge_contextvars,
            structlog.stdlib.filter_by_level,
            structlog.stdlib.add_log_level,
            structlog.stdlib.add_logger_name,
            structlog.processors.TimeStamper(fmt="iso"),
            structlog.processors.format_exc_info,
            structlog.stdlib.ProcessorFormatter.wrap_for_formatter,
        ],
        logger_factory=structlog.stdlib.LoggerFactory(),
        wrapper_class=structlog.stdlib.BoundLogger,
        cache_logger_on_first_use=False,
    )
    _configured = True


def get_logger(name: str = "zooc") -> structlog.stdlib.BoundLogger:
    """Get a structured logger.

    Configures logging from the application settings on first use.

    Args:
        name: Logger name (usually __name__)

    Returns:
        Bound structlog logger
    """
    if not _configured:
        from .config import get_config

        try:
            config = get_config()
            setup_logger(level=config.log_level, json_output=config.log_json)
        except Exception:
            setup_logger()

    return structlog.stdlib.get_logger(name)
