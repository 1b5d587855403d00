"""Utility modules for configuration and logging."""

from .config import Settings, get_config, reload_config
from .logger import get_logger, setup_logger

__all__ = ["Settings", "get_config", "reload_config", "get_logger", "setup_logger"]
