"""Service creation from packages and type-checked composition."""

from .checker import ServiceDict, compose, create_service, save_composed
from .config import parse_config, read_config

__all__ = [
    "ServiceDict",
    "compose",
    "create_service",
    "save_composed",
    "parse_config",
    "read_config",
]
