"""Clients for external services: package remotes, discovery registries, Redis."""

from .http_remote import HttpRemote
from .redis_storage import RedisRecordStorage
from .registry_client import RegistryClient

__all__ = [
    "HttpRemote",
    "RedisRecordStorage",
    "RegistryClient",
]
