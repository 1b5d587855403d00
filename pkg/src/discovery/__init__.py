"""Service discovery: the public record of published services."""

from .api import create_registry_app
from .models import DiscoveryRecord, record_id
from .registry import DiscoveryRegistry, discovery_sink
from .storage import FileRecordStorage, MemoryRecordStorage, RecordStorage

__all__ = [
    "create_registry_app",
    "DiscoveryRecord",
    "record_id",
    "DiscoveryRegistry",
    "discovery_sink",
    "FileRecordStorage",
    "MemoryRecordStorage",
    "RecordStorage",
]
