"""The discovery registry: idempotent registration and type-directed search."""

import threading
from typing import Dict, List, Optional, Union

from ..core.errors import RecordNotFound
from ..core.types import DataType
from ..utils.logger import get_logger
from .models import DiscoveryRecord
from .storage import FileRecordStorage, MemoryRecordStorage, RecordStorage


logger = get_logger(__name__)

TypeQuery = Optional[Union[DataType, str]]


def _as_type(value: TypeQuery) -> Optional[DataType]:
    if value is None or isinstance(value, DataType):
        return value
    return DataType.from_token(value.strip())


class DiscoveryRegistry:
    """One flat namespace of records over a storage backend.

    Writes are serialized; searches run over a snapshot of the index.
    """

    def __init__(self, storage: Optional[RecordStorage] = None):
        self.storage = storage if storage is not None else MemoryRecordStorage()
        self._lock = threading.Lock()
        self._index: Dict[str, DiscoveryRecord] = {}
        for record in self.storage.load_all():
            record = record if record.id else record.with_id()
            self._index.setdefault(record.id, record)
        self.logger = logger
        self.logger.info("discovery registry opened", records=len(self._index))

    @classmethod
    def from_config(cls, config) -> "DiscoveryRegistry":
        """Registry over the storage backend named in the settings."""
        if config.registry_backend == "redis":
            from ..integrations.redis_storage import RedisRecordStorage

            storage = RedisRecordStorage(
                host=config.redis_host,
                port=config.redis_port,
                db=config.redis_db,
                password=config.redis_password,
            )
            return cls(storage)
        return cls(FileRecordStorage(config.registry_log_path))

    def register(self, rec: DiscoveryRecord) -> str:
        """Add a record, returning its id.

        Registering the same (gist id, URI) pair again returns the existing id.

        Raises:
            StorageError: If the record cannot be persisted
        """
        rec = rec.with_id()
        with self._lock:
            if rec.id in self._index:
                return rec.id
            self.storage.append(rec)
            self._index[rec.id] = rec
        self.logger.info("record registered", id=rec.id, gist_id=rec.gist_id, type=rec.type_string, uri=rec.uri)
        return rec.id

    def get(self, record_id: str) -> DiscoveryRecord:
        """Look up a record by id.

        Raises:
            RecordNotFound: For unknown ids
        """
        record = self._index.get(record_id)
        if record is None:
            raise RecordNotFound(record_id)
        return record

    def all(self) -> List[DiscoveryRecord]:
        return self.search()

    def search(
        self,
        input_type: TypeQuery = None,
        output_type: TypeQuery = None,
        text: Optional[str] = None,
    ) -> List[DiscoveryRecord]:
        """Records matching every given filter, newest first.

        Args:
            input_type: Type that must appear among the inputs
            output_type: Required output type
            text: Substring of the description

        Returns:
            Matching records ordered by ``published_at`` descending

        Raises:
            UnknownType: If a type filter is an unknown token
        """
        wanted_input = _as_type(input_type)
        wanted_output = _as_type(output_type)
        with self._lock:
            snapshot = list(self._index.values())

        matches = []
        for record in snapshot:
            signature = record.signature
            if wanted_input is not None and wanted_input not in signature.inputs:
                continue
            if wanted_output is not None and signature.output != wanted_output:
                continue
            if text and text not in record.description:
                continue
            matches.append(record)

        matches.sort(key=lambda r: r.id)
        matches.sort(key=lambda r: r.published_at, reverse=True)
        return matches

    def __len__(self) -> int:
        return len(self._index)


def discovery_sink(target):
    """Adapt a registry or registry client to the publisher's discovery callback."""

    def sink(gist_id: str, description: str, type_string: str, uri: str) -> str:
        record = DiscoveryRecord(
            gist_id=gist_id,
            description=description,
            type_string=type_string,
            uri=uri,
        )
        return target.register(record)

    return sink
