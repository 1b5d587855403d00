"""Persistence for discovery records.

The default storage is a JSON-lines append log: every registration appends
one line, and opening the log compacts it to one line per record id.
"""

import json
import os
import threading
from pathlib import Path
from typing import List, Protocol, runtime_checkable

from pydantic import ValidationError

from ..core.errors import StorageError, ZooError
from ..utils.logger import get_logger
from .models import DiscoveryRecord


logger = get_logger(__name__)


@runtime_checkable
class RecordStorage(Protocol):
    """Where registered records live."""

    def load_all(self) -> List[DiscoveryRecord]:
        ...

    def append(self, record: DiscoveryRecord) -> None:
        ...


class MemoryRecordStorage:
    """Non-persistent storage for tests and throwaway registries."""

    def __init__(self) -> None:
        self.records: List[DiscoveryRecord] = []

    def load_all(self) -> List[DiscoveryRecord]:
        return list(self.records)

    def append(self, record: DiscoveryRecord) -> None:
        self.records.append(record)


class FileRecordStorage:
    """Append-log storage in a single JSON-lines file."""

    def __init__(self, path: Path):
        """Open the log, compacting it.

        Args:
            path: Log file, created on first write

        Raises:
            StorageError: If the log cannot be read or rewritten
        """
        self.path = Path(path)
        self._lock = threading.Lock()
        self._records = self._read()
        self._compact()

    def _read(self) -> List[DiscoveryRecord]:
        if not self.path.exists():
            return []
        records = {}
        try:
            lines = self.path.read_text(encoding="utf-8").splitlines()
        except OSError as e:
            raise StorageError(f"cannot read registry log {self.path}: {e}") from e

        for number, line in enumerate(lines, start=1):
            if not line.strip():
                continue
            try:
                record = DiscoveryRecord.model_validate(json.loads(line))
            except (ValueError, ValidationError, ZooError) as e:
                logger.warning("skipping corrupt registry line", path=str(self.path), line=number, error=str(e))
                continue
            if record.id is None:
                record = record.with_id()
            records.setdefault(record.id, record)
        return list(records.values())

    def _compact(self) -> None:
        if not self.path.exists():
            return
        tmp = self.path.with_name(f".{self.path.name}.tmp")
        try:
            with open(tmp, "w", encoding="utf-8") as f:
                for record in self._records:
                    f.write(record.model_dump_json() + "\n")
            os.replace(tmp, self.path)
        except OSError as e:
            raise StorageError(f"cannot compact registry log {self.path}: {e}") from e

    def load_all(self) -> List[DiscoveryRecord]:
        with self._lock:
            return list(self._records)

    def append(self, record: DiscoveryRecord) -> None:
        with self._lock:
            try:
                self.path.parent.mkdir(parents=True, exist_ok=True)
                with open(self.path, "a", encoding="utf-8") as f:
                    f.write(record.model_dump_json() + "\n")
                    f.flush()
            except OSError as e:
                raise StorageError(f"cannot append to registry log {self.path}: {e}") from e
            self._records.append(record)
