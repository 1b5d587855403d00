"""Pydantic models persisted by the package store."""

import hashlib
from datetime import datetime
from typing import Dict, List, Mapping, Optional

from pydantic import BaseModel, Field

from ..core.graph import DependencyGraph
from ..core.refs import VersionRef


CONFIG_FILE = "zoo.json"


def content_hash(files: Mapping[str, bytes]) -> str:
    """SHA-256 over (name, length, bytes) of every file, in name order."""
    digest = hashlib.sha256()
    for name in sorted(files):
        blob = files[name]
        digest.update(name.encode("utf-8"))
        digest.update(b"\0")
        digest.update(str(len(blob)).encode("ascii"))
        digest.update(b"\0")
        digest.update(blob)
    return digest.hexdigest()


class PackageManifest(BaseModel):
    """One stored package version and its files."""

    gid: str
    vid: str
    files: Dict[str, bytes]
    fetched_at: datetime
    content_hash: str
    dependency_graph: Optional[DependencyGraph] = None

    @property
    def ref(self) -> VersionRef:
        return VersionRef(gid=self.gid, version=self.vid)

    @property
    def has_config(self) -> bool:
        return CONFIG_FILE in self.files

    def scripts(self) -> Dict[str, bytes]:
        """Python script files of the package."""
        return {name: blob for name, blob in self.files.items() if name.endswith(".py")}


class ManifestRecord(BaseModel):
    """On-disk ``manifest.json`` beside a version's files."""

    gid: str
    vid: str
    content_hash: str
    fetched_at: datetime
    file_names: List[str] = Field(default_factory=list)


class CacheMeta(BaseModel):
    """Per-gid metadata: which version is "latest" here, and since when."""

    latest_vid: Optional[str] = None
    latest_downloaded_at: Optional[datetime] = None
    ttl_seconds: int = Field(default=600, gt=0)
    publish_count: int = Field(default=0, ge=0)

    def age_seconds(self, now: datetime) -> Optional[float]:
        if self.latest_downloaded_at is None:
            return None
        return (now - self.latest_downloaded_at).total_seconds()
