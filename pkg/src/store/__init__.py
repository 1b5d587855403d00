"""Package store: version references, the local cache and remote sources."""

from ..core.refs import VersionRef
from .models import CONFIG_FILE, CacheMeta, PackageManifest, content_hash
from .remote import DirectoryRemote, RemoteSource, WritableRemote
from .store import PackageStore

__all__ = [
    "VersionRef",
    "CONFIG_FILE",
    "CacheMeta",
    "PackageManifest",
    "content_hash",
    "DirectoryRemote",
    "RemoteSource",
    "WritableRemote",
    "PackageStore",
]
