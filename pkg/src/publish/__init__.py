"""Publishing services as container bundles, script bundles and unikernel descriptors."""

from .backends import Publisher, sanitize
from .bundle import LoadedBundle, load_bundle
from .models import Artifact, BackendKind, BackendSpec
from .report import SizeRow, artifact_size_report, size_report_csv
from .server import ServerHandle, serve

__all__ = [
    "Publisher",
    "sanitize",
    "LoadedBundle",
    "load_bundle",
    "Artifact",
    "BackendKind",
    "BackendSpec",
    "SizeRow",
    "artifact_size_report",
    "size_report_csv",
    "ServerHandle",
    "serve",
]
