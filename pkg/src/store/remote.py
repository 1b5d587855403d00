"""Remote package sources.

A remote answers two questions: which version of a gid is newest, and what
files a given version holds. Remotes that accept uploads also implement
``push``.
"""

from collections import Counter
from pathlib import Path
from typing import Dict, Protocol, runtime_checkable

from ..core.errors import PackageNotFound, RemoteUnavailable
from ..utils.logger import get_logger


logger = get_logger(__name__)

LATEST_FILE = "LATEST"


@runtime_checkable
class RemoteSource(Protocol):
    """Where packages come from when the local cache cannot answer."""

    def latest_vid(self, gid: str) -> str:
        ...

    def fetch(self, gid: str, vid: str) -> Dict[str, bytes]:
        ...


@runtime_checkable
class WritableRemote(RemoteSource, Protocol):
    def push(self, gid: str, vid: str, files: Dict[str, bytes]) -> None:
        ...


def read_tree(directory: Path) -> Dict[str, bytes]:
    """All files below ``directory`` keyed by relative posix path."""
    return {
        path.relative_to(directory).as_posix(): path.read_bytes()
        for path in sorted(directory.rglob("*"))
        if path.is_file()
    }


class DirectoryRemote:
    """Remote backed by a directory tree.

    Layout: ``<root>/<gid>/<vid>/files/*`` plus ``<root>/<gid>/LATEST``
    holding the newest vid. ``calls`` counts every remote operation and
    ``online`` can be switched off to simulate an unreachable server.
    """

    def __init__(self, root: Path):
        self.root = Path(root)
        self.online = True
        self.calls: Counter = Counter()

    def _check_online(self) -> None:
        if not self.online:
            raise RemoteUnavailable(f"directory remote {self.root} is offline")

    def latest_vid(self, gid: str) -> str:
        self.calls["latest_vid"] += 1
        self._check_online()
        latest = self.root / gid / LATEST_FILE
        if not latest.exists():
            raise PackageNotFound(gid)
        return latest.read_text(encoding="utf-8").strip()

    def fetch(self, gid: str, vid: str) -> Dict[str, bytes]:
        self.calls["fetch"] += 1
        self._check_online()
        files_dir = self.root / gid / vid / "files"
        if not files_dir.is_dir():
            raise PackageNotFound(gid, vid)
        return read_tree(files_dir)

    def push(self, gid: str, vid: str, files: Dict[str, bytes]) -> None:
        self.calls["push"] += 1
        self._check_online()
        files_dir = self.root / gid / vid / "files"
        for name, blob in files.items():
            path = files_dir / name
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_bytes(blob)
        (self.root / gid / LATEST_FILE).write_text(vid, encoding="utf-8")
        logger.info("package pushed to directory remote", gid=gid, vid=vid)

    @property
    def total_calls(self) -> int:
        return sum(self.calls.values())
