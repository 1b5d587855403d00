"""Local package store and resolver.

On-disk layout::

    <root>/<gid>/meta.json             CacheMeta
    <root>/<gid>/<vid>/manifest.json   ManifestRecord
    <root>/<gid>/<vid>/files/*         package files
    <root>/<gid>/<vid>/graph.json      pinned dependency graph

Explicit versions are immutable and never need the remote once cached.
``latest`` is answered from the cache while its metadata is younger than the
TTL, and refreshed from the remote afterwards.
"""

import json
import os
import tempfile
import threading
from contextlib import contextmanager
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable, Dict, Iterator, List, Mapping, Optional

from filelock import FileLock, Timeout

from ..core.errors import (
    GraphMissing,
    InvalidConfig,
    InvalidRemoteContent,
    PackageNotFound,
    PinOnLatest,
    RemoteUnavailable,
    StoreWriteError,
)
from ..core.graph import DependencyGraph
from ..core.refs import GID_PATTERN, VID_PATTERN, VersionRef
from ..utils.logger import get_logger
from .models import CONFIG_FILE, CacheMeta, ManifestRecord, PackageManifest, content_hash
from .remote import RemoteSource, WritableRemote, read_tree


logger = get_logger(__name__)

DEFAULT_TTL_SECONDS = 600
LOCK_FILE = ".zooc.lock"
LOCK_TIMEOUT_SECONDS = 30.0


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class PackageStore:
    """Package cache rooted at a directory, optionally backed by a remote."""

    def __init__(
        self,
        root: Path,
        ttl_seconds: int = DEFAULT_TTL_SECONDS,
        remote: Optional[RemoteSource] = None,
        read_only: bool = False,
        clock: Callable[[], datetime] = utcnow,
    ):
        """Initialize the store.

        Args:
            root: Store root directory, created unless read-only
            ttl_seconds: How long a cached "latest" answer stays fresh
            remote: Remote source consulted on cache misses
            read_only: Reject publishing and never write the cache
            clock: Source of the current time
        """
        if ttl_seconds <= 0:
            raise ValueError("ttl_seconds must be positive")
        self.root = Path(root)
        self.ttl_seconds = ttl_seconds
        self.remote = remote
        self.read_only = read_only
        self.clock = clock
        self._thread_lock = threading.RLock()
        self._file_lock = FileLock(str(self.root / LOCK_FILE), timeout=LOCK_TIMEOUT_SECONDS)

        if not read_only:
            self.root.mkdir(parents=True, exist_ok=True)

    @contextmanager
    def write_lock(self) -> Iterator[None]:
        """Exclusive writer lock on the store root, shared by every store and process using it.

        Raises:
            StoreWriteError: If the lock is not acquired within the timeout
        """
        with self._thread_lock:
            try:
                self._file_lock.acquire()
            except Timeout as e:
                raise StoreWriteError(f"store {self.root} is locked by another writer") from e
            try:
                yield
            finally:
                self._file_lock.release()

    @classmethod
    def from_config(cls, config, read_only: bool = False) -> "PackageStore":
        """Build a store and its remote from application settings."""
        remote: Optional[RemoteSource] = None
        if config.remote_kind == "dir" and config.remote_url:
            from .remote import DirectoryRemote

            remote = DirectoryRemote(Path(config.remote_url).expanduser())
        elif config.remote_kind == "http" and config.remote_url:
            from ..integrations.http_remote import HttpRemote

            remote = HttpRemote(
                config.remote_url,
                timeout=config.remote_timeout,
                retry_attempts=config.remote_retry_attempts,
            )
        return cls(
            config.ensure_store_root() if not read_only else config.store_root,
            ttl_seconds=config.ttl_seconds,
            remote=remote,
            read_only=read_only,
        )

    # ------------------------------------------------------------------
    # Resolution
    # ------------------------------------------------------------------

    def resolve(self, ref: VersionRef, now: Optional[datetime] = None) -> PackageManifest:
        """Resolve a reference to a stored package version.

        Args:
            ref: Package reference
            now: Current time, defaults to the store clock

        Returns:
            Package manifest, with the pinned graph attached when ``ref.pin``

        Raises:
            PackageNotFound: If neither cache nor remote know the version
            RemoteUnavailable: If a fetch is required and the remote is down
            PinOnLatest: If a latest reference carries the pin flag
        """
        if ref.pin and ref.is_latest:
            raise PinOnLatest(ref.gid)

        now = now or self.clock()
        vid = ref.version if ref.version is not None else self._resolve_latest_vid(ref.gid, now)
        manifest = self._load_or_fetch(ref.gid, vid, now)

        if ref.pin:
            graph_path = self._version_dir(ref.gid, vid) / "graph.json"
            if graph_path.exists():
                manifest.dependency_graph = DependencyGraph.model_validate_json(
                    graph_path.read_text(encoding="utf-8")
                )
        return manifest

    def _resolve_latest_vid(self, gid: str, now: datetime) -> str:
        meta = self._read_meta(gid)
        cached = meta.latest_vid if meta else None
        age = meta.age_seconds(now) if meta else None

        if cached and age is not None and age < self.ttl_seconds:
            logger.debug("latest served from cache", gid=gid, vid=cached, age=age)
            return cached

        if self.remote is None:
            if cached:
                return cached
            raise PackageNotFound(gid)

        try:
            vid = self.remote.latest_vid(gid)
        except RemoteUnavailable:
            if not cached:
                raise
            logger.warning("remote unavailable, serving stale latest", gid=gid, vid=cached)
            return cached
        except PackageNotFound:
            if not cached:
                raise
            logger.warning("remote does not know package, serving cached latest", gid=gid)
            return cached
        if not VID_PATTERN.match(vid):
            raise InvalidRemoteContent(f"latest version id {vid!r} for {gid}")

        self._load_or_fetch(gid, vid, now)
        if not self.read_only:
            with self.write_lock():
                meta = self._read_meta(gid) or CacheMeta(ttl_seconds=self.ttl_seconds)
                self._write_meta(
                    gid,
                    meta.model_copy(update={
                        "latest_vid": vid,
                        "latest_downloaded_at": now,
                        "ttl_seconds": self.ttl_seconds,
                    }),
                )
        if vid != cached:
            logger.info("latest refreshed from remote", gid=gid, previous=cached, vid=vid)
        return vid

    def _load_or_fetch(self, gid: str, vid: str, now: datetime) -> PackageManifest:
        manifest = self._load_local(gid, vid)
        if manifest is not None:
            return manifest

        if self.remote is None:
            raise PackageNotFound(gid, vid)

        files = self.remote.fetch(gid, vid)
        for name in files:
            try:
                _check_file_name(name)
            except InvalidConfig as e:
                raise InvalidRemoteContent(f"{gid}/{vid}: {e.message}") from e
        manifest = PackageManifest(
            gid=gid, vid=vid, files=files, fetched_at=now, content_hash=content_hash(files)
        )
        if not self.read_only:
            with self.write_lock():
                self._write_version(manifest)
        logger.info("package fetched", gid=gid, vid=vid, files=len(files))
        return manifest

    def _load_local(self, gid: str, vid: str) -> Optional[PackageManifest]:
        version_dir = self._version_dir(gid, vid)
        record_path = version_dir / "manifest.json"
        if not record_path.exists():
            return None
        record = ManifestRecord.model_validate_json(record_path.read_text(encoding="utf-8"))
        files = read_tree(version_dir / "files")
        return PackageManifest(
            gid=gid,
            vid=vid,
            files=files,
            fetched_at=record.fetched_at,
            content_hash=record.content_hash,
        )

    # ------------------------------------------------------------------
    # Publishing
    # ------------------------------------------------------------------

    def publish_package(
        self,
        files: Mapping[str, bytes],
        gid: Optional[str] = None,
        service_package: bool = True,
        graph: Optional[DependencyGraph] = None,
        push: bool = False,
        now: Optional[datetime] = None,
    ) -> VersionRef:
        """Store a new package version.

        Args:
            files: File name to content
            gid: Package id; derived from the content hash when omitted
            service_package: Require a ``zoo.json`` config
            graph: Dependency graph to pin beside the new version
            push: Also upload to the remote, when it accepts uploads
            now: Publication time

        Returns:
            Explicit reference to the new version

        Raises:
            StoreWriteError: If the store is read-only or the write fails
            InvalidConfig: If a service package lacks a valid ``zoo.json``
        """
        if self.read_only:
            raise StoreWriteError(f"store {self.root} is read-only")

        files = {name: bytes(blob) for name, blob in files.items()}
        for name in files:
            _check_file_name(name)
        if service_package:
            _check_config(files)

        digest = content_hash(files)
        gid = gid or digest[:12]
        if not GID_PATTERN.match(gid):
            raise InvalidConfig(f"gid must match [a-z0-9]+, got {gid!r}")
        now = now or self.clock()

        with self.write_lock():
            meta = self._read_meta(gid) or CacheMeta(ttl_seconds=self.ttl_seconds)
            counter = meta.publish_count + 1
            vid = f"{digest[:10]}-{counter}"
            manifest = PackageManifest(
                gid=gid, vid=vid, files=files, fetched_at=now, content_hash=digest
            )
            self._write_version(manifest)
            self._write_meta(
                gid,
                meta.model_copy(update={
                    "latest_vid": vid,
                    "latest_downloaded_at": now,
                    "publish_count": counter,
                    "ttl_seconds": self.ttl_seconds,
                }),
            )
            ref = VersionRef(gid=gid, version=vid)
            if graph is not None:
                self.save_dependency_graph(ref, graph)

        if push:
            if isinstance(self.remote, WritableRemote):
                self.remote.push(gid, vid, files)
            else:
                logger.warning("remote does not accept uploads, package kept local", gid=gid)

        logger.info("package published", gid=gid, vid=vid, content_hash=digest[:10])
        return ref

    # ------------------------------------------------------------------
    # Pinned dependency graphs
    # ------------------------------------------------------------------

    def save_dependency_graph(self, ref: VersionRef, graph: DependencyGraph) -> None:
        """Pin a dependency graph beside an explicit package version.

        Raises:
            PinOnLatest: For latest references
            PackageNotFound: If the version is not in the store
            StoreWriteError: If the store is read-only
        """
        if ref.is_latest:
            raise PinOnLatest(ref.gid)
        if self.read_only:
            raise StoreWriteError(f"store {self.root} is read-only")
        version_dir = self._version_dir(ref.gid, ref.version)
        if not (version_dir / "manifest.json").exists():
            raise PackageNotFound(ref.gid, ref.version)
        with self.write_lock():
            _atomic_write(version_dir / "graph.json", graph.model_dump_json(indent=2).encode("utf-8"))
        logger.info("dependency graph pinned", gid=ref.gid, vid=ref.version)

    def load_dependency_graph(self, ref: VersionRef) -> DependencyGraph:
        """Load the pinned graph of an explicit version.

        Raises:
            PinOnLatest: For latest references
            GraphMissing: If no graph was ever pinned
        """
        if ref.is_latest:
            raise PinOnLatest(ref.gid)
        graph_path = self._version_dir(ref.gid, ref.version) / "graph.json"
        if not graph_path.exists():
            raise GraphMissing(ref.gid, ref.version)
        return DependencyGraph.model_validate_json(graph_path.read_text(encoding="utf-8"))

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------

    def meta(self, gid: str) -> Optional[CacheMeta]:
        return self._read_meta(gid)

    def list_versions(self, gid: str) -> List[str]:
        gid_dir = self.root / gid
        if not gid_dir.is_dir():
            return []
        return sorted(p.name for p in gid_dir.iterdir() if (p / "manifest.json").exists())

    def has_version(self, gid: str, vid: str) -> bool:
        return (self._version_dir(gid, vid) / "manifest.json").exists()

    # ------------------------------------------------------------------
    # Disk helpers
    # ------------------------------------------------------------------

    def _version_dir(self, gid: str, vid: str) -> Path:
        return self.root / gid / vid

    def _read_meta(self, gid: str) -> Optional[CacheMeta]:
        path = self.root / gid / "meta.json"
        if not path.exists():
            return None
        return CacheMeta.model_validate_json(path.read_text(encoding="utf-8"))

    def _write_meta(self, gid: str, meta: CacheMeta) -> None:
        _atomic_write(self.root / gid / "meta.json", meta.model_dump_json(indent=2).encode("utf-8"))

    def _write_version(self, manifest: PackageManifest) -> None:
        version_dir = self._version_dir(manifest.gid, manifest.vid)
        try:
            for name, blob in manifest.files.items():
                _atomic_write(version_dir / "files" / name, blob)
            record = ManifestRecord(
                gid=manifest.gid,
                vid=manifest.vid,
                content_hash=manifest.content_hash,
                fetched_at=manifest.fetched_at,
                file_names=sorted(manifest.files),
            )
            # Written last: a version exists once its manifest does
            _atomic_write(version_dir / "manifest.json", record.model_dump_json(indent=2).encode("utf-8"))
        except OSError as e:
            raise StoreWriteError(f"cannot write {manifest.gid}/{manifest.vid}: {e}") from e


def _atomic_write(path: Path, data: bytes) -> None:
    tmp_name = None
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        with tempfile.NamedTemporaryFile(
            dir=path.parent, prefix=f".{path.name}.", suffix=".tmp", delete=False
        ) as tmp:
            tmp_name = tmp.name
            tmp.write(data)
        os.replace(tmp_name, path)
    except OSError as e:
        if tmp_name is not None and os.path.exists(tmp_name):
            os.unlink(tmp_name)
        raise StoreWriteError(f"cannot write {path}: {e}") from e


def _check_file_name(name: str) -> None:
    parts = Path(name).parts
    if not name or Path(name).is_absolute() or ".." in parts or name.startswith("."):
        raise InvalidConfig(f"invalid package file name {name!r}")


def _check_config(files: Dict[str, bytes]) -> None:
    if CONFIG_FILE not in files:
        raise InvalidConfig(f"service package has no {CONFIG_FILE}")
    try:
        config = json.loads(files[CONFIG_FILE].decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise InvalidConfig(f"{CONFIG_FILE} is not valid JSON: {e}") from e
    if not isinstance(config, dict):
        raise InvalidConfig(f"{CONFIG_FILE} must be a JSON object")
