"""Publishing services to the container, script and unikernel backends."""

import hashlib
import json
import re
import shutil
import threading
from pathlib import Path
from typing import Callable, Dict, Optional

import yaml

from ..core.errors import StoreWriteError, UnpinnedDependency
from ..core.service import Service
from ..store.store import PackageStore
from ..utils.logger import get_logger
from .bundle import (
    DIR_MANIFEST,
    FILE_MANIFEST,
    bundle_manifest,
    manifest_bytes,
    package_entries,
    write_zip,
)
from .models import Artifact, BackendKind, BackendSpec


logger = get_logger(__name__)

SCRIPT_SUFFIX = ".zoosvc"
UNIKERNEL_SUFFIX = ".mirage-config"
DEFAULT_PORT = 8080

DOCKERFILE = """\
# Generated by zooc. Build on the zooc runtime image (see the Dockerfile at
# the zooc repository root).
ARG ZOOC_IMAGE=zooc:latest
FROM ${{ZOOC_IMAGE}}
WORKDIR /app
COPY . /app/bundle
EXPOSE {port}
CMD ["python", "-m", "src.cli", "serve-bundle", "/app/bundle", "--host", "0.0.0.0", "--port", "{port}"]
"""

# A discovery sink receives (gist_id, description, type_string, uri)
DiscoverySink = Callable[[str, str, str, str], object]


def sanitize(target: str) -> str:
    """File-system safe name for a container tag such as ``alice/svc:latest``."""
    return re.sub(r"[^A-Za-z0-9._-]+", "_", target).strip("_") or "service"


def bundle_dir_name(target: str) -> str:
    """Directory name of a container bundle: the sanitized tag plus a digest of the raw tag."""
    digest = hashlib.sha256(target.encode("utf-8")).hexdigest()[:8]
    return f"{sanitize(target)}-{digest}"


class Publisher:
    """Turns services into deployable artifacts.

    Every package a published service uses must carry an explicit version
    id. Artifact contents are deterministic, so republishing identical
    content yields identical bytes and the same URI.
    """

    def __init__(
        self,
        store: PackageStore,
        output_dir: Path = Path("build"),
        discovery: Optional[DiscoverySink] = None,
        port: int = DEFAULT_PORT,
    ):
        """Initialize the publisher.

        Args:
            store: Store holding the service's packages
            output_dir: Root for container bundles and relative targets
            discovery: Called for every published artifact
            port: Port baked into container and unikernel configs
        """
        self.store = store
        self.output_dir = Path(output_dir)
        self.discovery = discovery
        self.port = port
        self._lock = threading.Lock()
        self.logger = logger

    # ------------------------------------------------------------------

    def _check(self, service: Service) -> None:
        unpinned = service.unpinned_packages()
        if unpinned:
            raise UnpinnedDependency(str(unpinned[0]))

    def output_path(self, spec: BackendSpec) -> Path:
        if spec.kind == BackendKind.CONTAINER:
            return (self.output_dir / "container" / bundle_dir_name(spec.target)).resolve()
        suffix = SCRIPT_SUFFIX if spec.kind == BackendKind.SCRIPT else UNIKERNEL_SUFFIX
        path = Path(spec.target).expanduser()
        if not path.is_absolute():
            path = self.output_dir / path
        return path.with_name(path.name + suffix).resolve()

    def uri_for(self, spec: BackendSpec) -> str:
        if spec.kind == BackendKind.CONTAINER:
            return f"container://{spec.target}"
        return self.output_path(spec).as_uri()

    def plan(self, service: Service, spec: BackendSpec) -> str:
        """Validate a deployment and return its URI without writing anything.

        Raises:
            UnpinnedDependency: If a package reference is ``latest``
        """
        self._check(service)
        return self.uri_for(spec)

    def publish_service(self, service: Service, spec: BackendSpec) -> Artifact:
        """Publish a service to one backend.

        Args:
            service: Service with explicitly versioned packages
            spec: Backend kind and target

        Returns:
            The written artifact

        Raises:
            UnpinnedDependency: If a package reference is ``latest``
            PackageNotFound: If a package cannot be resolved
            StoreWriteError: If the artifact cannot be written
        """
        self._check(service)
        packages = [self.store.resolve(ref.model_copy(update={"pin": False})) for ref in service.packages]
        manifest = bundle_manifest(service, packages)
        path = self.output_path(spec)
        writers = {
            BackendKind.CONTAINER: self._write_container,
            BackendKind.SCRIPT: self._write_script,
            BackendKind.UNIKERNEL: self._write_unikernel,
        }

        try:
            with self._lock:
                writers[spec.kind](path, service, packages, manifest, spec)
        except OSError as e:
            raise StoreWriteError(f"cannot write {spec.kind.value} artifact {path}: {e}") from e

        artifact = Artifact(kind=spec.kind, uri=self.uri_for(spec), output_path=path, manifest=manifest)
        self.logger.info(
            "service published",
            service=service.name,
            backend=spec.kind.value,
            uri=artifact.uri,
            bytes=artifact.size_bytes,
        )

        if self.discovery is not None:
            self.discovery(service.sink_package.gid, service.name, service.type_string, artifact.uri)
        return artifact

    # ------------------------------------------------------------------

    def _write_container(self, path, service, packages, manifest, spec) -> None:
        if path.exists():
            shutil.rmtree(path)
        entries: Dict[str, bytes] = package_entries(packages)
        entries[DIR_MANIFEST] = manifest_bytes(manifest)
        entries["Dockerfile"] = DOCKERFILE.format(port=self.port).encode("utf-8")
        serving = {
            "service": {"name": service.name, "type": service.type_string},
            "image": spec.target,
            "server": {"host": "0.0.0.0", "port": self.port, "bundle": "/app/bundle"},
            "endpoints": ["GET /signature", "POST /invoke", "GET /health"],
        }
        entries["serving.yaml"] = yaml.safe_dump(serving, sort_keys=True).encode("utf-8")
        for name, blob in entries.items():
            target = path / name
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_bytes(blob)

    def _write_script(self, path, service, packages, manifest, spec) -> None:
        entries = package_entries(packages)
        entries[FILE_MANIFEST] = manifest_bytes(manifest)
        write_zip(path, entries)

    def _write_unikernel(self, path, service, packages, manifest, spec) -> None:
        descriptor = {
            "format": "zooc-unikernel/1",
            "name": sanitize(spec.target),
            "entry_service": service.name,
            "type": service.type_string,
            "modules": [
                {
                    "package": f"{p.gid}/{p.vid}",
                    "content_hash": p.content_hash,
                    "scripts": sorted(p.scripts()),
                }
                for p in packages
            ],
            "graph": service.graph.model_dump(mode="json"),
            "network": {
                "interface": "service",
                "ipv4": "dhcp",
                "gateway": None,
                "port": self.port,
            },
        }
        path.parent.mkdir(parents=True, exist_ok=True)
        tmp = path.with_name(f".{path.name}.tmp")
        tmp.write_text(json.dumps(descriptor, indent=2, sort_keys=True), encoding="utf-8")
        tmp.replace(path)
