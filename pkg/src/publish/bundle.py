"""Self-contained service bundles.

A bundle holds the serialized service and the files of every package its
graph uses, so it can be served without the package store. Two layouts
share one manifest format:

* directory: ``service.json`` plus ``packages/<gid>/<vid>/<file>``
* single file: a zip archive with ``bundle.json`` plus the same ``packages/`` tree
"""

import io
import json
import zipfile
from dataclasses import dataclass
from pathlib import Path
from typing import Any, Dict, List, Mapping

from ..core.errors import BundleError, ZooError
from ..core.service import Service
from ..runtime.registry import PrimitiveRegistry, load_package_primitives
from ..store.models import PackageManifest
from ..utils.logger import get_logger


logger = get_logger(__name__)

BUNDLE_FORMAT = 1
DIR_MANIFEST = "service.json"
FILE_MANIFEST = "bundle.json"
PACKAGES_DIR = "packages"
ZIP_TIMESTAMP = (1980, 1, 1, 0, 0, 0)


def bundle_manifest(service: Service, packages: List[PackageManifest]) -> Dict[str, Any]:
    """Manifest naming the service and the package files shipped with it."""
    return {
        "format": BUNDLE_FORMAT,
        "service": service.model_dump(mode="json"),
        "type": service.type_string,
        "packages": [
            {
                "gid": p.gid,
                "vid": p.vid,
                "content_hash": p.content_hash,
                "files": sorted(p.files),
            }
            for p in packages
        ],
    }


def manifest_bytes(manifest: Mapping[str, Any]) -> bytes:
    return json.dumps(manifest, indent=2, sort_keys=True).encode("utf-8")


def package_entries(packages: List[PackageManifest]) -> Dict[str, bytes]:
    """Bundle-relative path to content for every package file."""
    return {
        f"{PACKAGES_DIR}/{p.gid}/{p.vid}/{name}": blob
        for p in packages
        for name, blob in p.files.items()
    }


def write_zip(path: Path, entries: Mapping[str, bytes]) -> None:
    """Deterministic zip: sorted entries, fixed timestamps, deflate."""
    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", compression=zipfile.ZIP_DEFLATED, compresslevel=9) as archive:
        for name in sorted(entries):
            info = zipfile.ZipInfo(name, date_time=ZIP_TIMESTAMP)
            info.compress_type = zipfile.ZIP_DEFLATED
            info.external_attr = 0o644 << 16
            archive.writestr(info, entries[name])
    path.parent.mkdir(parents=True, exist_ok=True)
    tmp = path.with_name(f".{path.name}.tmp")
    tmp.write_bytes(buffer.getvalue())
    tmp.replace(path)


@dataclass
class LoadedBundle:
    """A bundle ready to serve: its service and the primitives it ships."""

    service: Service
    registry: PrimitiveRegistry
    manifest: Dict[str, Any]


def _read_entries(path: Path) -> Dict[str, bytes]:
    if path.is_dir():
        return {
            p.relative_to(path).as_posix(): p.read_bytes()
            for p in sorted(path.rglob("*"))
            if p.is_file()
        }
    try:
        with zipfile.ZipFile(path) as archive:
            return {name: archive.read(name) for name in archive.namelist() if not name.endswith("/")}
    except (zipfile.BadZipFile, OSError) as e:
        raise BundleError(f"cannot read bundle {path}: {e}") from e


def load_bundle(path: Path) -> LoadedBundle:
    """Load a bundle directory or bundle file.

    Args:
        path: Container bundle directory or ``.zoosvc`` file

    Returns:
        The bundled service with a registry of its primitives

    Raises:
        BundleError: If the bundle is missing, malformed or incomplete
    """
    path = Path(path)
    if not path.exists():
        raise BundleError(f"bundle {path} does not exist")

    entries = _read_entries(path)
    manifest_name = DIR_MANIFEST if path.is_dir() else FILE_MANIFEST
    if manifest_name not in entries:
        raise BundleError(f"bundle {path} has no {manifest_name}")

    try:
        manifest = json.loads(entries[manifest_name].decode("utf-8"))
        if manifest.get("format") != BUNDLE_FORMAT:
            raise BundleError(f"unsupported bundle format {manifest.get('format')!r}")
        service = Service.model_validate(manifest["service"])
    except BundleError:
        raise
    except (ValueError, KeyError, TypeError, AttributeError, ZooError) as e:
        raise BundleError(f"bundle {path} has a malformed manifest: {e}") from e

    registry = PrimitiveRegistry()
    for package in manifest.get("packages", []):
        prefix = f"{PACKAGES_DIR}/{package['gid']}/{package['vid']}/"
        files = {name[len(prefix):]: blob for name, blob in entries.items() if name.startswith(prefix)}
        missing = set(package["files"]) - set(files)
        if missing:
            raise BundleError(f"bundle {path} lacks files {sorted(missing)} of {package['gid']}")
        try:
            load_package_primitives(f"{package['gid']}/{package['vid']}", files, registry)
        except ZooError as e:
            raise BundleError(f"bundle {path}: {e}") from e

    logger.info("bundle loaded", path=str(path), service=service.name, type=service.type_string)
    return LoadedBundle(service=service, registry=registry, manifest=manifest)
