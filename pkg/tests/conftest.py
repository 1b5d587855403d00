"""Pytest configuration and shared fixtures."""

from datetime import datetime, timedelta, timezone
from pathlib import Path
from typing import Dict

import pytest

from src.core.refs import VersionRef
from src.publish.backends import Publisher
from src.runtime.registry import PrimitiveRegistry, load_package_primitives
from src.store.remote import read_tree
from src.store.store import PackageStore


FIXTURES = Path(__file__).parent / "fixtures"
PACKAGES = FIXTURES / "packages"
USE_CASE_GIDS = ("aa36e", "d79e9", "6f28d", "7f32a", "a11ce")

# A PNG-looking blob fed to the use-case pipeline
SAMPLE_PNG = b"\x89PNG\r\n\x1a\nfixture:mountain-lake"


class FakeClock:
    """Settable clock for TTL tests."""

    def __init__(self, start: datetime = datetime(2024, 1, 1, tzinfo=timezone.utc)):
        self.now = start

    def __call__(self) -> datetime:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now = self.now + timedelta(seconds=seconds)


def package_files(gid: str) -> Dict[str, bytes]:
    return {
        name: blob
        for name, blob in read_tree(PACKAGES / gid).items()
        if "__pycache__" not in name and not name.endswith(".pyc")
    }


@pytest.fixture(autouse=True)
def isolated_config(monkeypatch, tmp_path):
    """Keep the user's config file and environment out of every test."""
    import src.utils.config as config_module

    monkeypatch.setenv("ZOOC_CONFIG", str(tmp_path / "no-config.json"))
    for name in ("ZOOC_STORE", "ZOOC_REGISTRY", "ZOOC_TTL", "ZOOC_REMOTE_KIND", "ZOOC_REMOTE_URL"):
        monkeypatch.delenv(name, raising=False)
    monkeypatch.setattr(config_module, "_settings", None)
    yield


@pytest.fixture
def clock():
    return FakeClock()


@pytest.fixture
def store(tmp_path, clock):
    """Store holding every fixture package under its directory name as gid."""
    store = PackageStore(tmp_path / "store", clock=clock)
    for directory in sorted(PACKAGES.iterdir()):
        store.publish_package(package_files(directory.name), gid=directory.name)
    return store


@pytest.fixture
def refs(store) -> Dict[str, VersionRef]:
    """Explicit reference of every fixture package."""
    return {
        directory.name: store.resolve(VersionRef(gid=directory.name)).ref
        for directory in PACKAGES.iterdir()
    }


@pytest.fixture
def primitives(store, refs) -> PrimitiveRegistry:
    """Registry with the primitives of every fixture package."""
    registry = PrimitiveRegistry()
    for gid, ref in refs.items():
        load_package_primitives(ref.package_id, store.resolve(ref).files, registry)
    return registry


@pytest.fixture
def publisher(store, tmp_path):
    return Publisher(store, output_dir=tmp_path / "build")


@pytest.fixture
def usecase_source() -> str:
    return (FIXTURES / "usecase.zoo").read_text(encoding="utf-8")


def expected_label(png: bytes) -> bytes:
    """French label the use-case pipeline must produce for ``png``."""
    import hashlib

    style = b"\x89PNG\r\n\x1a\nstyle:starry-night"
    blended = b"NST(SEG:" + png + b"|" + style + b")"
    english = ["cat", "dog", "bird", "car", "tree"][hashlib.sha256(blended).digest()[0] % 5]
    french = {"cat": "chat", "dog": "chien", "bird": "oiseau", "car": "voiture", "tree": "arbre"}
    return french[english].encode("utf-8")


@pytest.fixture
def pipeline(store):
    """The use-case service png_img -> fr_text."""
    from src.typecheck.checker import compose, create_service

    s = {}
    for gid in USE_CASE_GIDS:
        s.update(create_service(VersionRef(gid=gid), store))
    nst = compose([s["seg"], s["image_gen"]], s["run"])
    return compose([compose([nst], s["infer"])], s["trans"], name="pipeline")
