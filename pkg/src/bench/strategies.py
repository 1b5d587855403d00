"""Workloads timing one ndarray service under three execution strategies.

The same service runs in-process, through its HTTP app and from a
published script bundle; each strategy is checked against the in-process
result.
"""

import json
import shutil
import tempfile
from pathlib import Path
from typing import List, Optional

import httpx
import numpy as np

from ..core.errors import BenchOracleError
from ..core.refs import VersionRef
from ..core.types import NDARRAY
from ..core.values import TypedValue, canonical_bytes, decode_value, encode_value
from ..publish.backends import Publisher
from ..publish.bundle import load_bundle
from ..publish.models import BackendKind, BackendSpec
from ..publish.report import SizeRow, artifact_size_report, size_report_csv
from ..publish.server import ServerHandle
from ..runtime.executor import execute
from ..runtime.ndarray import Ndarray
from ..runtime.registry import PrimitiveRegistry, load_package_primitives
from ..store.store import PackageStore
from ..typecheck.checker import create_service
from .workloads import Param, Trial, register_workload


SCALE_PACKAGE = {
    "zoo.json": json.dumps({"scale": "ndarray -> ndarray"}).encode("utf-8"),
    "scale.py": (
        b"def scale(a):\n"
        b"    return type(a).from_numpy(a.to_numpy() * 2.0)\n"
    ),
}

# JSON-encoding a million floats per request measures the codec, not the strategy
MAX_WIRE_SIZE = 10 ** 4


def _wire_sizes(cfg) -> List[Param]:
    return [size for size in cfg.sizes if size <= MAX_WIRE_SIZE]


class _Fixture:
    """A scratch store holding the scale package and its service."""

    def __init__(self, n: int, seed: int):
        self.root = Path(tempfile.mkdtemp(prefix="zooc-bench-"))
        self.store = PackageStore(self.root / "store")
        ref = self.store.publish_package(SCALE_PACKAGE, gid="benchscale")
        manifest = self.store.resolve(ref)

        self.service = create_service(VersionRef(gid="benchscale"), self.store)["scale"]
        self.registry = PrimitiveRegistry()
        load_package_primitives(ref.package_id, manifest.files, self.registry)

        values = np.random.default_rng(seed + n).uniform(-1.0, 1.0, size=n)
        self.input = TypedValue(NDARRAY, Ndarray.from_numpy(values))
        self.expected = canonical_bytes(execute(self.service, [self.input], self.registry))

    def check(self, strategy: str, n: Param, result: TypedValue) -> None:
        if canonical_bytes(result) != self.expected:
            raise BenchOracleError(f"{strategy}[{n}] differs from the in-process result")

    def close(self) -> None:
        shutil.rmtree(self.root, ignore_errors=True)


@register_workload("invoke_inprocess")
def inprocess_workload(n: int, cfg) -> Trial:
    fixture = _Fixture(int(n), cfg.seed)
    return Trial(
        run=lambda: execute(fixture.service, [fixture.input], fixture.registry),
        check=lambda result: fixture.check("invoke_inprocess", n, result),
        close=fixture.close,
    )


@register_workload("invoke_http", params=_wire_sizes)
def http_workload(n: int, cfg) -> Trial:
    from ..api.main import create_app

    fixture = _Fixture(int(n), cfg.seed)
    handle = ServerHandle(create_app(fixture.service, fixture.registry)).start()
    client = httpx.Client(base_url=handle.url, timeout=30.0)
    body = {"inputs": [encode_value(fixture.input)]}

    def run() -> TypedValue:
        response = client.post("/invoke", json=body)
        response.raise_for_status()
        return decode_value(response.json()["output"])

    def close() -> None:
        client.close()
        handle.stop()
        fixture.close()

    return Trial(run=run, check=lambda result: fixture.check("invoke_http", n, result), close=close)


@register_workload("invoke_bundle")
def bundle_workload(n: int, cfg) -> Trial:
    fixture = _Fixture(int(n), cfg.seed)
    publisher = Publisher(fixture.store, output_dir=fixture.root / "build")
    artifact = publisher.publish_service(fixture.service, BackendSpec(kind=BackendKind.SCRIPT, target="scale"))
    loaded = load_bundle(artifact.output_path)
    return Trial(
        run=lambda: execute(loaded.service, [fixture.input], loaded.registry),
        check=lambda result: fixture.check("invoke_bundle", n, result),
        close=fixture.close,
    )


def artifact_size_comparison(out: Optional[Path] = None) -> List[SizeRow]:
    """Publish the scale service as a script and a container bundle and report sizes.

    Args:
        out: CSV destination for the size rows

    Returns:
        One row per backend, script first
    """
    fixture = _Fixture(8, 0)
    try:
        publisher = Publisher(fixture.store, output_dir=fixture.root / "build")
        artifacts = [
            publisher.publish_service(fixture.service, BackendSpec(kind=kind, target="zooc/scale"))
            for kind in (BackendKind.SCRIPT, BackendKind.CONTAINER)
        ]
        rows = artifact_size_report(artifacts)
    finally:
        fixture.close()
    if out is not None:
        size_report_csv(rows, out)
    return rows
