"""Integration tests for the complete compose, publish and serve workflow."""

import base64
import io
import random
import socket
import string

import httpx
import numpy as np
import pytest
from fastapi.testclient import TestClient

from src.api.main import create_app
from src.cli import main
from src.core.errors import ServeError
from src.core.refs import VersionRef
from src.core.types import BOOL, FLOAT, INT, NDARRAY, PNG_IMG, STRING
from src.core.values import TypedValue, canonical_bytes, decode_value, encode_value
from src.dsl import evaluate, parse
from src.publish.bundle import load_bundle
from src.publish.models import BackendKind, BackendSpec
from src.publish.server import serve
from src.runtime.executor import execute
from src.runtime.ndarray import Ndarray
from src.typecheck.checker import compose, create_service

from .conftest import SAMPLE_PNG, expected_label


pytestmark = pytest.mark.integration


def test_use_case_end_to_end(store, publisher, usecase_source):
    """Test the use-case program publishes a container that labels images in French."""
    env = evaluate(parse(usecase_source), store, publisher)
    assert env["pub"] == "container://alice/image_service:latest"
    assert env["s"].output.token == "fr_text"

    bundle_dir = publisher.output_path(BackendSpec(kind=BackendKind.CONTAINER, target="alice/image_service:latest"))
    handle = serve(bundle_dir)
    try:
        response = httpx.post(
            f"{handle.url}/invoke",
            json={"inputs": [{"type": "png_img", "data": base64.b64encode(SAMPLE_PNG).decode("ascii")}]},
            timeout=10.0,
        )
        signature = httpx.get(f"{handle.url}/signature", timeout=10.0).json()
    finally:
        handle.stop()

    assert response.status_code == 200
    output = decode_value(response.json()["output"])
    assert output == TypedValue(env["s"].output, expected_label(SAMPLE_PNG))
    assert signature == "png_img -> fr_text"


def test_unikernel_artifact_is_not_servable(store, publisher, pipeline):
    """Test descriptors are refused by the server."""
    from src.core.errors import BundleError

    artifact = publisher.publish_service(pipeline, BackendSpec(kind=BackendKind.UNIKERNEL, target="k"))

    with pytest.raises(BundleError):
        serve(artifact, start=False)


# ----------------------------------------------------------------------
# Backend equivalence
# ----------------------------------------------------------------------


def random_value(rng: random.Random, dtype) -> TypedValue:
    if dtype == INT:
        return TypedValue(INT, rng.randint(-1000, 1000))
    if dtype == FLOAT:
        return TypedValue(FLOAT, rng.uniform(-100.0, 100.0))
    if dtype == BOOL:
        return TypedValue(BOOL, rng.random() < 0.5)
    if dtype == STRING:
        return TypedValue(STRING, "".join(rng.choice(string.ascii_letters) for _ in range(rng.randint(0, 12))))
    if dtype == NDARRAY:
        shape = [rng.randint(1, 4) for _ in range(rng.randint(1, 3))]
        values = np.random.default_rng(rng.randrange(2**32)).uniform(-10.0, 10.0, size=shape)
        return TypedValue(NDARRAY, Ndarray.from_numpy(values))
    if dtype == PNG_IMG:
        return TypedValue(PNG_IMG, b"\x89PNG" + bytes(rng.randrange(256) for _ in range(16)))
    raise AssertionError(f"no generator for {dtype}")


@pytest.fixture
def equivalence_services(store):
    """Single-function and composed services over the math and use-case packages."""
    m = create_service(VersionRef(gid="m4th"), store)
    use_case = {}
    for gid in ("aa36e", "d79e9", "7f32a"):
        use_case.update(create_service(VersionRef(gid=gid), store))

    services = dict(m)
    services["sum_neg"] = compose([m["to_float"], m["neg"]], m["add"], name="sum_neg")
    services["square_norm"] = compose([m["square"]], m["norm"], name="square_norm")
    services["long_text"] = compose([compose([m["length"]], m["to_float"])], m["is_positive"], name="long_text")
    services["label"] = compose([compose([use_case["seg"]], use_case["infer"])], use_case["trans"], name="label")
    return services


def test_backend_equivalence(store, publisher, primitives, equivalence_services):
    """Test in-process, HTTP and bundle execution agree byte for byte on 50 random cases."""
    rng = random.Random(2024)
    bundles = {}
    clients = {}
    try:
        for case in range(50):
            name = rng.choice(sorted(equivalence_services))
            service = equivalence_services[name]
            inputs = [random_value(rng, dtype) for dtype in service.inputs]

            if name not in bundles:
                artifact = publisher.publish_service(
                    service, BackendSpec(kind=BackendKind.SCRIPT, target=f"eq/{name}")
                )
                bundles[name] = load_bundle(artifact.output_path)
                clients[name] = TestClient(create_app(bundles[name].service, bundles[name].registry))

            in_process = execute(service, inputs, primitives)
            loaded = bundles[name]
            from_bundle = execute(loaded.service, inputs, loaded.registry)
            response = clients[name].post("/invoke", json={"inputs": [encode_value(v) for v in inputs]})
            assert response.status_code == 200, response.text
            over_http = decode_value(response.json()["output"])

            expected = canonical_bytes(in_process)
            assert canonical_bytes(from_bundle) == expected, f"case {case}: {name}"
            assert canonical_bytes(over_http) == expected, f"case {case}: {name}"
    finally:
        for client in clients.values():
            client.close()


def test_serving_on_a_busy_port_is_a_domain_error(store, publisher, pipeline):
    """Test a port already in use is reported, not raised as a crash."""
    artifact = publisher.publish_service(pipeline, BackendSpec(kind=BackendKind.SCRIPT, target="busy/pipeline"))

    with socket.socket(socket.AF_INET, socket.SOCK_STREAM) as sock:
        sock.bind(("127.0.0.1", 0))
        sock.listen(1)
        port = sock.getsockname()[1]

        with pytest.raises(ServeError):
            serve(artifact, port=port)

        err = io.StringIO()
        code = main(
            ["--store", str(store.root), "serve-bundle", str(artifact.output_path), "--port", str(port)],
            out=io.StringIO(),
            err=err,
        )

    assert code == 1
    assert err.getvalue().startswith("error: server on")
