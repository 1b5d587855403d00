"""Tests for the REST API of a served service."""

import base64

import pytest
from fastapi.testclient import TestClient

from src.api.main import create_app, status_for
from src.core.errors import InputTypeMismatch, MissingPrimitive, WireDecodeError
from src.core.types import EN_TEXT, PNG_IMG

from .conftest import SAMPLE_PNG, expected_label


def png_input(blob: bytes = SAMPLE_PNG) -> dict:
    return {"type": "png_img", "data": base64.b64encode(blob).decode("ascii")}


@pytest.fixture
def client(pipeline, primitives):
    """Test client serving the use-case pipeline."""
    with TestClient(create_app(pipeline, primitives)) as client:
        yield client


def test_invoke_returns_french_label(client):
    """Test POST /invoke runs the pipeline."""
    response = client.post("/invoke", json={"inputs": [png_input()]})

    assert response.status_code == 200
    output = response.json()["output"]
    assert output["type"] == "fr_text"
    assert base64.b64decode(output["data"]) == expected_label(SAMPLE_PNG)


def test_signature(client):
    """Test GET /signature returns the type string."""
    response = client.get("/signature")

    assert response.status_code == 200
    assert response.json() == "png_img -> fr_text"


def test_health(client):
    """Test health check endpoint."""
    response = client.get("/health")

    assert response.status_code == 200
    data = response.json()
    assert data["status"] == "healthy"
    assert data["service"] == "pipeline"
    assert data["type"] == "png_img -> fr_text"


def test_invoke_wrong_type(client):
    """Test a mistyped input is a 400 naming the position."""
    response = client.post(
        "/invoke",
        json={"inputs": [{"type": "en_text", "data": base64.b64encode(b"cat").decode("ascii")}]},
    )

    assert response.status_code == 400
    body = response.json()
    assert body["error"] == "type_mismatch"
    assert (body["position"], body["expected"], body["found"]) == (0, "png_img", "en_text")


def test_invoke_wrong_arity(client):
    """Test a wrong input count is a 400."""
    response = client.post("/invoke", json={"inputs": [png_input(), png_input()]})

    assert response.status_code == 400
    assert response.json()["error"] == "arity_mismatch"


@pytest.mark.parametrize(
    "item",
    [
        {"type": "png_img", "data": "%%%"},
        {"type": "banana", "data": "AA=="},
        {"type": "ndarray", "data": {"shape": [2.5], "values": [1.0, 2.0]}},
        {"data": "AA=="},
    ],
)
def test_invoke_malformed_value(client, item):
    """Test undecodable values are a 422."""
    response = client.post("/invoke", json={"inputs": [item]})

    assert response.status_code == 422


@pytest.mark.parametrize("body", [{"input": [png_input()]}, {}])
def test_invoke_requires_inputs_field(client, body):
    """Test a body without an inputs list is a 422, not an arity error."""
    response = client.post("/invoke", json=body)

    assert response.status_code == 422


def test_invoke_missing_primitive(pipeline):
    """Test server-side faults are a 500."""
    from src.runtime.registry import PrimitiveRegistry

    with TestClient(create_app(pipeline, PrimitiveRegistry())) as client:
        response = client.post("/invoke", json={"inputs": [png_input()]})

    assert response.status_code == 500
    assert response.json()["error"] == "missing_primitive"


def test_status_mapping():
    """Test the error to status table."""
    assert status_for(InputTypeMismatch(0, PNG_IMG, EN_TEXT)) == 400
    assert status_for(WireDecodeError("bad")) == 422
    assert status_for(MissingPrimitive("p", "f")) == 500
