"""Typed runtime values and their JSON wire encoding.

Wire form: ``{"type": "<token>", "data": ...}`` where data is a number or
bool for numeric primitives, a string for ``string``, base64 text for media
blobs and ``{"shape": [...], "values": [...]}`` for ndarrays.
"""

import base64
import binascii
import json
from dataclasses import dataclass
from typing import Any, Dict

from .errors import InvalidPayload, UnknownType, WireDecodeError, ZooError
from .types import Category, DataType


@dataclass(frozen=True)
class TypedValue:
    """A payload tagged with its data type.

    Media payloads are opaque bytes; ``int``/``float``/``bool``/``string``
    are Python scalars; ``ndarray`` payloads are :class:`Ndarray` handles.
    """

    dtype: DataType
    payload: Any

    def __post_init__(self) -> None:
        check_payload(self.dtype, self.payload)


def check_payload(dtype: DataType, payload: Any) -> None:
    """Raise InvalidPayload unless ``payload`` represents ``dtype``."""
    from ..runtime.ndarray import Ndarray

    ok = False
    if dtype.category == Category.MEDIA:
        ok = isinstance(payload, bytes)
    elif dtype.category == Category.NDARRAY:
        ok = isinstance(payload, Ndarray)
    elif dtype.name == "int":
        ok = isinstance(payload, int) and not isinstance(payload, bool)
    elif dtype.name == "float":
        ok = isinstance(payload, float)
    elif dtype.name == "bool":
        ok = isinstance(payload, bool)
    elif dtype.name == "string":
        ok = isinstance(payload, str)

    if not ok:
        raise InvalidPayload(
            f"payload of type {type(payload).__name__} does not represent {dtype.token}"
        )


def coerce_payload(dtype: DataType, payload: Any) -> Any:
    """Widen ints to floats for ``float`` values, leave everything else alone."""
    if dtype.category == Category.PRIMITIVE and dtype.name == "float":
        if isinstance(payload, int) and not isinstance(payload, bool):
            return float(payload)
    return payload


def encode_value(value: TypedValue) -> Dict[str, Any]:
    """Encode a typed value in its JSON wire form."""
    dtype, payload = value.dtype, value.payload
    if dtype.category == Category.MEDIA:
        data: Any = base64.b64encode(payload).decode("ascii")
    elif dtype.category == Category.NDARRAY:
        data = {"shape": list(payload.shape), "values": payload.tolist()}
    else:
        data = payload
    return {"type": dtype.token, "data": data}


def decode_value(obj: Any) -> TypedValue:
    """Decode a wire-form value.

    Raises:
        WireDecodeError: On any malformed encoding, unknown tokens included
    """
    from ..runtime.ndarray import Ndarray

    if not isinstance(obj, dict) or "type" not in obj or "data" not in obj:
        raise WireDecodeError("typed value must be an object with 'type' and 'data'")
    if not isinstance(obj["type"], str):
        raise WireDecodeError("'type' must be a type token string")

    try:
        dtype = DataType.from_token(obj["type"])
    except UnknownType as e:
        raise WireDecodeError(f"unknown type token {e.token!r}") from e

    data = obj["data"]
    try:
        if dtype.category == Category.MEDIA:
            if not isinstance(data, str):
                raise WireDecodeError(f"{dtype.token} data must be base64 text")
            payload: Any = base64.b64decode(data.encode("ascii"), validate=True)
        elif dtype.category == Category.NDARRAY:
            if not isinstance(data, dict) or "shape" not in data or "values" not in data:
                raise WireDecodeError("ndarray data must be an object with 'shape' and 'values'")
            payload = Ndarray(data["shape"], data["values"])
        else:
            payload = coerce_payload(dtype, data)
        return TypedValue(dtype, payload)
    except WireDecodeError:
        raise
    except (ZooError, binascii.Error, UnicodeEncodeError, ValueError, TypeError) as e:
        raise WireDecodeError(f"malformed {dtype.token} data: {e}") from e


def canonical_bytes(value: TypedValue) -> bytes:
    """Deterministic byte form used to compare outputs across backends."""
    return json.dumps(encode_value(value), sort_keys=True, separators=(",", ":")).encode("utf-8")
