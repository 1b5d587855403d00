"""Service abstraction shared by every zooc module."""

from .errors import ZooError
from .graph import DependencyGraph, DepNode, Edge, Slot
from .refs import VersionRef
from .service import Service
from .types import (
    BOOL,
    EN_TEXT,
    EN_VOICE,
    FLOAT,
    FR_TEXT,
    FR_VOICE,
    INT,
    JPEG_IMG,
    NDARRAY,
    PNG_IMG,
    STRING,
    DataType,
    ServiceSignature,
    TypeRegistry,
    format_type_string,
    parse_type_string,
    type_registry,
)
from .values import TypedValue, decode_value, encode_value

__all__ = [
    "ZooError",
    "DependencyGraph",
    "DepNode",
    "Edge",
    "Slot",
    "VersionRef",
    "Service",
    "DataType",
    "ServiceSignature",
    "TypeRegistry",
    "format_type_string",
    "parse_type_string",
    "type_registry",
    "TypedValue",
    "decode_value",
    "encode_value",
    "INT",
    "FLOAT",
    "BOOL",
    "STRING",
    "NDARRAY",
    "PNG_IMG",
    "JPEG_IMG",
    "EN_TEXT",
    "FR_TEXT",
    "EN_VOICE",
    "FR_VOICE",
]
