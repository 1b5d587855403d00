"""Parsing of the ``zoo.json`` service configuration of a package."""

import json
import re
from typing import Dict, Mapping

from ..core.errors import ConfigMissing, ConfigParseError, EmptySignature
from ..core.types import ServiceSignature, parse_type_string
from ..store.models import CONFIG_FILE


SERVICE_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def parse_config(blob: bytes, package: str = "") -> Dict[str, ServiceSignature]:
    """Parse a ``zoo.json`` blob into exposed-function signatures.

    Args:
        blob: Raw file content
        package: Package id used in error messages

    Returns:
        Function name to signature, in file order

    Raises:
        ConfigParseError: If the file is not a non-empty object of
            ``name -> type string`` pairs
        UnknownType: If a type string uses an unknown token
    """
    try:
        config = json.loads(blob.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as e:
        raise ConfigParseError(f"not valid JSON ({e})", package) from e

    if not isinstance(config, dict):
        raise ConfigParseError("top level must be a JSON object", package)
    if not config:
        raise ConfigParseError("at least one name/type pair is required", package)

    signatures: Dict[str, ServiceSignature] = {}
    for name, type_string in config.items():
        if not SERVICE_NAME.match(name):
            raise ConfigParseError(f"invalid function name {name!r}", package)
        if not isinstance(type_string, str):
            raise ConfigParseError(f"type of {name!r} must be a string", package)
        try:
            signatures[name] = parse_type_string(type_string)
        except EmptySignature as e:
            raise ConfigParseError(f"type of {name!r} is empty", package) from e
    return signatures


def read_config(files: Mapping[str, bytes], package: str) -> Dict[str, ServiceSignature]:
    """Parse the config of a package's file set.

    Raises:
        ConfigMissing: If the package has no ``zoo.json``
    """
    if CONFIG_FILE not in files:
        raise ConfigMissing(package)
    return parse_config(files[CONFIG_FILE], package)
