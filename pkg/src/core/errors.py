"""Exception hierarchy for zooc.

Every domain error carries the fields a user needs to act on it (positions,
types, package ids and versions) as attributes, and renders them into its
message so that CLI and HTTP surfaces can report them unchanged.
"""

from typing import Any, Dict, Optional, Tuple


class ZooError(Exception):
    """Base class for all zooc errors."""

    exit_code = 1
    code = "zoo_error"

    def __init__(self, message: str, location: Optional[Tuple[int, int]] = None):
        super().__init__(message)
        self.message = message
        self.location = location

    def __str__(self) -> str:
        if self.location is not None:
            line, col = self.location
            return f"{self.message} at line {line}, col {col}"
        return self.message

    def details(self) -> Dict[str, Any]:
        """Structured fields specific to the error."""
        return {}

    def to_dict(self) -> Dict[str, Any]:
        payload: Dict[str, Any] = {"error": self.code, "message": str(self)}
        payload.update(self.details())
        if self.location is not None:
            payload["line"], payload["col"] = self.location
        return payload


class UsageError(ZooError):
    exit_code = 2
    code = "usage_error"


class ConfigError(ZooError):
    exit_code = 2
    code = "config_error"


# Types and signatures

class UnknownType(ZooError):
    code = "unknown_type"

    def __init__(self, token: str):
        super().__init__(f"unknown type {token!r}")
        self.token = token

    def details(self) -> Dict[str, Any]:
        return {"token": self.token}


class EmptySignature(ZooError):
    code = "empty_signature"

    def __init__(self) -> None:
        super().__init__("type string is empty")


class GraphError(ZooError):
    """Invalid dependency graph: cycles, dangling edges, doubly fed inputs."""

    code = "graph_error"


class InvalidService(ZooError):
    code = "invalid_service"


# Service creation and composition

class ConfigMissing(ZooError):
    code = "config_missing"

    def __init__(self, package: str):
        super().__init__(f"package {package} has no zoo.json")
        self.package = package

    def details(self) -> Dict[str, Any]:
        return {"package": self.package}


class ConfigParseError(ZooError):
    code = "config_parse_error"

    def __init__(self, detail: str, package: Optional[str] = None):
        prefix = f"package {package}: " if package else ""
        super().__init__(f"{prefix}invalid zoo.json: {detail}")
        self.detail = detail
        self.package = package

    def details(self) -> Dict[str, Any]:
        return {"detail": self.detail, "package": self.package}


class ArityMismatch(ZooError):
    code = "arity_mismatch"

    def __init__(self, expected: int, found: int):
        super().__init__(
            f"arity mismatch: consumer expects {expected} inputs, found {found} services"
        )
        self.expected = expected
        self.found = found

    def details(self) -> Dict[str, Any]:
        return {"expected": self.expected, "found": self.found}


class ServiceTypeError(ZooError):
    """Composition type error: the producer at ``position`` has the wrong output type."""

    code = "type_mismatch"

    def __init__(self, position: int, expected: Any, found: Any):
        super().__init__(
            f"type mismatch at position {position}: expected {expected}, found {found}"
        )
        self.position = position
        self.expected = expected
        self.found = found

    def details(self) -> Dict[str, Any]:
        return {
            "position": self.position,
            "expected": str(self.expected),
            "found": str(self.found),
        }


# Package store

class InvalidVersionRef(ZooError):
    code = "invalid_version_ref"

    def __init__(self, text: str, reason: str):
        super().__init__(f"invalid package reference {text!r}: {reason}")
        self.text = text
        self.reason = reason


class PackageNotFound(ZooError):
    code = "package_not_found"

    def __init__(self, gid: str, version: Optional[str] = None):
        label = f"{gid}/{version}" if version else gid
        super().__init__(f"package {label} not found (id {gid}, version {version or 'latest'})")
        self.gid = gid
        self.version = version

    def details(self) -> Dict[str, Any]:
        return {"gid": self.gid, "version": self.version}


class RemoteUnavailable(ZooError):
    code = "remote_unavailable"

    def __init__(self, detail: str):
        super().__init__(f"package remote unavailable: {detail}")
        self.detail = detail


class InvalidRemoteContent(ZooError):
    code = "invalid_remote_content"

    def __init__(self, detail: str):
        super().__init__(f"package remote sent invalid content: {detail}")
        self.detail = detail


class StoreWriteError(ZooError):
    code = "store_write_error"


class InvalidConfig(ZooError):
    code = "invalid_config"


class PinOnLatest(ZooError):
    code = "pin_on_latest"

    def __init__(self, gid: str):
        super().__init__(
            f"cannot pin {gid}/latest: pinned dependency graphs need an explicit version id"
        )
        self.gid = gid


class GraphMissing(ZooError):
    code = "graph_missing"

    def __init__(self, gid: str, version: str):
        super().__init__(f"no pinned dependency graph for {gid}/{version}")
        self.gid = gid
        self.version = version


# DSL

class DslSyntaxError(ZooError):
    code = "syntax_error"

    def __init__(self, line: int, col: int, message: str):
        super().__init__(f"syntax error: {message}", location=(line, col))
        self.line = line
        self.col = col
        self.detail = message


class UnterminatedString(DslSyntaxError):
    code = "unterminated_string"

    def __init__(self, line: int, col: int):
        super().__init__(line, col, "unterminated string literal")


class UnknownBackendKeyword(DslSyntaxError):
    code = "unknown_backend"

    def __init__(self, line: int, col: int, keyword: str):
        super().__init__(
            line, col, f"unknown backend {keyword!r}, expected CONTAINER, SCRIPT or UNIKERNEL"
        )
        self.keyword = keyword


class UnboundIdentifier(ZooError):
    code = "unbound_identifier"

    def __init__(self, name: str):
        super().__init__(f"unbound identifier {name!r}")
        self.name = name


class KeyNotFound(ZooError):
    code = "key_not_found"

    def __init__(self, name: str, package: Optional[str] = None):
        where = f" in package {package}" if package else ""
        super().__init__(f"no service named {name!r}{where}")
        self.name = name
        self.package = package

    def details(self) -> Dict[str, Any]:
        return {"name": self.name, "package": self.package}


class DslEvalError(ZooError):
    """A value of the wrong kind reached an operator, e.g. ``#`` on a service."""

    code = "eval_error"


# Runtime

class InputTypeMismatch(ZooError):
    code = "type_mismatch"

    def __init__(self, position: int, expected: Any, found: Any):
        super().__init__(
            f"input type mismatch at position {position}: expected {expected}, found {found}"
        )
        self.position = position
        self.expected = expected
        self.found = found

    def details(self) -> Dict[str, Any]:
        return {
            "position": self.position,
            "expected": str(self.expected),
            "found": str(self.found),
        }


class InputArityMismatch(ZooError):
    code = "arity_mismatch"

    def __init__(self, expected: int, found: int):
        super().__init__(f"service expects {expected} inputs, got {found}")
        self.expected = expected
        self.found = found

    def details(self) -> Dict[str, Any]:
        return {"expected": self.expected, "found": self.found}


class MissingPrimitive(ZooError):
    code = "missing_primitive"

    def __init__(self, package: str, name: str):
        super().__init__(f"no primitive {name!r} registered for package {package}")
        self.package = package
        self.name = name


class PrimitiveFailure(ZooError):
    code = "primitive_failure"

    def __init__(self, detail: str):
        super().__init__(f"primitive failed: {detail}")
        self.detail = detail


class PrimitiveLoadError(ZooError):
    code = "primitive_load_error"


class Diverged(ZooError):
    code = "diverged"

    def __init__(self, x: float, iteration: int):
        super().__init__(f"gradient descent diverged at iteration {iteration} (x={x})")
        self.x = x
        self.iteration = iteration


class ShapeMismatch(ZooError):
    code = "shape_mismatch"


# Publishing and serving

class UnpinnedDependency(ZooError):
    code = "unpinned_dependency"

    def __init__(self, ref: str):
        super().__init__(f"cannot publish with unpinned package reference {ref}")
        self.ref = ref


class UnknownBackend(ZooError):
    code = "unknown_backend"

    def __init__(self, kind: str):
        super().__init__(f"unknown backend {kind!r}")
        self.kind = kind


class BundleError(ZooError):
    code = "bundle_error"


class ServeError(ZooError):
    code = "serve_failed"

    def __init__(self, url: str):
        super().__init__(f"server on {url} failed to start (port in use?)")
        self.url = url


class WireDecodeError(ZooError):
    """Malformed typed-value encoding."""

    code = "malformed_encoding"


class InvalidPayload(ZooError):
    """A payload whose representation does not match its data type."""

    code = "invalid_payload"


# Discovery

class InvalidTypeString(ZooError):
    code = "invalid_type_string"

    def __init__(self, type_string: str, reason: str):
        super().__init__(f"invalid type string {type_string!r}: {reason}")
        self.type_string = type_string
        self.reason = reason


class StorageError(ZooError):
    code = "storage_error"


class RecordNotFound(ZooError):
    code = "record_not_found"

    def __init__(self, record_id: str):
        super().__init__(f"no discovery record {record_id!r}")
        self.record_id = record_id


class RegistryUnavailable(ZooError):
    code = "registry_unavailable"


# Benchmarks

class UnknownWorkload(ZooError):
    code = "unknown_workload"

    def __init__(self, name: str):
        super().__init__(f"unknown workload {name!r}")
        self.name = name


class InsufficientData(ZooError):
    code = "insufficient_data"


class BenchOracleError(ZooError):
    code = "bench_oracle_error"


class BenchBusy(ZooError):
    code = "bench_busy"
