"""Registry of executable primitives keyed by (package, function name).

Primitives take raw payloads (bytes, scalars, :class:`Ndarray`) in
signature order and return the raw output payload; the registry wraps the
result with the declared output type.
"""

import threading
import types
from dataclasses import dataclass
from typing import Any, Callable, Dict, List, Mapping, Optional, Tuple

from ..core.errors import InvalidPayload, MissingPrimitive, PrimitiveFailure, PrimitiveLoadError
from ..core.types import ServiceSignature, parse_type_string
from ..core.values import TypedValue, coerce_payload
from ..typecheck.checker import service_file
from ..typecheck.config import read_config
from ..utils.logger import get_logger


logger = get_logger(__name__)

PrimitiveFn = Callable[..., Any]


@dataclass(frozen=True)
class Primitive:
    package: str
    name: str
    signature: ServiceSignature
    fn: PrimitiveFn

    def __call__(self, *payloads: Any) -> TypedValue:
        """Run the function and type its result.

        Raises:
            PrimitiveFailure: If the function raises or returns a payload
                that does not match the declared output type
        """
        label = f"{self.package}#{self.name}"
        try:
            result = self.fn(*payloads)
        except Exception as e:
            raise PrimitiveFailure(f"{label}: {type(e).__name__}: {e}") from e
        try:
            return TypedValue(self.signature.output, coerce_payload(self.signature.output, result))
        except InvalidPayload as e:
            raise PrimitiveFailure(f"{label} returned a bad value: {e.message}") from e


class PrimitiveRegistry:
    """Thread-safe mapping (package_id, function_name) -> Primitive.

    ``package_id`` is a bare gid or ``gid/vid``. Lookups for ``gid/vid``
    fall back to primitives registered under the bare gid.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._primitives: Dict[Tuple[str, str], Primitive] = {}

    def register(
        self,
        package: str,
        name: str,
        signature: "ServiceSignature | str",
        fn: PrimitiveFn,
    ) -> Primitive:
        """Register a primitive, replacing any previous entry for the key."""
        if isinstance(signature, str):
            signature = parse_type_string(signature)
        primitive = Primitive(package=package, name=name, signature=signature, fn=fn)
        with self._lock:
            self._primitives[(package, name)] = primitive
        return primitive

    def primitive(self, package: str, signature: "ServiceSignature | str", name: Optional[str] = None):
        """Decorator form of :meth:`register`."""

        def decorator(fn: PrimitiveFn) -> PrimitiveFn:
            self.register(package, name or fn.__name__, signature, fn)
            return fn

        return decorator

    def lookup(self, package_id: str, name: str) -> Primitive:
        """Find the primitive for a graph node.

        Raises:
            MissingPrimitive: If neither ``package_id`` nor its bare gid has it
        """
        gid = package_id.split("/", 1)[0]
        with self._lock:
            found = self._primitives.get((package_id, name)) or self._primitives.get((gid, name))
        if found is None:
            raise MissingPrimitive(package_id, name)
        return found

    def has(self, package_id: str, name: str) -> bool:
        try:
            self.lookup(package_id, name)
            return True
        except MissingPrimitive:
            return False

    def keys(self) -> List[Tuple[str, str]]:
        with self._lock:
            return sorted(self._primitives)

    def __len__(self) -> int:
        return len(self._primitives)


def load_package_primitives(
    package_id: str,
    files: Mapping[str, bytes],
    registry: PrimitiveRegistry,
) -> List[str]:
    """Execute a package's scripts and register the functions its config exposes.

    Every top-level ``*.py`` file runs as its own module. Config entries
    backed by a saved composed service are skipped, as are entries no script
    defines.

    Args:
        package_id: ``gid/vid`` the primitives are registered under
        files: Package files
        registry: Destination registry

    Returns:
        Names registered

    Raises:
        PrimitiveLoadError: If a script fails to execute
    """
    signatures = read_config(files, package_id)

    namespace: Dict[str, Any] = {}
    for file_name in sorted(files):
        if not file_name.endswith(".py") or "/" in file_name:
            continue
        module = types.ModuleType(f"zoo_pkg_{package_id.replace('/', '_').replace('-', '_')}_{file_name[:-3]}")
        module.__file__ = f"<{package_id}/{file_name}>"
        try:
            code = compile(files[file_name].decode("utf-8"), module.__file__, "exec")
            exec(code, module.__dict__)
        except Exception as e:
            raise PrimitiveLoadError(f"script {file_name} of package {package_id} failed: {e}") from e
        namespace.update(vars(module))

    registered = []
    for name, signature in signatures.items():
        if service_file(name) in files:
            continue
        fn = namespace.get(name)
        if not callable(fn):
            logger.debug("config entry has no script function", package=package_id, name=name)
            continue
        registry.register(package_id, name, signature, fn)
        registered.append(name)

    logger.info("package primitives loaded", package=package_id, names=registered)
    return registered
