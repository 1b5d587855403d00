"""Service creation, type-checked composition and saving composed services."""

import json
from typing import Dict, List, Optional, Sequence

from ..core.errors import (
    ArityMismatch,
    ConfigParseError,
    InvalidConfig,
    ServiceTypeError,
)
from ..core.graph import DependencyGraph, Edge
from ..core.refs import VersionRef
from ..core.service import Service, dedupe_packages
from ..core.types import ServiceSignature
from ..store.models import CONFIG_FILE
from ..store.store import PackageStore
from ..utils.logger import get_logger
from .config import SERVICE_NAME, read_config


logger = get_logger(__name__)

SERVICES_DIR = "services"

ServiceDict = Dict[str, Service]


def service_file(name: str) -> str:
    return f"{SERVICES_DIR}/{name}.json"


def create_service(ref: VersionRef, store: PackageStore) -> ServiceDict:
    """Create one service per function exposed by a package.

    Composed services saved with :func:`save_composed` come back with their
    full graph; every other entry becomes a single-node service.

    Args:
        ref: Package reference, ``latest`` allowed
        store: Store resolving the reference

    Returns:
        Function name to service, keys matching ``zoo.json``

    Raises:
        PackageNotFound: If the reference does not resolve
        ConfigMissing: If the package has no ``zoo.json``
        ConfigParseError: If ``zoo.json`` is malformed or empty
        UnknownType: If a type string has an unknown token
    """
    manifest = store.resolve(ref)
    resolved = ref.explicit(manifest.vid)
    signatures = read_config(manifest.files, resolved.package_id)

    services: ServiceDict = {}
    for name, signature in signatures.items():
        stored = manifest.files.get(service_file(name))
        if stored is not None:
            services[name] = _load_composed(name, signature, stored, resolved)
            continue
        services[name] = Service(
            name=name,
            packages=(resolved,),
            signature=signature,
            graph=DependencyGraph.single(name, resolved.package_id, signature.arity),
        )

    logger.info(
        "services created",
        package=resolved.package_id,
        services=sorted(services),
        requested=str(ref),
    )
    return services


def _load_composed(name: str, signature: ServiceSignature, blob: bytes, ref: VersionRef) -> Service:
    try:
        service = Service.model_validate_json(blob)
    except ValueError as e:
        raise ConfigParseError(f"{service_file(name)} is not a valid service: {e}", ref.package_id) from e
    if service.signature != signature:
        raise ConfigParseError(
            f"{service_file(name)} has type {service.type_string}, zoo.json declares {signature}",
            ref.package_id,
        )
    return service.model_copy(update={"name": name})


def compose(fs: Sequence[Service], g: Service, name: Optional[str] = None) -> Service:
    """Feed the outputs of ``fs`` into the inputs of ``g``.

    The result takes the inputs of every ``fs[i]`` in order and produces the
    output of ``g``. Node ids are renumbered: the nodes of ``fs[0]`` first,
    then the other producers, then ``g``.

    Args:
        fs: Producer services, one per input of ``g``
        g: Consumer service
        name: Name of the result, derived from the components when omitted

    Returns:
        Composed service

    Raises:
        ArityMismatch: If ``len(fs)`` differs from the arity of ``g``
        ServiceTypeError: At the first position whose types differ
    """
    if len(fs) != g.arity:
        raise ArityMismatch(expected=g.arity, found=len(fs))

    for position, (f, expected) in enumerate(zip(fs, g.inputs)):
        if f.output != expected:
            raise ServiceTypeError(position, expected, f.output)

    nodes = []
    edges: List[Edge] = []
    slots = []
    sinks = []
    offset = 0
    for f in fs:
        graph, _ = f.graph.relabel(offset)
        offset += len(graph.nodes)
        nodes.extend(graph.nodes)
        edges.extend(graph.edges)
        slots.extend(graph.input_slots)
        sinks.append(graph.sink)

    consumer, _ = g.graph.relabel(offset)
    nodes.extend(consumer.nodes)
    edges.extend(consumer.edges)
    for position, sink in enumerate(sinks):
        slot = consumer.input_slots[position]
        edges.append(Edge(producer=sink, consumer=slot.node, position=slot.position))

    graph = DependencyGraph(nodes=tuple(nodes), edges=tuple(edges), input_slots=tuple(slots))
    signature = ServiceSignature(
        inputs=tuple(t for f in fs for t in f.inputs),
        output=g.output,
    )
    packages = dedupe_packages([ref for f in fs for ref in f.packages] + list(g.packages))

    composed = Service(
        name=name or _composed_name(fs, g),
        packages=packages,
        signature=signature,
        graph=graph,
    )
    logger.debug("services composed", name=composed.name, type=composed.type_string)
    return composed


def _composed_name(fs: Sequence[Service], g: Service) -> str:
    if not fs:
        return g.name
    return "_".join(f.name for f in fs) + "_to_" + g.name


def save_composed(
    s: Service,
    store: PackageStore,
    name: Optional[str] = None,
    pin: bool = False,
    push: bool = False,
) -> VersionRef:
    """Save a service as a new package exposing it under ``name``.

    Args:
        s: Service to save
        store: Destination store
        name: Exposed function name, defaults to ``s.name``
        pin: Also pin the service graph beside the new version
        push: Upload the new version to the store's remote

    Returns:
        Explicit reference to the new package version

    Raises:
        StoreWriteError: If the store cannot be written
        InvalidConfig: If the name is not a valid function name
    """
    name = name or s.name
    if not SERVICE_NAME.match(name):
        raise InvalidConfig(f"service name {name!r} is not a valid function name")

    saved = s.model_copy(update={"name": name})
    files = {
        CONFIG_FILE: json.dumps({name: saved.type_string}, indent=2, sort_keys=True).encode("utf-8"),
        service_file(name): saved.model_dump_json(indent=2).encode("utf-8"),
    }
    ref = store.publish_package(files, graph=s.graph if pin else None, push=push)
    logger.info("composed service saved", name=name, ref=str(ref), pinned=pin)
    return ref.model_copy(update={"pin": pin})
