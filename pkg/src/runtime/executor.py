"""Evaluation of a service's dependency graph."""

from concurrent.futures import ThreadPoolExecutor
from typing import Dict, List, Optional, Sequence, Tuple

from ..core.errors import InputArityMismatch, InputTypeMismatch, PrimitiveFailure
from ..core.graph import DepNode
from ..core.service import Service
from ..core.values import TypedValue
from ..utils.logger import get_logger
from .registry import PrimitiveRegistry


logger = get_logger(__name__)


def check_inputs(s: Service, inputs: Sequence[TypedValue]) -> None:
    """Validate input count and types against the service signature.

    Raises:
        InputArityMismatch: On a wrong number of inputs
        InputTypeMismatch: At the first input of the wrong type
    """
    if len(inputs) != s.arity:
        raise InputArityMismatch(expected=s.arity, found=len(inputs))
    for position, (value, expected) in enumerate(zip(inputs, s.inputs)):
        if value.dtype != expected:
            raise InputTypeMismatch(position, expected, value.dtype)


def execute(
    s: Service,
    inputs: Sequence[TypedValue],
    reg: PrimitiveRegistry,
    max_workers: Optional[int] = None,
) -> TypedValue:
    """Run a service on typed inputs.

    Nodes run in topological order. With ``max_workers`` > 1 the nodes of
    one topological level run concurrently; results are keyed by node id, so
    the output does not depend on scheduling.

    Args:
        s: Service to run
        inputs: One value per signature input
        reg: Primitives for the graph's nodes
        max_workers: Thread pool size for independent nodes

    Returns:
        Output of the sink node

    Raises:
        InputArityMismatch: On a wrong number of inputs
        InputTypeMismatch: On an input of the wrong type
        MissingPrimitive: If a node has no registered primitive
        PrimitiveFailure: If a primitive raises or returns a bad value
    """
    check_inputs(s, inputs)
    graph = s.graph

    fed: Dict[Tuple[str, int], TypedValue] = {
        (slot.node, slot.position): value for slot, value in zip(graph.input_slots, inputs)
    }
    producers = {(e.consumer, e.position): e.producer for e in graph.edges}
    results: Dict[str, TypedValue] = {}

    def run(node: DepNode) -> TypedValue:
        args: List[TypedValue] = []
        for position in range(node.arity):
            producer = producers.get((node.id, position))
            args.append(results[producer] if producer is not None else fed[(node.id, position)])

        primitive = reg.lookup(node.package_id, node.function_name)
        if primitive.signature.arity != node.arity:
            raise PrimitiveFailure(
                f"{node.package_id}#{node.function_name} takes {primitive.signature.arity} "
                f"inputs, graph node has {node.arity}"
            )
        return primitive(*(arg.payload for arg in args))

    if max_workers and max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers, thread_name_prefix="zoo-exec") as pool:
            for level in graph.levels():
                nodes = [graph.node(node_id) for node_id in level]
                for node, value in zip(nodes, pool.map(run, nodes)):
                    results[node.id] = value
    else:
        for node_id in graph.topological_order():
            results[node_id] = run(graph.node(node_id))

    output = results[graph.sink]
    if output.dtype != s.output:
        raise PrimitiveFailure(
            f"service {s.name!r} produced {output.dtype}, its signature declares {s.output}"
        )
    logger.debug("service executed", service=s.name, nodes=len(graph.nodes))
    return output
