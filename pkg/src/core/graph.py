"""Dependency graph of a service.

Nodes are package functions; edges wire a producer's output into one input
position of a consumer. A well-formed graph is acyclic, feeds each input
position at most once, has exactly one sink, and lists its unfed input
positions in service-input order.
"""

from collections import deque
from typing import Dict, List, Optional, Sequence, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import GraphError


class DepNode(BaseModel):
    """One package function used by a service."""

    model_config = ConfigDict(frozen=True)

    id: str
    function_name: str
    package_id: str
    arity: int = Field(ge=0)


class Edge(BaseModel):
    """Producer output feeding ``consumer`` at input ``position``."""

    model_config = ConfigDict(frozen=True)

    producer: str
    consumer: str
    position: int = Field(ge=0)


class Slot(BaseModel):
    """An input position of a node."""

    model_config = ConfigDict(frozen=True)

    node: str
    position: int = Field(ge=0)


def topological_sort(node_ids: Sequence[str], edges: Sequence[Tuple[str, str]]) -> List[str]:
    """Deterministic Kahn ordering, ties broken by node-list order.

    Raises:
        GraphError: On unknown nodes or cycles
    """
    known = set(node_ids)
    children: Dict[str, List[str]] = {n: [] for n in node_ids}
    in_degree: Dict[str, int] = {n: 0 for n in node_ids}

    for parent, child in edges:
        if parent not in known:
            raise GraphError(f"edge references unknown producer {parent!r}")
        if child not in known:
            raise GraphError(f"edge references unknown consumer {child!r}")
        children[parent].append(child)
        in_degree[child] += 1

    rank = {n: i for i, n in enumerate(node_ids)}
    ready = deque(n for n in node_ids if in_degree[n] == 0)
    order: List[str] = []
    while ready:
        node = ready.popleft()
        order.append(node)
        released = []
        for child in children[node]:
            in_degree[child] -= 1
            if in_degree[child] == 0:
                released.append(child)
        ready.extend(sorted(released, key=rank.__getitem__))

    if len(order) != len(node_ids):
        raise GraphError("dependency graph contains a cycle")
    return order


class DependencyGraph(BaseModel):
    """Immutable dependency graph; every derived graph is re-validated."""

    model_config = ConfigDict(frozen=True)

    nodes: Tuple[DepNode, ...]
    edges: Tuple[Edge, ...] = Field(default_factory=tuple)
    input_slots: Tuple[Slot, ...] = Field(default_factory=tuple)

    @model_validator(mode="after")
    def _check(self) -> "DependencyGraph":
        by_id = {}
        for node in self.nodes:
            if node.id in by_id:
                raise GraphError(f"duplicate node id {node.id!r}")
            by_id[node.id] = node
        if not by_id:
            raise GraphError("dependency graph has no nodes")

        fed = set()
        for edge in self.edges:
            consumer = by_id.get(edge.consumer)
            if consumer is None or edge.producer not in by_id:
                raise GraphError(f"edge {edge.producer}->{edge.consumer} references unknown nodes")
            if edge.position >= consumer.arity:
                raise GraphError(
                    f"edge feeds position {edge.position} of {edge.consumer}, "
                    f"which has arity {consumer.arity}"
                )
            key = (edge.consumer, edge.position)
            if key in fed:
                raise GraphError(f"input {edge.position} of {edge.consumer} is fed twice")
            fed.add(key)

        topological_sort(
            [n.id for n in self.nodes], [(e.producer, e.consumer) for e in self.edges]
        )

        producers = {e.producer for e in self.edges}
        sinks = [n.id for n in self.nodes if n.id not in producers]
        if len(sinks) != 1:
            raise GraphError(f"dependency graph must have exactly one sink, found {sinks}")

        unfed = {
            (n.id, p) for n in self.nodes for p in range(n.arity) if (n.id, p) not in fed
        }
        listed = [(s.node, s.position) for s in self.input_slots]
        if len(set(listed)) != len(listed) or set(listed) != unfed:
            raise GraphError("input slots must list every unfed input position exactly once")
        return self

    @classmethod
    def single(cls, function_name: str, package_id: str, arity: int, node_id: str = "n0") -> "DependencyGraph":
        """Graph of one function whose inputs are all service inputs."""
        node = DepNode(id=node_id, function_name=function_name, package_id=package_id, arity=arity)
        slots = tuple(Slot(node=node_id, position=p) for p in range(arity))
        return cls(nodes=(node,), input_slots=slots)

    @property
    def sink(self) -> str:
        producers = {e.producer for e in self.edges}
        return next(n.id for n in self.nodes if n.id not in producers)

    def node(self, node_id: str) -> DepNode:
        for n in self.nodes:
            if n.id == node_id:
                return n
        raise KeyError(node_id)

    def producer_of(self, node_id: str, position: int) -> Optional[str]:
        for e in self.edges:
            if e.consumer == node_id and e.position == position:
                return e.producer
        return None

    def topological_order(self) -> List[str]:
        return topological_sort(
            [n.id for n in self.nodes], [(e.producer, e.consumer) for e in self.edges]
        )

    def levels(self) -> List[List[str]]:
        """Nodes grouped so each group depends only on earlier groups."""
        depth: Dict[str, int] = {}
        for node_id in self.topological_order():
            parents = [e.producer for e in self.edges if e.consumer == node_id]
            depth[node_id] = 1 + max((depth[p] for p in parents), default=-1)
        grouped: Dict[int, List[str]] = {}
        for node_id in self.topological_order():
            grouped.setdefault(depth[node_id], []).append(node_id)
        return [grouped[d] for d in sorted(grouped)]

    def add_edge(self, producer: str, consumer: str, position: int) -> "DependencyGraph":
        """Return a graph with one more edge; the fed slot leaves the inputs.

        Raises:
            GraphError: If the edge would create a cycle or break the graph
        """
        edges = self.edges + (Edge(producer=producer, consumer=consumer, position=position),)
        topological_sort([n.id for n in self.nodes], [(e.producer, e.consumer) for e in edges])
        slots = tuple(
            s for s in self.input_slots if not (s.node == consumer and s.position == position)
        )
        return DependencyGraph(nodes=self.nodes, edges=edges, input_slots=slots)

    def relabel(self, start: int) -> Tuple["DependencyGraph", Dict[str, str]]:
        """Renumber node ids ``n{start}``, ``n{start+1}``... in node order."""
        mapping = {n.id: f"n{start + i}" for i, n in enumerate(self.nodes)}
        graph = DependencyGraph(
            nodes=tuple(n.model_copy(update={"id": mapping[n.id]}) for n in self.nodes),
            edges=tuple(
                Edge(producer=mapping[e.producer], consumer=mapping[e.consumer], position=e.position)
                for e in self.edges
            ),
            input_slots=tuple(Slot(node=mapping[s.node], position=s.position) for s in self.input_slots),
        )
        return graph, mapping

    def canonical(self) -> tuple:
        """Id-free structure: nodes in first-visit order from the sink."""
        order: List[str] = []
        seen = set()

        def visit(node_id: str) -> None:
            if node_id in seen:
                return
            seen.add(node_id)
            order.append(node_id)
            for position in range(self.node(node_id).arity):
                producer = self.producer_of(node_id, position)
                if producer is not None:
                    visit(producer)

        visit(self.sink)
        index = {node_id: i for i, node_id in enumerate(order)}
        nodes = tuple(
            (self.node(n).function_name, self.node(n).package_id, self.node(n).arity) for n in order
        )
        edges = tuple(sorted((index[e.producer], index[e.consumer], e.position) for e in self.edges))
        slots = tuple((index[s.node], s.position) for s in self.input_slots)
        return nodes, edges, slots

    def is_isomorphic(self, other: "DependencyGraph") -> bool:
        return self.canonical() == other.canonical()
