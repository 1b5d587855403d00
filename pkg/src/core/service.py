"""The service abstraction: package references, a signature, a dependency graph."""

from typing import List, Tuple

from pydantic import BaseModel, ConfigDict, Field, model_validator

from .errors import InvalidService
from .graph import DependencyGraph
from .refs import VersionRef
from .types import ServiceSignature, format_type_string


class Service(BaseModel):
    """A composable unit of analytics.

    Every graph node references a package listed in ``packages`` and the
    signature has one input per unfed graph input position.
    """

    model_config = ConfigDict(frozen=True)

    name: str = Field(min_length=1)
    packages: Tuple[VersionRef, ...]
    signature: ServiceSignature
    graph: DependencyGraph

    @model_validator(mode="after")
    def _check(self) -> "Service":
        package_ids = {ref.package_id for ref in self.packages}
        for node in self.graph.nodes:
            if node.package_id not in package_ids:
                raise InvalidService(
                    f"service {self.name!r}: node {node.id} uses package {node.package_id}, "
                    f"which is not among its packages"
                )
        if len(self.signature.inputs) != len(self.graph.input_slots):
            raise InvalidService(
                f"service {self.name!r} declares {len(self.signature.inputs)} inputs "
                f"but its graph has {len(self.graph.input_slots)} unfed positions"
            )
        return self

    @property
    def inputs(self):
        return self.signature.inputs

    @property
    def output(self):
        return self.signature.output

    @property
    def arity(self) -> int:
        return self.signature.arity

    @property
    def type_string(self) -> str:
        return format_type_string(self.signature)

    @property
    def sink_package(self) -> VersionRef:
        """Package providing the service's final function."""
        package_id = self.graph.node(self.graph.sink).package_id
        return next(ref for ref in self.packages if ref.package_id == package_id)

    def unpinned_packages(self) -> List[VersionRef]:
        return [ref for ref in self.packages if ref.is_latest]


def dedupe_packages(refs) -> Tuple[VersionRef, ...]:
    """Order-preserving union by (gid, version) identity."""
    seen = set()
    unique = []
    for ref in refs:
        key = (ref.gid, ref.version)
        if key not in seen:
            seen.add(key)
            unique.append(ref)
    return tuple(unique)
