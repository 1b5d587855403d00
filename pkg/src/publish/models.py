"""Deployment targets and the artifacts publishing produces."""

from enum import Enum
from pathlib import Path
from typing import Any, Dict

from pydantic import BaseModel, ConfigDict, Field

from ..core.errors import UnknownBackend


class BackendKind(str, Enum):
    CONTAINER = "container"
    SCRIPT = "script"
    UNIKERNEL = "unikernel"

    @property
    def keyword(self) -> str:
        return self.value.upper()

    @classmethod
    def parse(cls, text: str) -> "BackendKind":
        """Accept ``container`` as well as the DSL keyword ``CONTAINER``.

        Raises:
            UnknownBackend: For any other name
        """
        try:
            return cls(text.lower())
        except ValueError:
            raise UnknownBackend(text) from None


class BackendSpec(BaseModel):
    """Where and how to publish: a backend kind and its target.

    The target is an image tag for containers and an output path (without
    extension) for script bundles and unikernel descriptors.
    """

    model_config = ConfigDict(frozen=True)

    kind: BackendKind
    target: str = Field(min_length=1)

    def __str__(self) -> str:
        return f'{self.kind.keyword} "{self.target}"'


class Artifact(BaseModel):
    """A published service.

    ``output_path`` is the bundle directory for containers and the written
    file for the other backends.
    """

    kind: BackendKind
    uri: str
    output_path: Path
    manifest: Dict[str, Any] = Field(default_factory=dict)

    @property
    def size_bytes(self) -> int:
        if self.output_path.is_dir():
            return sum(p.stat().st_size for p in self.output_path.rglob("*") if p.is_file())
        return self.output_path.stat().st_size
