"""Package version references: ``gid/[vid|latest]/pin``."""

import re
from typing import Optional

from pydantic import BaseModel, ConfigDict, field_validator

from .errors import InvalidVersionRef


GID_PATTERN = re.compile(r"^[a-z0-9]+$")
VID_PATTERN = re.compile(r"^[A-Za-z0-9][A-Za-z0-9._-]*$")
LATEST = "latest"
PIN = "pin"


class VersionRef(BaseModel):
    """Reference to one package version.

    ``version`` is ``None`` for the latest version. Text forms: ``gid``,
    ``gid/vid``, ``gid/latest``, each optionally suffixed with ``/pin``.
    """

    model_config = ConfigDict(frozen=True)

    gid: str
    version: Optional[str] = None
    pin: bool = False

    @field_validator("gid")
    @classmethod
    def _check_gid(cls, value: str) -> str:
        if not GID_PATTERN.match(value):
            raise ValueError(f"gid must match [a-z0-9]+, got {value!r}")
        return value

    @field_validator("version")
    @classmethod
    def _check_version(cls, value: Optional[str]) -> Optional[str]:
        if value is None:
            return value
        if value == LATEST or value == PIN or not VID_PATTERN.match(value):
            raise ValueError(f"invalid version id {value!r}")
        return value

    @classmethod
    def parse(cls, text: str) -> "VersionRef":
        """Parse the textual form of a reference.

        Raises:
            InvalidVersionRef: On malformed input
        """
        parts = text.strip().split("/")
        pin = False
        if len(parts) > 1 and parts[-1] == PIN:
            pin = True
            parts = parts[:-1]

        if len(parts) == 1:
            gid, version = parts[0], None
        elif len(parts) == 2:
            gid = parts[0]
            version = None if parts[1] == LATEST else parts[1]
        else:
            raise InvalidVersionRef(text, "expected gid/[vid|latest]/pin")

        if not GID_PATTERN.match(gid):
            raise InvalidVersionRef(text, "gid must match [a-z0-9]+")
        if version is not None and not VID_PATTERN.match(version):
            raise InvalidVersionRef(text, f"invalid version id {version!r}")
        return cls(gid=gid, version=version, pin=pin)

    @property
    def is_latest(self) -> bool:
        return self.version is None

    @property
    def package_id(self) -> str:
        """Identity used by dependency-graph nodes: ``gid`` or ``gid/vid``."""
        return self.gid if self.version is None else f"{self.gid}/{self.version}"

    def explicit(self, vid: str) -> "VersionRef":
        return VersionRef(gid=self.gid, version=vid, pin=self.pin)

    def __str__(self) -> str:
        text = f"{self.gid}/{self.version or LATEST}"
        return f"{text}/{PIN}" if self.pin else text
