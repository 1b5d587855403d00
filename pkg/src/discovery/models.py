"""Discovery records: the public entries advertising published services."""

import hashlib
from datetime import datetime, timezone
from typing import Optional

from pydantic import BaseModel, Field, field_validator

from ..core.errors import EmptySignature, InvalidTypeString, UnknownType
from ..core.types import ServiceSignature, format_type_string, parse_type_string


def record_id(gist_id: str, uri: str) -> str:
    """Deterministic id of a (gist id, URI) pair."""
    return hashlib.sha256(f"{gist_id}|{uri}".encode("utf-8")).hexdigest()[:12]


def utcnow() -> datetime:
    return datetime.now(timezone.utc)


class DiscoveryRecord(BaseModel):
    """A published service: the package it is based on, what it does, its type and where it lives."""

    id: Optional[str] = None
    gist_id: str = Field(min_length=1)
    description: str = Field(default="", description="One-line description")
    type_string: str
    uri: str = Field(min_length=1)
    published_at: datetime = Field(default_factory=utcnow)

    @field_validator("type_string")
    @classmethod
    def _canonical_type(cls, value: str) -> str:
        try:
            return format_type_string(parse_type_string(value))
        except UnknownType as e:
            raise InvalidTypeString(value, f"unknown type {e.token!r}") from e
        except EmptySignature as e:
            raise InvalidTypeString(value, "empty type string") from e

    @field_validator("description")
    @classmethod
    def _one_line(cls, value: str) -> str:
        if "\n" in value or "\r" in value:
            raise ValueError("description must be a single line")
        return value.strip()

    @field_validator("published_at")
    @classmethod
    def _aware(cls, value: datetime) -> datetime:
        return value if value.tzinfo else value.replace(tzinfo=timezone.utc)

    @property
    def signature(self) -> ServiceSignature:
        return parse_type_string(self.type_string)

    def with_id(self) -> "DiscoveryRecord":
        return self.model_copy(update={"id": record_id(self.gist_id, self.uri)})
