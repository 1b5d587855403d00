"""Data types, service signatures and the arrow type-string grammar."""

import threading
from enum import Enum
from typing import Dict, Iterable, List, Optional, Set, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationInfo, model_validator

from .errors import EmptySignature, UnknownType


class Category(str, Enum):
    """Top-level kind of a data type."""
    PRIMITIVE = "primitive"
    NDARRAY = "ndarray"
    MEDIA = "media"


PRIMITIVE_KINDS = ("int", "float", "bool", "string")

# Token suffix per media base: png_img, en_text, fr_voice
MEDIA_SUFFIX = {"image": "img", "text": "text", "voice": "voice"}

DEFAULT_MEDIA_SUBTYPES = {
    "image": ("png", "jpeg"),
    "text": ("en", "fr"),
    "voice": ("en", "fr"),
}


class TypeRegistry:
    """Registered media subtypes and legacy aliases.

    The built-in subtypes can be extended but never removed, so every media
    base always has at least one subtype.
    """

    def __init__(self) -> None:
        self._lock = threading.Lock()
        self._subtypes: Dict[str, Set[str]] = {
            base: set(subtypes) for base, subtypes in DEFAULT_MEDIA_SUBTYPES.items()
        }
        self._aliases: Dict[str, str] = {}

    def register_media_subtype(self, base: str, subtype: str) -> "DataType":
        """Add a subtype to a media base and return the new type."""
        if base not in MEDIA_SUFFIX:
            raise UnknownType(base)
        if not subtype.isidentifier() or not subtype.islower():
            raise ValueError(f"media subtype must be a lowercase identifier, got {subtype!r}")
        with self._lock:
            self._subtypes[base].add(subtype)
        return self._make(Category.MEDIA, base, subtype)

    def register_alias(self, alias: str, token: str) -> None:
        """Map a legacy spelling (e.g. ``image``) to a canonical token."""
        self.parse_token(token)
        with self._lock:
            self._aliases[alias] = token

    def has_subtype(self, base: str, subtype: str) -> bool:
        return subtype in self._subtypes.get(base, ())

    def subtypes(self, base: str) -> Tuple[str, ...]:
        return tuple(sorted(self._subtypes.get(base, ())))

    def tokens(self) -> List[str]:
        """Every token the parser accepts, aliases excluded."""
        tokens = list(PRIMITIVE_KINDS) + ["ndarray"]
        for base, suffix in MEDIA_SUFFIX.items():
            tokens.extend(f"{subtype}_{suffix}" for subtype in self.subtypes(base))
        return tokens

    def parse_token(self, token: str) -> "DataType":
        """Parse one type token.

        Raises:
            UnknownType: For unrecognized tokens, bare media bases included
        """
        token = self._aliases.get(token, token)
        if token in PRIMITIVE_KINDS:
            return self._make(Category.PRIMITIVE, token)
        if token == "ndarray":
            return self._make(Category.NDARRAY, "ndarray")

        subtype, _, suffix = token.rpartition("_")
        for base, base_suffix in MEDIA_SUFFIX.items():
            if suffix == base_suffix and subtype and self.has_subtype(base, subtype):
                return self._make(Category.MEDIA, base, subtype)

        raise UnknownType(token)

    def _make(self, category: "Category", name: str, subtype: Optional[str] = None) -> "DataType":
        return DataType.model_validate(
            {"category": category, "name": name, "subtype": subtype},
            context={"type_registry": self},
        )


type_registry = TypeRegistry()


class DataType(BaseModel):
    """A primitive, an ndarray, or a media type with a subtype.

    Equality is structural over (category, name, subtype).
    """

    model_config = ConfigDict(frozen=True)

    category: Category
    name: str
    subtype: Optional[str] = None

    @model_validator(mode="after")
    def _check_shape(self, info: ValidationInfo) -> "DataType":
        registry = (info.context or {}).get("type_registry", type_registry)
        if self.category == Category.PRIMITIVE:
            if self.name not in PRIMITIVE_KINDS or self.subtype is not None:
                raise ValueError(f"invalid primitive type {self.name!r}")
        elif self.category == Category.NDARRAY:
            if self.name != "ndarray" or self.subtype is not None:
                raise ValueError("ndarray type takes no name or subtype")
        elif self.subtype is None or not registry.has_subtype(self.name, self.subtype):
            raise ValueError(f"unregistered media type {self.name}/{self.subtype}")
        return self

    @classmethod
    def primitive(cls, kind: str) -> "DataType":
        return cls(category=Category.PRIMITIVE, name=kind)

    @classmethod
    def ndarray(cls) -> "DataType":
        return cls(category=Category.NDARRAY, name="ndarray")

    @classmethod
    def media(cls, base: str, subtype: str) -> "DataType":
        return cls(category=Category.MEDIA, name=base, subtype=subtype)

    @classmethod
    def from_token(cls, token: str) -> "DataType":
        return type_registry.parse_token(token)

    @property
    def token(self) -> str:
        if self.category == Category.MEDIA:
            return f"{self.subtype}_{MEDIA_SUFFIX[self.name]}"
        return self.name

    @property
    def is_media(self) -> bool:
        return self.category == Category.MEDIA

    def __str__(self) -> str:
        return self.token


INT = DataType.primitive("int")
FLOAT = DataType.primitive("float")
BOOL = DataType.primitive("bool")
STRING = DataType.primitive("string")
NDARRAY = DataType.ndarray()
PNG_IMG = DataType.media("image", "png")
JPEG_IMG = DataType.media("image", "jpeg")
EN_TEXT = DataType.media("text", "en")
FR_TEXT = DataType.media("text", "fr")
EN_VOICE = DataType.media("voice", "en")
FR_VOICE = DataType.media("voice", "fr")


class ServiceSignature(BaseModel):
    """Zero or more inputs, exactly one output."""

    model_config = ConfigDict(frozen=True)

    inputs: Tuple[DataType, ...] = Field(default_factory=tuple)
    output: DataType

    @property
    def arity(self) -> int:
        return len(self.inputs)

    def __str__(self) -> str:
        return format_type_string(self)


ARROW = "->"


def parse_type_string(s: str, registry: TypeRegistry = type_registry) -> ServiceSignature:
    """Parse an arrow-separated type string.

    Args:
        s: Type string such as ``"png_img -> en_text"``
        registry: Registry of accepted tokens

    Returns:
        Signature whose output is the last token

    Raises:
        EmptySignature: For blank input
        UnknownType: For unrecognized tokens, empty tokens included
    """
    if s is None or not s.strip():
        raise EmptySignature()

    tokens = [token.strip() for token in s.split(ARROW)]
    types = [registry.parse_token(token) for token in tokens]
    return ServiceSignature(inputs=tuple(types[:-1]), output=types[-1])


def format_type_string(sig: ServiceSignature) -> str:
    """Render a signature in the canonical ``a -> b -> c`` form."""
    return f" {ARROW} ".join(t.token for t in [*sig.inputs, sig.output])


def tokens_of(types: Iterable[DataType]) -> List[str]:
    return [t.token for t in types]
