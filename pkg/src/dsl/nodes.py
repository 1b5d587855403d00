"""Syntax tree of zoo programs.

Source locations ride along on every node but take no part in equality, so
trees parsed from differently formatted sources compare equal.
"""

from dataclasses import dataclass, field
from typing import Optional, Tuple, Union

from ..publish.models import BackendSpec


Loc = Optional[Tuple[int, int]]


@dataclass(frozen=True)
class Acquire:
    """``$ "gid/vid"``: the services of a package."""

    ref: str
    loc: Loc = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class GetItem:
    """``expr # "name"``: one service out of a service dictionary."""

    expr: "Expr"
    name: str
    loc: Loc = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class ComposeList:
    """``[f1; ...; fn] $> g``."""

    items: Tuple["Expr", ...]
    target: "Expr"
    loc: Loc = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Deploy:
    """``expr $@ KIND "target"``: publish, yielding a URI string."""

    expr: "Expr"
    backend: BackendSpec
    loc: Loc = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Var:
    name: str
    loc: Loc = field(default=None, compare=False, repr=False)


@dataclass(frozen=True)
class Let:
    """``let name = expr;;``. Top-level statements have no body."""

    name: str
    expr: "Expr"
    body: Optional["Expr"] = None
    loc: Loc = field(default=None, compare=False, repr=False)


Expr = Union[Acquire, GetItem, ComposeList, Deploy, Var, Let]
