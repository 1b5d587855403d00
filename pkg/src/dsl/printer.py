"""Canonical source text for syntax trees; parsing the output gives the tree back."""

from typing import Iterable

from .nodes import Acquire, ComposeList, Deploy, Expr, GetItem, Let, Var


def quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _operand(expr: Expr) -> str:
    """An operand of ``#`` or the right side of ``$>``."""
    text = print_expr(expr)
    if isinstance(expr, (ComposeList, Deploy)):
        return f"({text})"
    return text


def print_expr(expr: Expr) -> str:
    if isinstance(expr, Acquire):
        return f"$ {quote(expr.ref)}"
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, GetItem):
        return f"{_operand(expr.expr)} # {quote(expr.name)}"
    if isinstance(expr, ComposeList):
        items = "; ".join(print_expr(item) for item in expr.items)
        return f"[{items}] $> {_operand(expr.target)}"
    if isinstance(expr, Deploy):
        inner = print_expr(expr.expr)
        return f"{inner} $@ {expr.backend.kind.keyword} {quote(expr.backend.target)}"
    if isinstance(expr, Let):
        return f"let {expr.name} = {print_expr(expr.expr)};;"
    raise TypeError(f"not a zoo expression: {expr!r}")


def print_program(statements: Iterable[Let]) -> str:
    return "\n".join(print_expr(statement) for statement in statements) + "\n"
