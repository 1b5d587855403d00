"""The zoo composition language: ``$``, ``#``, ``$>`` and ``$@``."""

from ..publish.models import BackendKind, BackendSpec
from .evaluator import Environment, Evaluator, evaluate
from .lexer import Token, TokenKind, tokenize
from .nodes import Acquire, ComposeList, Deploy, Expr, GetItem, Let, Var
from .parser import parse, parse_expr
from .printer import print_expr, print_program

__all__ = [
    "BackendKind",
    "BackendSpec",
    "Environment",
    "Evaluator",
    "evaluate",
    "Token",
    "TokenKind",
    "tokenize",
    "Acquire",
    "ComposeList",
    "Deploy",
    "Expr",
    "GetItem",
    "Let",
    "Var",
    "parse",
    "parse_expr",
    "print_expr",
    "print_program",
]
