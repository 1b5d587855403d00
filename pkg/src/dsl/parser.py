"""Recursive-descent parser for zoo programs.

Grammar::

    program  := stmt*
    stmt     := "let" ident "=" expr ";;"
    expr     := compose ("$@" backend)*
    compose  := postfix ("$>" postfix)*
    postfix  := primary ("#" string)*
    primary  := "$" string | "[" expr (";" expr)* "]" | ident | "(" expr ")"
    backend  := ("CONTAINER" | "SCRIPT" | "UNIKERNEL") string

``$>`` is left-associative and a bare left operand stands for a one-element
list. A bracketed list may only appear as the left operand of ``$>``.
"""

from typing import List, Tuple

from ..core.errors import DslSyntaxError, UnknownBackendKeyword
from ..publish.models import BackendKind, BackendSpec
from .lexer import Token, TokenKind, tokenize
from .nodes import Acquire, ComposeList, Deploy, Expr, GetItem, Let, Var


class _ServiceList:
    """A bracketed list awaiting its ``$>``."""

    def __init__(self, items: Tuple[Expr, ...], token: Token):
        self.items = items
        self.token = token


BACKEND_KEYWORDS = {kind.keyword: kind for kind in BackendKind}


class Parser:
    def __init__(self, tokens: List[Token]):
        self.tokens = tokens
        self.index = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.index]

    def _error(self, message: str, token: Token = None) -> DslSyntaxError:
        token = token or self.current
        return DslSyntaxError(token.line, token.col, message)

    def _expect(self, kind: TokenKind, what: str = "") -> Token:
        token = self.current
        if token.kind != kind:
            found = repr(token.text) if token.text else token.kind.value
            raise self._error(f"expected {what or kind.value}, found {found}")
        self.index += 1
        return token

    def _accept(self, kind: TokenKind) -> bool:
        if self.current.kind == kind:
            self.index += 1
            return True
        return False

    def program(self) -> List[Let]:
        statements = []
        while self.current.kind != TokenKind.EOF:
            statements.append(self.statement())
        return statements

    def statement(self) -> Let:
        let = self._expect(TokenKind.LET, "'let'")
        name = self._expect(TokenKind.IDENT, "identifier after 'let'")
        self._expect(TokenKind.EQUALS)
        expr = self.expr()
        self._expect(TokenKind.TERMINATOR)
        return Let(name.text, expr, loc=let.loc)

    def expr(self) -> Expr:
        left = self._finish(self.compose())
        while self.current.kind == TokenKind.DEPLOY:
            op = self.current
            self.index += 1
            left = Deploy(left, self.backend(), loc=op.loc)
        return left

    def backend(self) -> BackendSpec:
        keyword = self._expect(TokenKind.IDENT, "backend keyword")
        kind = BACKEND_KEYWORDS.get(keyword.text)
        if kind is None:
            raise UnknownBackendKeyword(keyword.line, keyword.col, keyword.text)
        target = self._expect(TokenKind.STRING, "backend target string")
        if not target.text:
            raise self._error("backend target must not be empty", target)
        return BackendSpec(kind=kind, target=target.text)

    def compose(self):
        left = self.postfix()
        while self.current.kind == TokenKind.COMPOSE:
            op = self.current
            self.index += 1
            target = self.postfix()
            if isinstance(target, _ServiceList):
                raise self._error("right operand of '$>' must be a service, not a list", target.token)
            items = left.items if isinstance(left, _ServiceList) else (left,)
            left = ComposeList(items, target, loc=op.loc)
        return left

    def postfix(self):
        expr = self.primary()
        while self.current.kind == TokenKind.GET:
            op = self.current
            self.index += 1
            if isinstance(expr, _ServiceList):
                raise self._error("'#' cannot be applied to a service list", op)
            name = self._expect(TokenKind.STRING, "service name string")
            expr = GetItem(expr, name.text, loc=op.loc)
        return expr

    def primary(self):
        token = self.current
        if self._accept(TokenKind.ACQUIRE):
            ref = self._expect(TokenKind.STRING, "package reference string after '$'")
            return Acquire(ref.text, loc=token.loc)
        if self._accept(TokenKind.LBRACKET):
            items = [self.expr()]
            while self._accept(TokenKind.SEMICOLON):
                items.append(self.expr())
            self._expect(TokenKind.RBRACKET)
            return _ServiceList(tuple(items), token)
        if self._accept(TokenKind.IDENT):
            return Var(token.text, loc=token.loc)
        if self._accept(TokenKind.LPAREN):
            inner = self.expr()
            self._expect(TokenKind.RPAREN)
            return inner
        found = repr(token.text) if token.text else token.kind.value
        raise self._error(f"expected an expression, found {found}")

    def _finish(self, node) -> Expr:
        if isinstance(node, _ServiceList):
            raise self._error("a service list must be followed by '$>'", node.token)
        return node


def parse(src: str) -> List[Let]:
    """Parse a program into its ``let`` statements.

    Raises:
        DslSyntaxError: On malformed input, with line and column
        UnterminatedString: On a string literal missing its closing quote
        UnknownBackendKeyword: On a backend other than CONTAINER, SCRIPT, UNIKERNEL
    """
    return Parser(tokenize(src)).program()


def parse_expr(src: str) -> Expr:
    """Parse a single expression."""
    parser = Parser(tokenize(src))
    expr = parser.expr()
    parser._expect(TokenKind.EOF)
    return expr
