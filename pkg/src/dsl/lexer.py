"""Tokenizer for zoo programs."""

from dataclasses import dataclass
from enum import Enum
from typing import List

from ..core.errors import DslSyntaxError, UnterminatedString


class TokenKind(str, Enum):
    LET = "let"
    IDENT = "identifier"
    STRING = "string"
    EQUALS = "'='"
    TERMINATOR = "';;'"
    SEMICOLON = "';'"
    LBRACKET = "'['"
    RBRACKET = "']'"
    LPAREN = "'('"
    RPAREN = "')'"
    ACQUIRE = "'$'"
    GET = "'#'"
    COMPOSE = "'$>'"
    DEPLOY = "'$@'"
    EOF = "end of input"


@dataclass(frozen=True)
class Token:
    kind: TokenKind
    text: str
    line: int
    col: int

    @property
    def loc(self):
        return (self.line, self.col)


_SYMBOLS = [
    ("$>", TokenKind.COMPOSE),
    ("$@", TokenKind.DEPLOY),
    (";;", TokenKind.TERMINATOR),
    ("$", TokenKind.ACQUIRE),
    ("#", TokenKind.GET),
    ("=", TokenKind.EQUALS),
    (";", TokenKind.SEMICOLON),
    ("[", TokenKind.LBRACKET),
    ("]", TokenKind.RBRACKET),
    ("(", TokenKind.LPAREN),
    (")", TokenKind.RPAREN),
]

_ESCAPES = {'"': '"', "\\": "\\"}


class Lexer:
    """Turns source text into tokens; ``(* ... *)`` comments are skipped."""

    def __init__(self, src: str):
        self.src = src
        self.pos = 0
        self.line = 1
        self.col = 1

    def _peek(self, offset: int = 0) -> str:
        index = self.pos + offset
        return self.src[index] if index < len(self.src) else ""

    def _advance(self, count: int = 1) -> None:
        for _ in range(count):
            if self.src[self.pos] == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
            self.pos += 1

    def _skip_comment(self) -> None:
        line, col = self.line, self.col
        self._advance(2)
        while self.pos < len(self.src):
            if self.src.startswith("*)", self.pos):
                self._advance(2)
                return
            self._advance()
        raise DslSyntaxError(line, col, "unterminated comment")

    def _string(self) -> Token:
        line, col = self.line, self.col
        self._advance()
        chars = []
        while True:
            ch = self._peek()
            if ch == "" or ch == "\n":
                raise UnterminatedString(line, col)
            if ch == '"':
                self._advance()
                return Token(TokenKind.STRING, "".join(chars), line, col)
            if ch == "\\":
                escaped = self._peek(1)
                if escaped not in _ESCAPES:
                    raise DslSyntaxError(self.line, self.col, f"invalid escape '\\{escaped}'")
                chars.append(_ESCAPES[escaped])
                self._advance(2)
                continue
            chars.append(ch)
            self._advance()

    def _word(self) -> Token:
        line, col = self.line, self.col
        start = self.pos
        while self._peek() and (self._peek().isalnum() or self._peek() == "_"):
            self._advance()
        text = self.src[start:self.pos]
        kind = TokenKind.LET if text == "let" else TokenKind.IDENT
        return Token(kind, text, line, col)

    def tokens(self) -> List[Token]:
        """Tokenize the whole source.

        Raises:
            DslSyntaxError: On unexpected characters or unterminated comments
            UnterminatedString: On a string literal missing its closing quote
        """
        out: List[Token] = []
        while self.pos < len(self.src):
            ch = self._peek()
            if ch.isspace():
                self._advance()
            elif self.src.startswith("(*", self.pos):
                self._skip_comment()
            elif ch == '"':
                out.append(self._string())
            elif ch.isalpha() or ch == "_":
                out.append(self._word())
            else:
                for symbol, kind in _SYMBOLS:
                    if self.src.startswith(symbol, self.pos):
                        out.append(Token(kind, symbol, self.line, self.col))
                        self._advance(len(symbol))
                        break
                else:
                    raise DslSyntaxError(self.line, self.col, f"unexpected character {ch!r}")
        out.append(Token(TokenKind.EOF, "", self.line, self.col))
        return out


def tokenize(src: str) -> List[Token]:
    return Lexer(src).tokens()
