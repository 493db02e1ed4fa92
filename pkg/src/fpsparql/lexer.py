"""Tokenizer for the query language.

Keywords are recognized case-insensitively; variables and identifiers are
case-sensitive. ``?`` followed by a name character starts a variable, a lone
``?`` is the optional-repetition operator. A quoted string immediately (or
whitespace-separated) followed by ``^^`` and a datatype name lexes as one
typed-literal token.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import QueryParseError

KEYWORDS = frozenset(
    ["select", "where", "fconstruct", "pconstruct", "apply", "as",
     "union", "intersect", "minus", "filter", "regex"]
)

KW = "keyword"
VAR = "variable"
IDENT = "identifier"
STRING = "string"
TYPED = "typed-literal"
PUNCT = "punctuation"
CMP = "comparison"
LOGIC = "logical"
EOF = "eof"

_IDENT_START = re.compile(r"[A-Za-z_@]")
_IDENT_BODY = re.compile(r"[A-Za-z0-9_:\-]")
_VAR_BODY = re.compile(r"[A-Za-z0-9_]")


@dataclass(frozen=True)
class Token:
    kind: str
    lexeme: str
    line: int
    col: int
    datatype: str | None = None  # set for typed-literal tokens

    def describe(self) -> str:
        if self.kind == EOF:
            return "end of input"
        return f"{self.kind} {self.lexeme!r}"


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0
        self.line = 1
        self.col = 1

    def error(self, message: str) -> QueryParseError:
        return QueryParseError(message, self.line, self.col)

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.pos]
        self.pos += 1
        if ch == "\n":
            self.line += 1
            self.col = 1
        else:
            self.col += 1
        return ch

    def skip_space_and_comments(self) -> None:
        while self.pos < len(self.text):
            ch = self.peek()
            if ch.isspace():
                self.advance()
            elif ch == "#":
                while self.pos < len(self.text) and self.peek() != "\n":
                    self.advance()
            else:
                return

    def read_string(self) -> str:
        quote = self.advance()
        out: list[str] = []
        while True:
            if self.pos >= len(self.text):
                raise self.error("unterminated string")
            ch = self.advance()
            if ch == "\n":
                raise self.error("unterminated string")
            if ch == "\\":
                if self.pos >= len(self.text):
                    raise self.error("unterminated string")
                nxt = self.advance()
                rep = {"\\": "\\", '"': '"', "'": "'", "t": "\t", "n": "\n", "r": "\r"}.get(nxt)
                if rep is None:
                    raise self.error(f"unknown escape \\{nxt}")
                out.append(rep)
                continue
            if ch == quote:
                return "".join(out)
            out.append(ch)

    def read_ident(self) -> str:
        start = self.pos
        self.advance()
        while self.pos < len(self.text) and _IDENT_BODY.match(self.peek()):
            self.advance()
        return self.text[start:self.pos]


def tokenize(text: str) -> list[Token]:
    """Produce the full token stream, ending with an EOF token."""
    sc = _Scanner(text)
    tokens: list[Token] = []
    while True:
        sc.skip_space_and_comments()
        line, col = sc.line, sc.col
        if sc.pos >= len(sc.text):
            tokens.append(Token(EOF, "", line, col))
            return tokens
        ch = sc.peek()
        if ch in "\"'":
            value = sc.read_string()
            save = sc.pos, sc.line, sc.col
            sc.skip_space_and_comments()
            if sc.peek() == "^" and sc.peek(1) == "^":
                sc.advance()
                sc.advance()
                sc.skip_space_and_comments()
                if not _IDENT_START.match(sc.peek() or ""):
                    raise sc.error("expected datatype after ^^")
                datatype = sc.read_ident()
                tokens.append(Token(TYPED, value, line, col, datatype=datatype))
            else:
                sc.pos, sc.line, sc.col = save
                tokens.append(Token(STRING, value, line, col))
            continue
        if ch == "?":
            if _VAR_BODY.match(sc.peek(1) or ""):
                sc.advance()
                start = sc.pos
                while sc.pos < len(sc.text) and _VAR_BODY.match(sc.peek()):
                    sc.advance()
                tokens.append(Token(VAR, sc.text[start:sc.pos], line, col))
            else:
                sc.advance()
                tokens.append(Token(PUNCT, "?", line, col))
            continue
        if _IDENT_START.match(ch):
            word = sc.read_ident()
            if word.lower() in KEYWORDS:
                tokens.append(Token(KW, word.lower(), line, col))
            else:
                tokens.append(Token(IDENT, word, line, col))
            continue
        if ch in "<>=!":
            nxt = sc.peek(1)
            if ch == "!" and nxt != "=":
                raise sc.error("expected '=' after '!'")
            if nxt == "=" and ch != "=":
                sc.advance()
                sc.advance()
                op = ch + "="
            else:
                sc.advance()
                op = ch
            tokens.append(Token(CMP, op, line, col))
            continue
        if ch == "&":
            if sc.peek(1) != "&":
                raise sc.error("expected '&&'")
            sc.advance()
            sc.advance()
            tokens.append(Token(LOGIC, "&&", line, col))
            continue
        if ch == "|":
            if sc.peek(1) == "|":
                sc.advance()
                sc.advance()
                tokens.append(Token(LOGIC, "||", line, col))
            else:
                sc.advance()
                tokens.append(Token(PUNCT, "|", line, col))
            continue
        if ch in "{}().,*+":
            sc.advance()
            tokens.append(Token(PUNCT, ch, line, col))
            continue
        raise sc.error(f"illegal character {ch!r}")
