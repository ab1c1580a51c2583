"""Tokenizer and expression grammar shared by polynomial parsing and system files.

Grammar (whitespace and ``#`` comments ignored)::

    expr   := term (('+' | '-') term)*
    term   := unary (('*' | '/') unary)*
    unary  := ('+' | '-') unary | power
    power  := atom (('^' | '**') INT)?
    atom   := NUMBER | NAME | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Iterator


class ParseError(ValueError):
    """Syntax or name error carrying a 1-based line/column location."""

    def __init__(self, message: str, line: int = 0, col: int = 0):
        self.line = line
        self.col = col
        where = f"line {line}, column {col}: " if line else ""
        super().__init__(where + message)


@dataclass(frozen=True)
class Token:
    kind: str  # NUM, NAME, OP, EOF
    text: str
    line: int
    col: int


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*/^()\[\]{},;=:])
    """,
    re.VERBOSE,
)


def tokenize(text: str) -> list[Token]:
    tokens = []
    line, line_start = 1, 0
    pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos - line_start + 1)
        kind = m.lastgroup
        col = pos - line_start + 1
        if kind == "nl":
            line += 1
            line_start = m.end()
        elif kind == "num":
            tokens.append(Token("NUM", m.group(), line, col))
        elif kind == "name":
            tokens.append(Token("NAME", m.group(), line, col))
        elif kind == "op":
            tokens.append(Token("OP", m.group(), line, col))
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    def peek(self, offset: int = 0) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def next(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, text: str) -> bool:
        tok = self.peek()
        return tok.kind in ("OP", "NAME") and tok.text == text

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.pos += 1
            return True
        return False

    def expect(self, text: str) -> Token:
        tok = self.peek()
        if not self.at(text):
            shown = tok.text or "end of input"
            raise ParseError(f"expected {text!r}, found {shown!r}", tok.line, tok.col)
        return self.next()

    def expect_kind(self, kind: str, what: str) -> Token:
        tok = self.peek()
        if tok.kind != kind:
            shown = tok.text or "end of input"
            raise ParseError(f"expected {what}, found {shown!r}", tok.line, tok.col)
        return self.next()

    def error(self, message: str) -> ParseError:
        tok = self.peek()
        return ParseError(message, tok.line, tok.col)


def parse_expression(stream: TokenStream, atom: Callable[[Token], object], number: Callable[[int], object]):
    """Parse one expression off ``stream``.

    ``atom`` maps a NAME token to a value (raising ParseError for unknown
    names) and ``number`` lifts an integer literal; the values must support
    ``+ - * /`` and integer powers.
    """

    def expr():
        value = term()
        while True:
            if stream.accept("+"):
                value = value + term()
            elif stream.accept("-"):
                value = value - term()
            else:
                return value

    def term():
        value = unary()
        while True:
            if stream.accept("*"):
                value = value * unary()
            elif stream.at("/"):
                tok = stream.next()
                rhs = unary()
                try:
                    value = value / rhs
                except ZeroDivisionError:
                    raise ParseError("division by zero", tok.line, tok.col) from None
            else:
                return value

    def unary():
        if stream.accept("-"):
            return -unary()
        if stream.accept("+"):
            return unary()
        return power()

    def power():
        base = primary()
        if stream.accept("^") or stream.accept("**"):
            tok = stream.expect_kind("NUM", "integer exponent")
            return base ** int(tok.text)
        return base

    def primary():
        tok = stream.peek()
        if tok.kind == "NUM":
            stream.next()
            return number(int(tok.text))
        if tok.kind == "NAME":
            stream.next()
            return atom(tok)
        if stream.accept("("):
            value = expr()
            stream.expect(")")
            return value
        shown = tok.text or "end of input"
        raise ParseError(f"unexpected {shown!r}", tok.line, tok.col)

    return expr()


def iter_terms_text(terms: Iterator[tuple[tuple[int, ...], object]], names: tuple[str, ...]) -> str:
    """Render ``(exponents, coefficient)`` pairs, already in monomial order."""
    parts: list[str] = []
    for exps, coeff in terms:
        mono = "*".join(
            name if e == 1 else f"{name}^{e}" for name, e in zip(names, exps) if e
        )
        negative = coeff < 0
        mag = -coeff if negative else coeff
        if not mono:
            body = str(mag)
        elif mag == 1:
            body = mono
        else:
            body = f"{mag}*{mono}"
        if not parts:
            parts.append(f"-{body}" if negative else body)
        else:
            parts.append(f" - {body}" if negative else f" + {body}")
    return "".join(parts) if parts else "0"
