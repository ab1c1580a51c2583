"""Plain-text system files.

A file declares the field, the coefficient matrices of ``sigma^k`` and an
optional right-hand side::

    # comment
    field rational(t)
    A[0] = [[t^2, 1], [0, t]]
    A[1] = [[1, 0], [0, -1]]
    b = [0, t + 1]
    options { degree = 5; merge = improved; powers = [0] }

Entries use the same expression grammar as polynomial parsing. ``b`` may be
omitted (homogeneous system). Options: ``degree`` (int), ``kind``
(``each`` | ``total``), ``merge`` (``improved`` | ``lcm``) and ``powers``
(a list, one per generator, or ``{name: power, ...}``).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field

from .arith import RatFunc, parse_rational
from .field import FieldSpec
from .ore import LinearSystem, OreMatrix
from .textfmt import ParseError, Token, TokenStream, tokenize

OPTION_KEYS = ("degree", "kind", "merge", "powers")


@dataclass(frozen=True)
class SystemFile:
    field: FieldSpec
    system: LinearSystem
    options: dict = dc_field(default_factory=dict)


def _field_header(stream: TokenStream) -> tuple[FieldSpec, Token]:
    start = stream.expect("field")
    kind = stream.expect_kind("NAME", "field kind")
    stream.expect("(")
    parts = [kind.text, "("]
    while not stream.at(")"):
        tok = stream.next()
        if tok.kind == "EOF":
            raise ParseError("unterminated field header", start.line, start.col)
        parts.append(tok.text + (" " if tok.text in (",", ";") else ""))
    stream.expect(")")
    parts.append(")")
    try:
        return FieldSpec.from_header("".join(parts)), start
    except ValueError as exc:
        raise ParseError(str(exc), kind.line, kind.col) from None


def _vector(stream: TokenStream, ring) -> list[RatFunc]:
    stream.expect("[")
    out = []
    if not stream.at("]"):
        out.append(parse_rational(stream, ring))
        while stream.accept(","):
            out.append(parse_rational(stream, ring))
    stream.expect("]")
    return out


def _matrix(stream: TokenStream, ring) -> tuple[list[list[RatFunc]], Token]:
    open_tok = stream.expect("[")
    rows = [_vector(stream, ring)]
    while stream.accept(","):
        rows.append(_vector(stream, ring))
    stream.expect("]")
    width = len(rows[0])
    if width == 0 or any(len(r) != width for r in rows):
        raise ParseError("matrix rows must be nonempty and of equal length", open_tok.line, open_tok.col)
    return rows, open_tok


def _int(stream: TokenStream) -> int:
    neg = stream.accept("-")
    tok = stream.expect_kind("NUM", "integer")
    return -int(tok.text) if neg else int(tok.text)


def _options(stream: TokenStream, field: FieldSpec) -> dict:
    stream.expect("options")
    stream.expect("{")
    opts: dict = {}
    while not stream.accept("}"):
        key = stream.expect_kind("NAME", "option name")
        if key.text not in OPTION_KEYS:
            raise ParseError(f"unknown option {key.text!r}", key.line, key.col)
        if key.text in opts:
            raise ParseError(f"duplicate option {key.text!r}", key.line, key.col)
        stream.expect("=")
        if key.text == "degree":
            value = _int(stream)
            if value < 0:
                raise ParseError("degree must be nonnegative", key.line, key.col)
        elif key.text in ("kind", "merge"):
            tok = stream.expect_kind("NAME", key.text)
            allowed = ("each", "total") if key.text == "kind" else ("improved", "lcm")
            if tok.text not in allowed:
                raise ParseError(f"{key.text} must be one of {', '.join(allowed)}", tok.line, tok.col)
            value = tok.text
        elif stream.accept("["):
            value = [_int(stream)]
            while stream.accept(","):
                value.append(_int(stream))
            stream.expect("]")
            if len(value) != len(field.generators):
                raise ParseError(f"powers needs {len(field.generators)} entries", key.line, key.col)
        else:
            stream.expect("{")
            value = {}
            while not stream.accept("}"):
                name = stream.expect_kind("NAME", "generator name")
                if name.text not in field.gen_names:
                    raise ParseError(f"unknown generator {name.text!r}", name.line, name.col)
                stream.expect(":")
                value[name.text] = _int(stream)
                if not stream.at("}"):
                    stream.expect(",")
        opts[key.text] = value
        stream.accept(";")
        stream.accept(",")
    return opts


def parse_system(text: str) -> SystemFile:
    """Parse a system file; errors are :class:`ParseError` with a location."""
    stream = TokenStream(tokenize(text))
    field, _ = _field_header(stream)
    ring = field.ring
    mats: dict[int, tuple[list[list[RatFunc]], Token]] = {}
    rhs = None
    opts: dict = {}
    seen_options = False
    while stream.peek().kind != "EOF":
        tok = stream.peek()
        if tok.kind == "NAME" and tok.text == "A":
            stream.next()
            stream.expect("[")
            k = int(stream.expect_kind("NUM", "matrix index").text)
            stream.expect("]")
            stream.expect("=")
            if k in mats:
                raise ParseError(f"A[{k}] given twice", tok.line, tok.col)
            mats[k] = _matrix(stream, ring)
        elif tok.kind == "NAME" and tok.text == "b":
            stream.next()
            stream.expect("=")
            if rhs is not None:
                raise ParseError("b given twice", tok.line, tok.col)
            rhs = (_vector(stream, ring), tok)
        elif tok.kind == "NAME" and tok.text == "options":
            if seen_options:
                raise ParseError("options given twice", tok.line, tok.col)
            opts = _options(stream, field)
            seen_options = True
        else:
            raise ParseError(f"expected 'A[k] =', 'b =' or 'options', found {tok.text!r}", tok.line, tok.col)
    if not mats:
        raise stream.error("no coefficient matrices given")
    order = max(mats)
    missing = [k for k in range(order + 1) if k not in mats]
    if missing:
        raise stream.error(f"missing coefficient matrix A[{missing[0]}]")
    shape = (len(mats[0][0]), len(mats[0][0][0]))
    for k in range(order + 1):
        rows, where = mats[k]
        if (len(rows), len(rows[0])) != shape:
            raise ParseError(f"A[{k}] is {len(rows)}x{len(rows[0])}, expected {shape[0]}x{shape[1]}", where.line, where.col)
    if rhs is None:
        b = [RatFunc(ring.zero)] * shape[0]
    else:
        b, where = rhs
        if len(b) != shape[0]:
            raise ParseError(f"b has {len(b)} entries, expected {shape[0]}", where.line, where.col)
    op = OreMatrix.from_list(field, [mats[k][0] for k in range(order + 1)])
    return SystemFile(field, LinearSystem(op, b), opts)


def _row(values) -> str:
    return "[" + ", ".join(str(x) for x in values) + "]"


def format_options(opts: dict) -> str:
    parts = []
    for key in OPTION_KEYS:
        if key not in opts:
            continue
        value = opts[key]
        if isinstance(value, dict):
            value = "{" + ", ".join(f"{n}: {e}" for n, e in value.items()) + "}"
        elif isinstance(value, list):
            value = _row(value)
        parts.append(f"{key} = {value}")
    return "options { " + "; ".join(parts) + " }"


def format_system(sf: SystemFile) -> str:
    """Canonical text; ``format_system(parse_system(t))`` is a fixed point."""
    op = sf.system.op
    lines = [f"field {sf.field.header()}"]
    zero_row = [0] * op.cols
    for k in range((op.hi or 0) + 1):
        M = op.coeffs.get(k)
        rows = [_row(r) for r in M] if M is not None else [_row(zero_row)] * op.rows
        lines.append(f"A[{k}] = [" + ", ".join(rows) + "]")
    if not sf.system.is_homogeneous():
        lines.append(f"b = {_row(sf.system.rhs)}")
    if sf.options:
        lines.append(format_options(sf.options))
    return "\n".join(lines) + "\n"
