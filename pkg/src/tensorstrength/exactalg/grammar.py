"""Text grammar for polynomials.

    poly   := [sign] term (sign term)*
    term   := factor ('*' factor)*
    factor := INT ['/' INT] | NAME ['^' INT]

Whitespace is ignored.  Variables are ``x1..xn`` unless a name table is given.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .fields import Field, QQ
from .polynomial import Polynomial

_TOKEN = re.compile(r"\s*(?:(?P<int>\d+)|(?P<name>[A-Za-z_][A-Za-z_0-9]*)|(?P<op>[-+*/^]))")
_XVAR = re.compile(r"^x(\d+)$")


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} at line {line}, column {column}")
        self.line = line
        self.column = column


@dataclass
class _Tok:
    kind: str
    text: str
    pos: int


def _position(text: str, pos: int) -> tuple[int, int]:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return line, col


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos].isspace():
            pos += 1
            continue
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r}", *_position(text, pos))
        kind = m.lastgroup
        start = m.start(kind)
        toks.append(_Tok(kind, m.group(kind), start))
        pos = m.end()
    toks.append(_Tok("end", "", len(text)))
    return toks


def parse_polynomial(text: str, field: Field = QQ, nvars: int | None = None,
                     names: Mapping[str, int] | None = None) -> Polynomial:
    """Parse ``text``; ``names`` maps identifiers to variable indices."""
    toks = _tokenize(text)
    i = 0
    terms: list[tuple[dict, Fraction]] = []
    max_var = -1

    def fail(msg, tok):
        raise ParseError(msg, *_position(text, tok.pos))

    def expect_int(tok, what):
        if tok.kind != "int":
            fail(f"expected {what}", tok)
        return int(tok.text)

    if toks[0].kind == "end":
        fail("empty polynomial", toks[0])

    sign = 1
    if toks[i].kind == "op" and toks[i].text in "+-":
        sign = -1 if toks[i].text == "-" else 1
        i += 1
    while True:
        coeff = Fraction(sign)
        mono: dict[int, int] = {}
        while True:
            tok = toks[i]
            if tok.kind == "int":
                num = int(tok.text)
                i += 1
                if toks[i].kind == "op" and toks[i].text == "/":
                    den = expect_int(toks[i + 1], "denominator")
                    if den == 0:
                        fail("zero denominator", toks[i + 1])
                    i += 2
                    coeff *= Fraction(num, den)
                else:
                    coeff *= num
            elif tok.kind == "name":
                if names is not None:
                    if tok.text not in names:
                        fail(f"unknown variable {tok.text!r}", tok)
                    var = names[tok.text]
                else:
                    m = _XVAR.match(tok.text)
                    if not m or int(m.group(1)) == 0:
                        fail(f"unknown variable {tok.text!r} (expected x1, x2, ...)", tok)
                    var = int(m.group(1)) - 1
                max_var = max(max_var, var)
                i += 1
                exp = 1
                if toks[i].kind == "op" and toks[i].text == "^":
                    exp = expect_int(toks[i + 1], "exponent")
                    i += 2
                mono[var] = mono.get(var, 0) + exp
            else:
                fail("expected a number or a variable", tok)
            if toks[i].kind == "op" and toks[i].text == "*":
                i += 1
                continue
            break
        terms.append((mono, coeff))
        tok = toks[i]
        if tok.kind == "end":
            break
        if tok.kind == "op" and tok.text in "+-":
            sign = -1 if tok.text == "-" else 1
            i += 1
            if toks[i].kind == "end":
                fail("dangling sign", toks[i])
            continue
        fail(f"unexpected token {tok.text!r}", tok)

    if nvars is None:
        nvars = (max(names.values()) + 1) if names else max_var + 1
    if max_var >= nvars:
        raise ParseError(f"variable index {max_var + 1} exceeds {nvars} variables", 1, 1)
    out: dict = {}
    for mono, c in terms:
        key = tuple(sorted(mono.items()))
        out[key] = out.get(key, 0) + c
    return Polynomial(field, max(nvars, 0), {m: field.convert(c) for m, c in out.items()})
