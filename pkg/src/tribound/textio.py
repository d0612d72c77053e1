"""Plain-text formats for polynomials and triangular representations.

Polynomial files look like::

    # comment
    vars: x, y
    2*x^2*y - 1/3
    x y + 1          # '*' may be omitted

Representation files use the same header, list each component's members one
per line, separate components with ``---`` and mark inequations with ``!=``.
A component whose only line is ``0`` is the empty triangular set, and a
component containing a nonzero constant marks the inconsistent system.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import List, Optional, Tuple

from .polynomial import Polynomial, VariableOrder

__all__ = [
    "ParseError",
    "parse_polynomial",
    "parse_polynomial_file",
    "parse_polynomial_list",
    "parse_vars_line",
]


class ParseError(ValueError):
    """Malformed input; carries a 1-based line and column."""

    def __init__(self, message: str, line: int = 1, column: int = 1):
        self.message = message
        self.line = line
        self.column = column
        super().__init__(f"line {line}, column {column}: {message}")


_TOKEN = re.compile(
    r"\s*(?:(?P<num>\d+)|(?P<name>[A-Za-z_][A-Za-z0-9_]*)|(?P<pow>\*\*|\^)|(?P<op>[-+*/()]))"
)


@dataclass
class _Tok:
    kind: str
    text: str
    col: int


def _tokenize(text: str, line: int, col0: int) -> List[_Tok]:
    toks = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            bad = pos + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"unexpected character {text[bad]!r}", line, col0 + bad)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), col0 + m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", col0 + len(text.rstrip())))
    return toks


class _Parser:
    """Recursive descent over ``expr := term (('+'|'-') term)*``."""

    def __init__(self, text: str, order: VariableOrder, line: int, col0: int):
        self.order = order
        self.line = line
        self.toks = _tokenize(text, line, col0)
        self.i = 0
        # longest names first so juxtaposed names split greedily
        self._names = sorted(order.names, key=len, reverse=True)

    def peek(self) -> _Tok:
        return self.toks[self.i]

    def take(self) -> _Tok:
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg: str, tok: Optional[_Tok] = None):
        tok = tok or self.peek()
        raise ParseError(msg, self.line, tok.col)

    def parse(self) -> Polynomial:
        if self.peek().kind == "end":
            self.error("empty expression")
        p = self.expr()
        if self.peek().kind != "end":
            self.error(f"unexpected {self.peek().text!r}")
        return p

    def expr(self) -> Polynomial:
        sign = 1
        if self.peek().text in "+-" and self.peek().kind == "op":
            sign = -1 if self.take().text == "-" else 1
        acc = self.term()
        if sign < 0:
            acc = -acc
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.take().text
            rhs = self.term()
            acc = acc + rhs if op == "+" else acc - rhs
        return acc

    def _starts_factor(self, tok: _Tok) -> bool:
        return tok.kind in ("num", "name") or (tok.kind == "op" and tok.text == "(")

    def term(self) -> Polynomial:
        acc = self.power()
        while True:
            tok = self.peek()
            if tok.kind == "op" and tok.text == "*":
                self.take()
                acc = acc * self.power()
            elif tok.kind == "op" and tok.text == "/":
                self.take()
                den_tok = self.peek()
                den = self.power()
                if not den.is_constant() or den.is_zero():
                    self.error("division is only allowed by a nonzero constant", den_tok)
                acc = acc.scale(1 / den.constant_value())
            elif self._starts_factor(tok):
                acc = acc * self.power()
            else:
                return acc

    def power(self) -> Polynomial:
        base = self.atom()
        if self.peek().kind == "pow":
            self.take()
            tok = self.peek()
            if tok.kind != "num":
                self.error("exponent must be a non-negative integer", tok)
            self.take()
            base = base ** int(tok.text)
        return base

    def atom(self) -> Polynomial:
        tok = self.take()
        if tok.kind == "num":
            return Polynomial.constant(self.order, int(tok.text))
        if tok.kind == "name":
            return self._name(tok)
        if tok.kind == "op" and tok.text == "(":
            inner = self.expr()
            close = self.take()
            if close.text != ")":
                self.error("expected ')'", close)
            return inner
        if tok.kind == "end":
            self.error("unexpected end of expression", tok)
        self.error(f"unexpected {tok.text!r}", tok)

    def _name(self, tok: _Tok) -> Polynomial:
        name = tok.text
        if name in self.order.names:
            return self.order.var(name)
        # juxtaposed variable names such as "xy"
        out = Polynomial.constant(self.order, 1)
        rest = name
        while rest:
            for cand in self._names:
                if rest.startswith(cand):
                    out = out * self.order.var(cand)
                    rest = rest[len(cand):]
                    break
            else:
                self.error(f"unknown variable {name!r}", tok)
        return out


def parse_polynomial(text: str, order: VariableOrder, line: int = 1, column: int = 1) -> Polynomial:
    """Parse one polynomial; error positions are reported relative to ``line``/``column``."""
    return _Parser(text, order, line, column).parse()


def _strip_comment(raw: str) -> str:
    return raw.split("#", 1)[0]


def parse_vars_line(text: str, line: int = 1) -> VariableOrder:
    m = re.match(r"\s*vars\s*:(.*)$", text)
    if not m:
        raise ParseError("expected a 'vars: ...' header", line, 1)
    body = m.group(1)
    names = [s.strip() for s in body.split(",")] if body.strip() else []
    for nm in names:
        if not re.fullmatch(r"[A-Za-z_][A-Za-z0-9_]*", nm):
            col = text.find(nm) + 1 if nm else len(text)
            raise ParseError(f"bad variable name {nm!r}", line, max(col, 1))
    try:
        return VariableOrder(names)
    except ValueError as exc:
        raise ParseError(str(exc), line, 1) from None


def _header(lines: List[str]) -> Tuple[Optional[VariableOrder], int]:
    for idx, raw in enumerate(lines):
        if _strip_comment(raw).strip():
            return parse_vars_line(_strip_comment(raw), idx + 1), idx + 1
    return None, len(lines)


def parse_polynomial_file(text: str) -> Tuple[VariableOrder, List[Polynomial]]:
    """Parse a ``vars:`` header followed by one polynomial per line.

    An input with no content at all yields an empty variable order and no
    polynomials.
    """
    lines = text.splitlines()
    order, start = _header(lines)
    if order is None:
        return VariableOrder([]), []
    polys = []
    for idx in range(start, len(lines)):
        body = _strip_comment(lines[idx])
        if body.strip():
            polys.append(parse_polynomial(body, order, idx + 1, 1))
    return order, polys


def parse_polynomial_list(text: str, order: VariableOrder, sep: str = ";") -> List[Polynomial]:
    """Parse a ``sep``-separated inline list such as ``"x; x*y"``."""
    out = []
    col = 1
    for chunk in text.split(sep):
        if chunk.strip():
            out.append(parse_polynomial(chunk, order, 1, col))
        col += len(chunk) + len(sep)
    return out
