"""Text syntax for operators and numeric constants.

Operators are written with ``z`` and ``D = d/dz``, e.g. ``(1-z)*D - 1`` or
``z^2*(1-34*z+z^2)*D^3 + ...``.  Products are composed as operators, so
``D*z`` means ``z*D + 1``.  Rational literals are ``p/q``.

Numeric constants (for ``value:`` size overrides) accept ``+ - * / ^``,
``log``, ``exp``, ``sqrt`` and ``pi``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction

from mpmath import mp

from .diffop import DiffOp
from .exact import Poly

__all__ = ["ParseError", "parse_operator", "parse_number", "format_operator"]


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class _Token:
    kind: str  # "int", "name", "op", "end"
    text: str
    line: int
    column: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+(?:\.\d+)?)|([A-Za-z_][A-Za-z_0-9]*)|(.))", re.S)


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            break
        # track line numbers over consumed whitespace
        for i in range(pos, m.start(m.lastindex) if m.lastindex else m.end()):
            if text[i] == "\n":
                line, line_start = line + 1, i + 1
        if m.lastindex is None:
            pos = m.end()
            continue
        start = m.start(m.lastindex)
        col = start - line_start + 1
        num, name, op = m.group(1), m.group(2), m.group(3)
        if num is not None:
            tokens.append(_Token("int" if "." not in num else "dec", num, line, col))
        elif name is not None:
            tokens.append(_Token("name", name, line, col))
        elif op.isspace():
            pass
        elif op in "+-*/^(),":
            tokens.append(_Token("op", op, line, col))
        else:
            raise ParseError(f"unexpected character {op!r}", line, col)
        pos = m.end()
    tokens.append(_Token("end", "", line, len(text) - line_start + 1))
    return tokens


class _Cursor:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Token:
        return self.tokens[self.i]

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str):
        if not self.accept(text):
            self.fail(f"expected {text!r}")

    def fail(self, message: str):
        tok = self.tok
        found = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ParseError(f"{message}, found {found}", tok.line, tok.column)


# ---------------------------------------------------------------------------
# operators

_ONE = DiffOp([Poly([1])])


def _op_power(base: DiffOp, n: int) -> DiffOp:
    out = _ONE
    for _ in range(n):
        out = out @ base
    return out


def _op_expr(cur: _Cursor) -> DiffOp:
    acc = _op_signed(cur)
    while True:
        if cur.accept("+"):
            acc = acc + _op_signed(cur)
        elif cur.accept("-"):
            acc = acc - _op_signed(cur)
        else:
            return acc


def _op_signed(cur: _Cursor) -> DiffOp:
    if cur.accept("-"):
        return -_op_signed(cur)
    if cur.accept("+"):
        return _op_signed(cur)
    return _op_term(cur)


def _op_term(cur: _Cursor) -> DiffOp:
    acc = _op_power_factor(cur)
    while cur.accept("*"):
        if cur.accept("-"):
            acc = -(acc @ _op_power_factor(cur))
        else:
            acc = acc @ _op_power_factor(cur)
    return acc


def _op_power_factor(cur: _Cursor) -> DiffOp:
    start = cur.tok
    base = _op_atom(cur)
    if cur.accept("^"):
        if cur.tok.kind == "op" and cur.tok.text == "-":
            what = "D" if start.text == "D" else "operator"
            cur.fail(f"{what} with negative power")
        if cur.tok.kind != "int":
            cur.fail("expected integer exponent")
        n = int(cur.tok.text)
        cur.i += 1
        base = _op_power(base, n)
    return base


def _op_atom(cur: _Cursor) -> DiffOp:
    tok = cur.tok
    if tok.kind == "int":
        cur.i += 1
        value = Fraction(int(tok.text))
        if cur.accept("/"):
            if cur.tok.kind != "int":
                cur.fail("expected integer denominator")
            d = int(cur.tok.text)
            if d == 0:
                cur.fail("zero denominator")
            cur.i += 1
            value /= d
        return DiffOp.multiplier(value)
    if tok.kind == "name":
        cur.i += 1
        if tok.text == "z":
            return DiffOp.multiplier(Poly([0, 1]))
        if tok.text == "D":
            return DiffOp.d()
        raise ParseError(f"unknown symbol {tok.text!r}", tok.line, tok.column)
    if cur.accept("("):
        inner = _op_expr(cur)
        cur.expect(")")
        return inner
    cur.fail("expected a number, z, D or '('")


def parse_operator(text: str) -> DiffOp:
    cur = _Cursor(text)
    if cur.tok.kind == "end":
        cur.fail("empty operator")
    op = _op_expr(cur)
    if cur.tok.kind != "end":
        cur.fail("unexpected token")
    if op.is_zero():
        raise ParseError("operator is zero", 1, 1)
    return op


def format_operator(op: DiffOp) -> str:
    """Canonical text that parses back to the same operator."""
    return op.to_str()


# ---------------------------------------------------------------------------
# numeric constants

_FUNCS = {"log": mp.log, "exp": mp.exp, "sqrt": mp.sqrt}
_CONSTS = {"pi": lambda: +mp.pi}


def _num_expr(cur: _Cursor):
    acc = _num_term(cur)
    while True:
        if cur.accept("+"):
            acc += _num_term(cur)
        elif cur.accept("-"):
            acc -= _num_term(cur)
        else:
            return acc


def _num_term(cur: _Cursor):
    acc = _num_unary(cur)
    while True:
        if cur.accept("*"):
            acc *= _num_unary(cur)
        elif cur.accept("/"):
            acc /= _num_unary(cur)
        else:
            return acc


def _num_unary(cur: _Cursor):
    if cur.accept("-"):
        return -_num_unary(cur)
    if cur.accept("+"):
        return _num_unary(cur)
    base = _num_atom(cur)
    if cur.accept("^"):
        return base ** _num_unary(cur)
    return base


def _num_atom(cur: _Cursor):
    tok = cur.tok
    if tok.kind in ("int", "dec"):
        cur.i += 1
        return mp.mpf(tok.text)
    if tok.kind == "name":
        cur.i += 1
        if tok.text in _FUNCS:
            cur.expect("(")
            arg = _num_expr(cur)
            cur.expect(")")
            return _FUNCS[tok.text](arg)
        if tok.text in _CONSTS:
            return _CONSTS[tok.text]()
        raise ParseError(f"unknown name {tok.text!r}", tok.line, tok.column)
    if cur.accept("("):
        inner = _num_expr(cur)
        cur.expect(")")
        return inner
    cur.fail("expected a number")


def parse_number(text: str):
    """Evaluate a constant expression such as ``1+log(2)`` at the current precision."""
    cur = _Cursor(text)
    value = _num_expr(cur)
    if cur.tok.kind != "end":
        cur.fail("unexpected token")
    return value
