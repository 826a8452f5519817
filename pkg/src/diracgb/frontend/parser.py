"""Problem files and polynomial expressions.

A problem file is a sequence of statements separated by ``;`` or newlines::

    # first and second class constraints together
    coords: q1 q2 q3
    params: g=1/2, m
    options: order=degrevlex radical_check=false max_iter=40
    L = q1*(dq2 - q3) - dq1*q2

Velocities are written ``d<coordinate>``.  Expressions use integer and
rational literals, ``+ - * ^`` and parentheses; ``/`` needs a constant
divisor, ``^`` a non-negative integer exponent.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping

from ..phasespace import LagrangianSystem
from ..ratpoly import Kind, Polynomial, VariableTable, velocity_name


class ParseError(ValueError):
    def __init__(self, message: str, pos: tuple[int, int] | None = None):
        self.pos = pos
        if pos is not None:
            message = f"line {pos[0]}, column {pos[1]}: {message}"
        super().__init__(message)


class UndeclaredIdentifier(ParseError):
    pass


class NonPolynomial(ParseError):
    pass


class MissingParameter(ParseError):
    pass


_TOKEN = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<nl>\n)
  | (?P<num>\d+(?![\w.]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<op>[-+*/^()=:;,])
    """,
    re.VERBOSE,
)

_CONTINUES = {"+", "-", "*", "/", "^", "=", "(", ",", ":"}


@dataclass(frozen=True)
class Token:
    kind: str  # "num" | "ident" | "op" | "nl" | "end"
    text: str
    pos: tuple[int, int]


def tokenize(text: str) -> list[Token]:
    """Tokens with statement separators; newlines inside parentheses or after an operator are dropped."""
    out: list[Token] = []
    line, col_start, i, depth = 1, 0, 0, 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        pos = (line, i - col_start + 1)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", pos)
        kind = m.lastgroup
        s = m.group()
        if kind == "nl":
            if depth == 0 and out and out[-1].text not in _CONTINUES and out[-1].text != ";":
                out.append(Token("nl", ";", pos))
            line += 1
            col_start = m.end()
        elif kind in ("num", "ident", "op"):
            if s == "(":
                depth += 1
            elif s == ")":
                depth -= 1
            out.append(Token(kind, s, pos))
        i = m.end()
    out.append(Token("end", "", (line, i - col_start + 1)))
    # a line that starts with a binary operator continues the previous one
    return [
        t for k, t in enumerate(out)
        if not (t.kind == "nl" and out[k + 1].text in ("+", "-", "*", "/", "^"))
    ]


class ExprParser:
    """Recursive-descent evaluator producing a :class:`Polynomial`."""

    def __init__(
        self,
        tokens: list[Token],
        table: VariableTable,
        allowed: Iterable[str] | None = None,
        params: Mapping[str, Fraction | None] | None = None,
    ):
        self.toks = tokens
        self.i = 0
        self.table = table
        self.allowed = set(table.names if allowed is None else allowed)
        self.params = dict(params or {})

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def advance(self) -> Token:
        t = self.toks[self.i]
        self.i += 1
        return t

    def expect(self, text: str) -> Token:
        if self.tok.text != text:
            raise ParseError(f"expected {text!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)
        return self.advance()

    def parse(self) -> Polynomial:
        value = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return value

    def expr(self) -> Polynomial:
        value = self.term()
        while self.tok.text in ("+", "-"):
            op = self.advance().text
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self) -> Polynomial:
        value = self.unary()
        while self.tok.text in ("*", "/"):
            op = self.advance()
            start = self.i
            rhs = self.unary()
            if op.text == "*":
                value = value * rhs
                continue
            if not rhs.is_constant() or self._has_variable(start, self.i):
                raise NonPolynomial("division by a non-constant expression", op.pos)
            d = rhs.constant_value()
            if d == 0:
                raise ParseError("division by zero", op.pos)
            value = value.scale(1 / d)
        return value

    def _has_variable(self, start: int, stop: int) -> bool:
        return any(t.kind == "ident" and t.text not in self.params for t in self.toks[start:stop])

    def unary(self) -> Polynomial:
        if self.tok.text == "-":
            self.advance()
            return -self.unary()
        if self.tok.text == "+":
            self.advance()
            return self.unary()
        return self.power()

    def power(self) -> Polynomial:
        base = self.atom()
        if self.tok.text != "^":
            return base
        caret = self.advance()
        if self.tok.text == "-":
            raise NonPolynomial("negative exponent", caret.pos)
        if self.tok.kind == "num":
            k = int(self.advance().text)
        elif self.tok.text == "(":
            self.advance()
            e = self.expr()
            self.expect(")")
            if not e.is_constant() or e.constant_value().denominator != 1:
                raise NonPolynomial("exponent must be an integer", caret.pos)
            k = int(e.constant_value())
            if k < 0:
                raise NonPolynomial("negative exponent", caret.pos)
        else:
            raise ParseError("exponent must be an integer literal", self.tok.pos)
        if self.tok.text == "^":
            raise ParseError("chained exponents need parentheses", self.tok.pos)
        return base ** k

    def atom(self) -> Polynomial:
        t = self.tok
        if t.kind == "num":
            self.advance()
            return Polynomial.constant(self.table, int(t.text))
        if t.kind == "ident":
            self.advance()
            if t.text in self.params:
                v = self.params[t.text]
                if v is None:
                    raise MissingParameter(f"parameter {t.text!r} has no value (use --param {t.text}=...)", t.pos)
                return Polynomial.constant(self.table, v)
            if t.text not in self.allowed or t.text not in self.table:
                raise UndeclaredIdentifier(f"undeclared identifier {t.text!r}", t.pos)
            return Polynomial.var(self.table, t.text)
        if t.text == "(":
            self.advance()
            value = self.expr()
            self.expect(")")
            return value
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse_polynomial(
    text: str,
    table: VariableTable,
    params: Mapping[str, Fraction | None] | None = None,
    allowed: Iterable[str] | None = None,
) -> Polynomial:
    toks = [t for t in tokenize(text) if t.text != ";" or t.kind == "end"]
    return ExprParser(toks, table, allowed, params).parse()


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[-+]?\d+(/\d+)?", text):
        raise ParseError(f"not a rational literal: {text!r}")
    value = Fraction(text)
    return value


@dataclass
class ProblemFile:
    coords: list[str]
    params: dict[str, Fraction | None] = field(default_factory=dict)
    lagrangian: str = ""
    options: dict[str, object] = field(default_factory=dict)


_OPTION_TYPES = {"order": str, "radical_check": bool, "max_iter": int}


def _parse_option(name: str, value: str, pos) -> object:
    kind = _OPTION_TYPES.get(name)
    if kind is None:
        raise ParseError(f"unknown option {name!r}", pos)
    if kind is bool:
        if value.lower() not in ("true", "false"):
            raise ParseError(f"option {name} expects true or false", pos)
        return value.lower() == "true"
    if kind is int:
        if not value.isdigit():
            raise ParseError(f"option {name} expects a non-negative integer", pos)
        return int(value)
    if name == "order" and value not in ("degrevlex", "lex"):
        raise ParseError("order must be degrevlex or lex", pos)
    return value


def _split_statements(tokens: list[Token]) -> list[list[Token]]:
    stmts, cur = [], []
    for t in tokens:
        if t.text == ";" or t.kind == "end":
            if cur:
                stmts.append(cur)
            cur = []
        else:
            cur.append(t)
    return stmts


def _assignments(toks: list[Token]) -> list[tuple[str, str | None, tuple]]:
    """``a=1/2, b c=x`` -> [(a, "1/2"), (b, None), (c, "x")]."""
    out = []
    i = 0
    while i < len(toks):
        t = toks[i]
        if t.text == ",":
            i += 1
            continue
        if t.kind != "ident":
            raise ParseError(f"expected a name, found {t.text!r}", t.pos)
        if i + 1 < len(toks) and toks[i + 1].text == "=":
            j = i + 2
            parts = []
            while j < len(toks) and toks[j].text != "," and not (
                toks[j].kind == "ident" and j + 1 < len(toks) and toks[j + 1].text == "="
            ):
                parts.append(toks[j].text)
                j += 1
            if not parts:
                raise ParseError(f"missing value for {t.text!r}", t.pos)
            out.append((t.text, "".join(parts), t.pos))
            i = j
        else:
            out.append((t.text, None, t.pos))
            i += 1
    return out


def parse_problem(
    text: str,
    param_overrides: Mapping[str, Fraction] | None = None,
) -> tuple[ProblemFile, LagrangianSystem]:
    tokens = tokenize(text)
    coords: list[str] | None = None
    params: dict[str, Fraction | None] = {}
    options: dict[str, object] = {}
    lag_tokens: list[Token] | None = None
    lag_text = ""

    for stmt in _split_statements(tokens):
        head = stmt[0]
        if len(stmt) >= 2 and stmt[1].text == ":" and head.text in ("coords", "params", "options"):
            body = stmt[2:]
            if head.text == "coords":
                names = [t for t in body if t.text != ","]
                for t in names:
                    if t.kind != "ident":
                        raise ParseError(f"bad coordinate name {t.text!r}", t.pos)
                coords = (coords or []) + [t.text for t in names]
            elif head.text == "params":
                for name, value, pos in _assignments(body):
                    params[name] = None if value is None else parse_rational(value)
            else:
                for name, value, pos in _assignments(body):
                    if value is None:
                        raise ParseError(f"option {name!r} needs a value", pos)
                    options[name] = _parse_option(name, value, pos)
        elif head.text == "L" and len(stmt) >= 2 and stmt[1].text == "=":
            if lag_tokens is not None:
                raise ParseError("Lagrangian given twice", head.pos)
            lag_tokens = stmt[2:]
            lag_text = " ".join(t.text for t in lag_tokens)
        else:
            raise ParseError(f"unexpected statement starting with {head.text!r}", head.pos)

    if not coords:
        raise ParseError("no coordinates declared (coords: ...)")
    if len(set(coords)) != len(coords):
        raise ParseError("duplicate coordinate names")
    if lag_tokens is None or not lag_tokens:
        raise ParseError("no Lagrangian given (L = ...)")
    for name, value in (param_overrides or {}).items():
        if name not in params:
            raise UndeclaredIdentifier(f"--param {name}: parameter not declared in the file")
        params[name] = Fraction(value)
    clash = set(params) & set(coords)
    if clash:
        raise ParseError(f"names declared both as coordinate and parameter: {sorted(clash)}")

    try:
        table = VariableTable.for_coordinates(coords, n_multipliers=len(coords))
    except ValueError as e:
        raise ParseError(str(e)) from None
    allowed = set(coords) | {velocity_name(c) for c in coords}
    end = Token("end", "", lag_tokens[-1].pos)
    L = ExprParser(lag_tokens + [end], table, allowed, params).parse()
    problem = ProblemFile(coords, params, lag_text, options)
    return problem, LagrangianSystem(L)


def phase_space_names(table: VariableTable) -> list[str]:
    return [v.name for v in table if v.kind in (Kind.MOMENTUM, Kind.COORDINATE)]
