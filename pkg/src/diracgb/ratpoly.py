"""Exact sparse multivariate polynomials over the rationals.

Polynomials are immutable maps from exponent tuples to ``Fraction``
coefficients, tied to a :class:`VariableTable`.  Monomial orders are
compiled to sort keys so that ``max(..., key=order.key)`` picks the
leading monomial.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from types import MappingProxyType
from typing import Iterable, Iterator, Mapping, Sequence, Union

Rational = Fraction
Monomial = tuple  # tuple[int, ...], one exponent per table variable
Scalar = Union[int, Fraction]


class Kind(str, enum.Enum):
    AUXILIARY = "auxiliary"
    VELOCITY = "velocity"
    MOMENTUM = "momentum"
    COORDINATE = "coordinate"
    MULTIPLIER = "multiplier"


PRECEDENCE = {
    Kind.AUXILIARY: 0,
    Kind.VELOCITY: 1,
    Kind.MOMENTUM: 2,
    Kind.COORDINATE: 3,
    Kind.MULTIPLIER: 4,
}


class TableMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Variable:
    name: str
    kind: Kind
    partner: str | None = None  # owning coordinate for velocities and momenta


def velocity_name(coord: str) -> str:
    return "d" + coord


def momentum_name(coord: str) -> str:
    return "p_" + coord


class VariableTable:
    """Ordered symbol registry.

    Storage order is precedence order: auxiliary, velocities, momenta,
    coordinates, multipliers; declaration order breaks ties.
    """

    def __init__(self, variables: Iterable[Variable]):
        indexed = list(enumerate(variables))
        indexed.sort(key=lambda iv: (PRECEDENCE[iv[1].kind], iv[0]))
        self.variables: tuple[Variable, ...] = tuple(v for _, v in indexed)
        self._index = {}
        for i, v in enumerate(self.variables):
            if v.name in self._index:
                raise ValueError(f"duplicate variable name {v.name!r}")
            self._index[v.name] = i
        self._check_pairing()

    @classmethod
    def symbols(cls, *names: str) -> "VariableTable":
        """Table of plain symbols in the given order (kind auxiliary)."""
        return cls(Variable(n, Kind.AUXILIARY) for n in names)

    @classmethod
    def for_coordinates(cls, coords: Sequence[str], n_multipliers: int = 0) -> "VariableTable":
        vs = []
        for c in coords:
            vs.append(Variable(c, Kind.COORDINATE))
            vs.append(Variable(velocity_name(c), Kind.VELOCITY, c))
            vs.append(Variable(momentum_name(c), Kind.MOMENTUM, c))
        vs.extend(Variable(f"u{k + 1}", Kind.MULTIPLIER) for k in range(n_multipliers))
        return cls(vs)

    def _check_pairing(self) -> None:
        coords = {v.name for v in self.variables if v.kind is Kind.COORDINATE}
        for v in self.variables:
            if v.kind in (Kind.VELOCITY, Kind.MOMENTUM) and v.partner not in coords:
                raise ValueError(f"{v.name!r} has no coordinate {v.partner!r}")
        for c in coords:
            for name in (velocity_name(c), momentum_name(c)):
                if name not in self._index:
                    raise ValueError(f"coordinate {c!r} lacks {name!r}")

    def __len__(self) -> int:
        return len(self.variables)

    def __iter__(self) -> Iterator[Variable]:
        return iter(self.variables)

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, VariableTable):
            return NotImplemented
        return self.variables == other.variables

    def __hash__(self) -> int:
        return hash(self.variables)

    def __repr__(self) -> str:
        return f"VariableTable({', '.join(self.names)})"

    @property
    def names(self) -> list[str]:
        return [v.name for v in self.variables]

    def __contains__(self, name: str) -> bool:
        return name in self._index

    def index(self, name: str) -> int:
        try:
            return self._index[name]
        except KeyError:
            raise KeyError(f"unknown variable {name!r}") from None

    def kind(self, i: int) -> Kind:
        return self.variables[i].kind

    def of_kind(self, *kinds: Kind) -> list[int]:
        return [i for i, v in enumerate(self.variables) if v.kind in kinds]

    @property
    def coordinates(self) -> list[str]:
        return [v.name for v in self.variables if v.kind is Kind.COORDINATE]

    def pairs(self) -> list[tuple[int, int]]:
        """(momentum index, coordinate index) for every canonical pair."""
        return [(self.index(momentum_name(c)), self.index(c)) for c in self.coordinates]

    def with_multipliers(self, k: int) -> "VariableTable":
        kept = [v for v in self.variables if v.kind is not Kind.MULTIPLIER]
        extra = [Variable(f"u{j + 1}", Kind.MULTIPLIER) for j in range(k)]
        return VariableTable(kept + extra)

    def with_auxiliary(self, name: str) -> "VariableTable":
        if name in self._index:
            raise ValueError(f"auxiliary name {name!r} already registered")
        return VariableTable([Variable(name, Kind.AUXILIARY)] + list(self.variables))

    @cached_property
    def default_order(self) -> "MonomialOrder":
        return MonomialOrder.elimination(self)

    def one(self) -> Monomial:
        return (0,) * len(self.variables)


# ---------------------------------------------------------------------------
# monomial orders
# ---------------------------------------------------------------------------

class MonomialOrder:
    """Tree of base orders (``degrevlex``, ``lex``) composed into blocks.

    ``key(m)`` returns a flat tuple; larger key means larger monomial.
    """

    def __init__(self, kind: str, positions: Sequence[int] = (), children: Sequence["MonomialOrder"] = ()):
        if kind not in ("degrevlex", "lex", "block"):
            raise ValueError(f"unknown order kind {kind!r}")
        self.kind = kind
        self.positions = tuple(positions)
        self.children = tuple(children)
        if kind == "block" and not self.children:
            raise ValueError("block order needs at least one block")
        seen = self.all_positions()
        if len(seen) != len(set(seen)):
            raise ValueError("blocks of a monomial order must be disjoint")
        self._cache: dict = {}
        self._keyfn = self._compile()

    @classmethod
    def degrevlex(cls, positions: Sequence[int]) -> "MonomialOrder":
        return cls("degrevlex", positions)

    @classmethod
    def lex(cls, positions: Sequence[int]) -> "MonomialOrder":
        return cls("lex", positions)

    @classmethod
    def block(cls, children: Sequence["MonomialOrder"]) -> "MonomialOrder":
        return cls("block", children=[c for c in children if c.all_positions()])

    @classmethod
    def elimination(cls, table: VariableTable, base: str = "degrevlex") -> "MonomialOrder":
        """Default problem order.

        ``degrevlex`` base: blocks [auxiliary] > [velocities] > [momenta and
        coordinates] > [multipliers], degrevlex inside each.  ``lex`` base:
        pure lex in table order, itself an elimination order for every prefix.
        """
        n = len(table)
        if base == "lex":
            return cls.lex(range(n))
        if base != "degrevlex":
            raise ValueError(f"unknown base order {base!r}")
        groups = [
            table.of_kind(Kind.AUXILIARY),
            table.of_kind(Kind.VELOCITY),
            table.of_kind(Kind.MOMENTUM, Kind.COORDINATE),
            table.of_kind(Kind.MULTIPLIER),
        ]
        blocks = [cls.degrevlex(g) for g in groups if g]
        if len(blocks) == 1:
            return blocks[0]
        return cls.block(blocks)

    def all_positions(self) -> list[int]:
        if self.kind == "block":
            return [p for c in self.children for p in c.all_positions()]
        return list(self.positions)

    def _compile(self):
        if self.kind == "lex":
            pos = self.positions
            return lambda m: tuple(m[i] for i in pos)
        if self.kind == "degrevlex":
            pos = self.positions
            rev = tuple(reversed(pos))
            return lambda m: (sum(m[i] for i in pos),) + tuple(-m[i] for i in rev)
        fns = [c._keyfn for c in self.children]
        return lambda m: tuple(x for f in fns for x in f(m))

    def key(self, m: Monomial) -> tuple:
        k = self._cache.get(m)
        if k is None:
            k = self._keyfn(m)
            self._cache[m] = k
        return k

    def neg_key(self, m: Monomial) -> tuple:
        """Key whose ascending order is the descending monomial order (for heaps)."""
        return tuple(-x for x in self.key(m))

    def relabel(self, mapping: Mapping[int, int]) -> "MonomialOrder":
        """Same order with variable positions renamed through ``mapping``."""
        if self.kind == "block":
            return MonomialOrder.block([c.relabel(mapping) for c in self.children])
        return MonomialOrder(self.kind, [mapping[p] for p in self.positions])

    def check_total(self, nvars: int) -> None:
        if sorted(self.all_positions()) != list(range(nvars)):
            raise ValueError("monomial order must cover every variable exactly once")

    def segments(self) -> list[frozenset[int]]:
        """Consecutive variable groups; any prefix of them is eliminated by this order."""
        if self.kind == "lex":
            return [frozenset([p]) for p in self.positions]
        if self.kind == "degrevlex":
            return [frozenset(self.positions)] if self.positions else []
        return [s for c in self.children for s in c.segments()]

    def eliminates(self, elim: Iterable[int], keep: Iterable[int]) -> bool:
        """True when every monomial touching ``elim`` exceeds every ``keep``-only monomial."""
        elim, keep = set(elim), set(keep)
        if not elim:
            return True
        covered: set[int] = set()
        for seg in self.segments():
            if seg & keep:
                return False
            covered |= seg
            if elim <= covered:
                return True
        return False

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MonomialOrder):
            return NotImplemented
        return (self.kind, self.positions, self.children) == (other.kind, other.positions, other.children)

    def __hash__(self) -> int:
        return hash((self.kind, self.positions, self.children))

    def __repr__(self) -> str:
        if self.kind == "block":
            return f"block({', '.join(map(repr, self.children))})"
        return f"{self.kind}{list(self.positions)}"


def compare(a: Monomial, b: Monomial, order: MonomialOrder) -> int:
    """-1, 0 or 1 as ``a`` is less than, equal to or greater than ``b``."""
    if len(a) != len(b):
        raise TableMismatch("monomials over different variable tables")
    ka, kb = order.key(a), order.key(b)
    return (ka > kb) - (ka < kb)


def mono_mul(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Monomial, b: Monomial) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Monomial, a: Monomial) -> Monomial:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Monomial, b: Monomial) -> Monomial:
    return tuple(x if x > y else y for x, y in zip(a, b))


def mono_coprime(a: Monomial, b: Monomial) -> bool:
    return not any(x and y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# polynomials
# ---------------------------------------------------------------------------

def _coerce_scalar(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    raise TypeError(f"coefficients must be int or Fraction, got {type(c).__name__}")


class Polynomial:
    __slots__ = ("table", "_terms", "_hash")

    def __init__(self, table: VariableTable, terms: Mapping[Monomial, Scalar] | None = None):
        n = len(table)
        clean: dict[Monomial, Fraction] = {}
        for m, c in (terms or {}).items():
            m = tuple(m)
            if len(m) != n or any((not isinstance(e, int)) or e < 0 for e in m):
                raise ValueError(f"bad exponent vector {m!r} for {n} variables")
            c = _coerce_scalar(c)
            if c:
                clean[m] = clean.get(m, 0) + c
                if not clean[m]:
                    del clean[m]
        self.table = table
        self._terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, table: VariableTable, terms: dict) -> "Polynomial":
        p = object.__new__(cls)
        p.table = table
        p._terms = terms
        p._hash = None
        return p

    # constructors ------------------------------------------------------
    @classmethod
    def zero(cls, table: VariableTable) -> "Polynomial":
        return cls._raw(table, {})

    @classmethod
    def constant(cls, table: VariableTable, c: Scalar) -> "Polynomial":
        c = _coerce_scalar(c)
        return cls._raw(table, {table.one(): c} if c else {})

    @classmethod
    def var(cls, table: VariableTable, name: str, power: int = 1) -> "Polynomial":
        m = [0] * len(table)
        m[table.index(name)] = power
        return cls._raw(table, {tuple(m): Fraction(1)})

    @classmethod
    def monomial(cls, table: VariableTable, m: Monomial, c: Scalar = 1) -> "Polynomial":
        return cls(table, {tuple(m): c})

    # inspection --------------------------------------------------------
    @property
    def terms(self) -> Mapping[Monomial, Fraction]:
        return MappingProxyType(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def __bool__(self) -> bool:
        return bool(self._terms)

    def is_constant(self) -> bool:
        one = self.table.one()
        return all(m == one for m in self._terms)

    def constant_value(self) -> Fraction:
        return self._terms.get(self.table.one(), Fraction(0))

    def total_degree(self) -> int:
        return max((sum(m) for m in self._terms), default=0)

    def degree_in(self, name: str) -> int:
        i = self.table.index(name)
        return max((m[i] for m in self._terms), default=0)

    def support(self) -> set[int]:
        """Indices of variables that occur."""
        out: set[int] = set()
        for m in self._terms:
            out.update(i for i, e in enumerate(m) if e)
        return out

    def support_names(self) -> list[str]:
        return [self.table.variables[i].name for i in sorted(self.support())]

    def involves_kind(self, *kinds: Kind) -> bool:
        return any(self.table.kind(i) in kinds for i in self.support())

    def audit(self) -> None:
        """Walk every stored coefficient and check the normalisation invariants."""
        n = len(self.table)
        for m, c in self._terms.items():
            assert isinstance(c, Fraction), c
            assert c != 0
            assert c.denominator > 0
            assert math.gcd(c.numerator, c.denominator) == 1
            assert len(m) == n and all(e >= 0 for e in m)

    # order-dependent views ---------------------------------------------
    def sorted_terms(self, order: MonomialOrder | None = None) -> list[tuple[Monomial, Fraction]]:
        order = order or self.table.default_order
        return sorted(self._terms.items(), key=lambda t: order.key(t[0]), reverse=True)

    def leading_term(self, order: MonomialOrder) -> tuple[Monomial, Fraction]:
        if not self._terms:
            raise ValueError("zero polynomial has no leading term")
        m = max(self._terms, key=order.key)
        return m, self._terms[m]

    def leading_monomial(self, order: MonomialOrder) -> Monomial:
        return self.leading_term(order)[0]

    def monic(self, order: MonomialOrder) -> "Polynomial":
        if not self._terms:
            return self
        _, lc = self.leading_term(order)
        if lc == 1:
            return self
        inv = 1 / lc
        return Polynomial._raw(self.table, {m: c * inv for m, c in self._terms.items()})

    # arithmetic --------------------------------------------------------
    def _check(self, other: "Polynomial") -> None:
        if other.table is not self.table and other.table != self.table:
            raise TableMismatch("polynomials over different variable tables")

    def _lift(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            self._check(other)
            return other
        return Polynomial.constant(self.table, _coerce_scalar(other))

    def __add__(self, other) -> "Polynomial":
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        other = self._lift(other)
        out = dict(self._terms)
        for m, c in other._terms.items():
            s = out.get(m, 0) + c
            if s:
                out[m] = s
            else:
                out.pop(m, None)
        return Polynomial._raw(self.table, out)

    __radd__ = __add__

    def __neg__(self) -> "Polynomial":
        return Polynomial._raw(self.table, {m: -c for m, c in self._terms.items()})

    def __sub__(self, other) -> "Polynomial":
        if not isinstance(other, (Polynomial, int, Fraction)):
            return NotImplemented
        return self + (-self._lift(other))

    def __rsub__(self, other) -> "Polynomial":
        if not isinstance(other, (int, Fraction)):
            return NotImplemented
        return (-self) + other

    def scale(self, c: Scalar) -> "Polynomial":
        c = _coerce_scalar(c)
        if not c:
            return Polynomial.zero(self.table)
        return Polynomial._raw(self.table, {m: v * c for m, v in self._terms.items()})

    def mul_term(self, mono: Monomial, coeff: Scalar) -> "Polynomial":
        coeff = _coerce_scalar(coeff)
        if not coeff:
            return Polynomial.zero(self.table)
        return Polynomial._raw(
            self.table, {mono_mul(m, mono): c * coeff for m, c in self._terms.items()}
        )

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        self._check(other)
        out: dict[Monomial, Fraction] = {}
        for m1, c1 in self._terms.items():
            for m2, c2 in other._terms.items():
                m = mono_mul(m1, m2)
                s = out.get(m, 0) + c1 * c2
                if s:
                    out[m] = s
                else:
                    out.pop(m, None)
        return Polynomial._raw(self.table, out)

    def __rmul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int) -> "Polynomial":
        if not isinstance(k, int) or k < 0:
            raise ValueError("polynomial powers must be non-negative integers")
        result = Polynomial.constant(self.table, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other: object) -> bool:
        if isinstance(other, (int, Fraction)):
            return self._terms == ({self.table.one(): Fraction(other)} if other else {})
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.table == other.table and self._terms == other._terms

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.table, frozenset(self._terms.items())))
        return self._hash

    # calculus and substitution ----------------------------------------
    def diff(self, name: str) -> "Polynomial":
        return self.diff_index(self.table.index(name))

    def diff_index(self, i: int) -> "Polynomial":
        out = {}
        for m, c in self._terms.items():
            e = m[i]
            if e:
                out[m[:i] + (e - 1,) + m[i + 1:]] = c * e
        return Polynomial._raw(self.table, out)

    def embed(self, table: VariableTable) -> "Polynomial":
        """Re-express over ``table``, matching variables by name."""
        if table is self.table:
            return self
        used = self.support()
        target = {i: table.index(self.table.variables[i].name) for i in used}
        n = len(table)
        out = {}
        for m, c in self._terms.items():
            nm = [0] * n
            for i in used:
                nm[target[i]] = m[i]
            out[tuple(nm)] = c
        return Polynomial._raw(table, out)

    def split_by(self, indices: Sequence[int]) -> dict[Monomial, "Polynomial"]:
        """Group terms by their exponents on ``indices``.

        Returns ``{exps on indices: coefficient polynomial free of them}``.
        """
        groups: dict[tuple, dict] = {}
        for m, c in self._terms.items():
            key = tuple(m[i] for i in indices)
            rest = list(m)
            for i in indices:
                rest[i] = 0
            groups.setdefault(key, {})[tuple(rest)] = c
        return {k: Polynomial._raw(self.table, v) for k, v in groups.items()}

    # text --------------------------------------------------------------
    def to_str(self, order: MonomialOrder | None = None) -> str:
        if not self._terms:
            return "0"
        names = self.table.names
        parts = []
        for k, (m, c) in enumerate(self.sorted_terms(order)):
            factors = []
            for i, e in enumerate(m):
                if e == 1:
                    factors.append(names[i])
                elif e:
                    factors.append(f"{names[i]}^{e}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = f"{mag}*" + "*".join(factors)
            if k == 0:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append(("- " if c < 0 else "+ ") + body)
        return " ".join(parts)

    def __str__(self) -> str:
        return self.to_str()

    def __repr__(self) -> str:
        return f"Polynomial({self.to_str()!r})"


def diff(f: Polynomial, v: str) -> Polynomial:
    """Formal partial derivative of ``f`` with respect to variable ``v``."""
    return f.diff(v)


def leading_term(f: Polynomial, order: MonomialOrder) -> tuple[Monomial, Fraction]:
    return f.leading_term(order)


def variables(table: VariableTable, *names: str) -> list[Polynomial]:
    return [Polynomial.var(table, n) for n in names]
