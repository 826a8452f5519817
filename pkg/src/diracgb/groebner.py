"""Normal forms, Buchberger's algorithm and the ideal tests built on them."""

from __future__ import annotations

import heapq
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .ratpoly import (
    Kind,
    MonomialOrder,
    Polynomial,
    mono_coprime,
    mono_div,
    mono_divides,
    mono_lcm,
    mono_mul,
)


class NotEliminationOrder(ValueError):
    pass


@dataclass(frozen=True)
class GroebnerBasis:
    """Reduced monic Gröbner basis, sorted by descending leading monomial."""

    elements: tuple[Polynomial, ...]
    order: MonomialOrder

    def __iter__(self) -> Iterator[Polynomial]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Polynomial:
        return self.elements[i]

    def is_unit(self) -> bool:
        return len(self.elements) == 1 and self.elements[0] == 1

    def reduce(self, f: Polynomial) -> Polynomial:
        return normal_form(f, self.elements, self.order)

    def contains(self, f: Polynomial) -> bool:
        return ideal_member(f, self)

    def leading_monomials(self) -> list[tuple]:
        return [g.leading_monomial(self.order) for g in self.elements]


def normal_form(f: Polynomial, G: Sequence[Polynomial], order: MonomialOrder) -> Polynomial:
    """Fully reduced remainder of ``f`` on division by ``G``.

    At each step the greatest remaining monomial is examined and the first
    divisor in list order whose leading monomial divides it is used.
    """
    if not G or f.is_zero():
        return f
    leads = []
    for g in G:
        if g.is_zero():
            raise ValueError("cannot divide by the zero polynomial")
        lm, lc = g.leading_term(order)
        leads.append((lm, lc, g._terms))

    p = dict(f._terms)
    heap = [(order.neg_key(m), m) for m in p]
    heapq.heapify(heap)
    rem: dict = {}
    while heap:
        _, m = heapq.heappop(heap)
        c = p.get(m)
        if c is None:
            continue
        for lm, lc, gterms in leads:
            if mono_divides(lm, m):
                shift = mono_div(m, lm)
                factor = c / lc
                for gm, gc in gterms.items():
                    mm = mono_mul(gm, shift)
                    old = p.get(mm)
                    v = (old or 0) - factor * gc
                    if v:
                        p[mm] = v
                        if old is None:
                            heapq.heappush(heap, (order.neg_key(mm), mm))
                    elif old is not None:
                        del p[mm]
                break
        else:
            rem[m] = c
            del p[m]
    return Polynomial._raw(f.table, rem)


def s_polynomial(f: Polynomial, g: Polynomial, order: MonomialOrder) -> Polynomial:
    if f.is_zero() or g.is_zero():
        raise ValueError("S-polynomial of a zero polynomial")
    fm, fc = f.leading_term(order)
    gm, gc = g.leading_term(order)
    lcm = mono_lcm(fm, gm)
    return f.mul_term(mono_div(lcm, fm), 1 / fc) - g.mul_term(mono_div(lcm, gm), 1 / gc)


def buchberger(F: Iterable[Polynomial], order: MonomialOrder) -> GroebnerBasis:
    """Reduced monic Gröbner basis of the ideal generated by ``F``.

    Pairs are processed smallest-lcm first (ties by generator indices) and
    skipped by the coprime-leading-monomial and chain criteria.
    """
    G: list[Polynomial] = []
    for f in F:
        if not f.is_zero():
            G.append(f.monic(order))
    if not G:
        return GroebnerBasis((), order)
    table = G[0].table
    for g in G:
        g._check(G[0])
    order.check_total(len(table))
    if any(g.is_constant() for g in G):
        return GroebnerBasis((Polynomial.constant(table, 1),), order)

    lms = [g.leading_monomial(order) for g in G]
    pending: set[tuple[int, int]] = set()
    heap: list = []

    def add_pair(i: int, j: int) -> None:
        lcm = mono_lcm(lms[i], lms[j])
        pending.add((i, j))
        heapq.heappush(heap, (order.key(lcm), i, j))

    for j in range(len(G)):
        for i in range(j):
            add_pair(i, j)

    while heap:
        _, i, j = heapq.heappop(heap)
        pending.discard((i, j))
        if mono_coprime(lms[i], lms[j]):
            continue
        if _chain_criterion(i, j, lms, pending):
            continue
        h = normal_form(s_polynomial(G[i], G[j], order), G, order)
        if h.is_zero():
            continue
        if h.is_constant():
            return GroebnerBasis((Polynomial.constant(table, 1),), order)
        G.append(h.monic(order))
        lms.append(h.leading_monomial(order))
        k = len(G) - 1
        for i2 in range(k):
            add_pair(i2, k)

    return GroebnerBasis(tuple(_reduce_basis(G, order)), order)


def _chain_criterion(i: int, j: int, lms: list, pending: set) -> bool:
    lcm = mono_lcm(lms[i], lms[j])
    for k in range(len(lms)):
        if k == i or k == j:
            continue
        if (min(i, k), max(i, k)) in pending or (min(j, k), max(j, k)) in pending:
            continue
        if mono_divides(lms[k], lcm):
            return True
    return False


def _reduce_basis(G: list[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    lms = [g.leading_monomial(order) for g in G]
    keep = []
    for i, m in enumerate(lms):
        redundant = False
        for j, other in enumerate(lms):
            if j == i or not mono_divides(other, m):
                continue
            # equal leading monomials: keep the first occurrence only
            if other != m or j < i:
                redundant = True
                break
        if not redundant:
            keep.append(G[i])
    reduced = []
    for i, g in enumerate(keep):
        others = keep[:i] + keep[i + 1:]
        reduced.append(normal_form(g, others, order).monic(order))
    reduced.sort(key=lambda g: order.key(g.leading_monomial(order)), reverse=True)
    return reduced


def is_groebner(G: Sequence[Polynomial], order: MonomialOrder) -> bool:
    """Direct certificate: every pairwise S-polynomial reduces to zero."""
    G = list(G)
    for j in range(len(G)):
        for i in range(j):
            if not normal_form(s_polynomial(G[i], G[j], order), G, order).is_zero():
                return False
    return True


def is_reduced(G: GroebnerBasis) -> bool:
    """Monic, and no term of any element divisible by another leading monomial."""
    lms = G.leading_monomials()
    for i, g in enumerate(G):
        if g.leading_term(G.order)[1] != 1:
            return False
        for m in g.terms:
            if any(j != i and mono_divides(lm, m) for j, lm in enumerate(lms)):
                return False
    return True


def ideal_member(h: Polynomial, G: GroebnerBasis) -> bool:
    return normal_form(h, G.elements, G.order).is_zero()


def radical_member(h: Polynomial, F: Sequence[Polynomial], order: MonomialOrder | None = None) -> bool:
    """Whether some power of ``h`` lies in the ideal generated by ``F``.

    Uses a fresh auxiliary variable t: h is in the radical iff
    ``F + [1 - t*h]`` generates the unit ideal.
    """
    if h.is_zero():
        return True
    table = h.table
    order = order or table.default_order
    name = "_t"
    while name in table:
        name = "_" + name
    ext = table.with_auxiliary(name)
    mapping = {i: ext.index(v.name) for i, v in enumerate(table.variables)}
    ext_order = MonomialOrder.block([MonomialOrder.lex([ext.index(name)]), order.relabel(mapping)])
    t = Polynomial.var(ext, name)
    gens = [f.embed(ext) for f in F]
    gens.append(1 - t * h.embed(ext))
    return buchberger(gens, ext_order).is_unit()


def eliminate(G: GroebnerBasis, keep: Iterable[str | int]) -> list[Polynomial]:
    """Elements of ``G`` involving only ``keep`` variables.

    Raises :class:`NotEliminationOrder` unless the basis order puts every
    other occurring variable in a leading block that excludes ``keep``.
    """
    if not G.elements:
        return []
    table = G.elements[0].table
    keep_idx = {table.index(v) if isinstance(v, str) else v for v in keep}
    used: set[int] = set()
    for g in G:
        used |= g.support()
    elim = used - keep_idx
    if not G.order.eliminates(elim, keep_idx):
        raise NotEliminationOrder(
            "order does not eliminate " + ", ".join(table.variables[i].name for i in sorted(elim))
        )
    return [g for g in G if g.support() <= keep_idx]


def phase_space_indices(table) -> set[int]:
    return set(table.of_kind(Kind.MOMENTUM, Kind.COORDINATE))

