"""Legendre transform, primary constraints and Poisson brackets."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Sequence

from .groebner import GroebnerBasis, buchberger, eliminate, normal_form
from .ratpoly import Kind, MonomialOrder, Polynomial, VariableTable, momentum_name, velocity_name


class VelocityEliminationFailed(ValueError):
    """The Legendre transform kept a velocity after reduction (non-constant Hessian rank)."""


@dataclass(frozen=True)
class Origin:
    kind: str  # "primary" | "consistency" | "combination"
    index: int | None = None
    parent: int | None = None
    iteration: int | None = None
    coefficients: tuple[Polynomial, ...] | None = None

    def describe(self) -> str:
        if self.kind == "primary":
            return f"primary({self.index})"
        if self.kind == "consistency":
            return f"consistency(parent={self.parent}, iteration={self.iteration})"
        return "combination"


@dataclass(frozen=True)
class Constraint:
    name: str
    poly: Polynomial
    origin: Origin
    class_tag: str = "unknown"  # "unknown" | "first" | "second"

    def tagged(self, class_tag: str) -> "Constraint":
        return replace(self, class_tag=class_tag)


@dataclass(frozen=True)
class LagrangianSystem:
    L: Polynomial
    table: VariableTable = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "table", self.L.table)
        if self.L.involves_kind(Kind.MOMENTUM, Kind.MULTIPLIER, Kind.AUXILIARY):
            raise ValueError("a Lagrangian may only involve coordinates and velocities")

    @classmethod
    def build(cls, coords: Sequence[str], L_fn) -> "LagrangianSystem":
        """Convenience: ``L_fn(table)`` returns the Lagrangian over a fresh table."""
        table = VariableTable.for_coordinates(coords, n_multipliers=len(coords))
        return cls(L_fn(table))

    @property
    def coordinates(self) -> list[str]:
        return self.table.coordinates

    @property
    def n(self) -> int:
        return len(self.coordinates)


@dataclass(frozen=True)
class HamiltonianSystem:
    H_c: Polynomial
    primary: tuple[Constraint, ...]
    G0: GroebnerBasis
    order: MonomialOrder
    full_basis: GroebnerBasis  # basis of the momenta relations in Q[dq, p, q]

    @property
    def regular(self) -> bool:
        return not self.primary

    @property
    def table(self) -> VariableTable:
        return self.H_c.table


def momenta_relations(sys: LagrangianSystem) -> list[Polynomial]:
    t = sys.table
    return [
        Polynomial.var(t, momentum_name(c)) - sys.L.diff(velocity_name(c))
        for c in sys.coordinates
    ]


def legendre(sys: LagrangianSystem) -> Polynomial:
    """``sum_i p_i * dq_i - L`` before velocity elimination."""
    t = sys.table
    total = Polynomial.zero(t)
    for c in sys.coordinates:
        total = total + Polynomial.var(t, momentum_name(c)) * Polynomial.var(t, velocity_name(c))
    return total - sys.L


def canonical_hamiltonian(sys: LagrangianSystem, order: MonomialOrder | None = None) -> HamiltonianSystem:
    table = sys.table
    order = order or table.default_order
    velocities = table.of_kind(Kind.VELOCITY)
    phase = table.of_kind(Kind.MOMENTUM, Kind.COORDINATE)
    if not order.eliminates(velocities, phase):
        raise ValueError("the monomial order must eliminate the velocities")

    G = buchberger(momenta_relations(sys), order)
    H_c = normal_form(legendre(sys), G.elements, order)
    if H_c.involves_kind(Kind.VELOCITY):
        raise VelocityEliminationFailed(
            f"canonical Hamiltonian still depends on velocities: {H_c}"
        )
    prim = eliminate(G, phase)
    primary = tuple(
        Constraint(f"phi{k + 1}", p, Origin("primary", index=k + 1)) for k, p in enumerate(prim)
    )
    # the elimination part of a reduced basis is itself reduced
    G0 = GroebnerBasis(tuple(prim), order)
    return HamiltonianSystem(H_c, primary, G0, order, G)


def poisson_bracket(f: Polynomial, g: Polynomial) -> Polynomial:
    """{f, g} = sum_i df/dp_i * dg/dq_i - dg/dp_i * df/dq_i.

    Multipliers are constants here: they are never differentiated.
    """
    f._check(g)
    for h in (f, g):
        if h.involves_kind(Kind.VELOCITY, Kind.AUXILIARY):
            raise ValueError(f"Poisson bracket needs phase-space functions, got {h}")
    table = f.table
    fs, gs = f.support(), g.support()
    out = Polynomial.zero(table)
    for p, q in table.pairs():
        if p in fs and q in gs:
            out = out + f.diff_index(p) * g.diff_index(q)
        if p in gs and q in fs:
            out = out - g.diff_index(p) * f.diff_index(q)
    return out


def total_hamiltonian(h: HamiltonianSystem) -> Polynomial:
    table = h.table
    mult = table.of_kind(Kind.MULTIPLIER)
    if len(mult) < len(h.primary):
        raise ValueError("variable table has fewer multipliers than primary constraints")
    H_t = h.H_c
    for idx, c in zip(mult, h.primary):
        H_t = H_t + Polynomial.var(table, table.variables[idx].name) * c.poly
    return H_t


def equations_of_motion(H_t: Polynomial) -> list[tuple[str, Polynomial]]:
    """Time derivative of every coordinate, then of every momentum."""
    table = H_t.table
    coords = table.coordinates
    out = []
    for c in coords:
        out.append((c, poisson_bracket(H_t, Polynomial.var(table, c))))
    for c in coords:
        p = momentum_name(c)
        out.append((p, poisson_bracket(H_t, Polynomial.var(table, p))))
    return out
