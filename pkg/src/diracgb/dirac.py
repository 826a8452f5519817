"""Constraint completion, bracket matrix and first/second-class separation."""

from __future__ import annotations

import math
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from .groebner import GroebnerBasis, buchberger, radical_member
from .phasespace import (
    Constraint,
    HamiltonianSystem,
    LagrangianSystem,
    Origin,
    canonical_hamiltonian,
    equations_of_motion,
    poisson_bracket,
    total_hamiltonian,
)
from .ratpoly import Kind, MonomialOrder, Polynomial

Matrix = list  # list[list[Polynomial]]


class IterationLimitExceeded(RuntimeError):
    pass


@dataclass(frozen=True)
class MultiplierCondition:
    constraint: str
    u_free: Polynomial
    coefficients: tuple[tuple[str, Polynomial], ...]  # (multiplier name, coefficient)


@dataclass(frozen=True)
class Insertion:
    iteration: int
    parent: str
    constraint: str
    poly: Polynomial
    previous_basis: GroebnerBasis


@dataclass
class Completion:
    status: str  # "regular" | "consistent" | "inconsistent"
    constraints: list[Constraint]
    basis: GroebnerBasis
    H_t: Polynomial | None
    conditions: list[MultiplierCondition] = field(default_factory=list)
    trace: list[Insertion] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)


@dataclass(frozen=True)
class BracketMatrix:
    entries: tuple[tuple[Polynomial, ...], ...]
    rank: int
    nonconstant_pivot: bool = False

    @property
    def size(self) -> int:
        return len(self.entries)


@dataclass
class AnalysisReport:
    status: str
    H_c: Polynomial
    H_t: Polynomial | None
    primary: list[Constraint]
    complete: list[Constraint]
    first_class: list[Constraint]
    second_class: list[Constraint]
    matrix: BracketMatrix | None
    multiplier_conditions: list[MultiplierCondition]
    equations_of_motion: list[tuple[str, Polynomial]]
    warnings: list[str]
    timings: dict[str, float]
    order: MonomialOrder
    basis: GroebnerBasis | None
    trace: list[Insertion] = field(default_factory=list)

    @property
    def rank(self) -> int | None:
        return None if self.matrix is None else self.matrix.rank


# ---------------------------------------------------------------------------
# completion loop
# ---------------------------------------------------------------------------

def split_multipliers(h: Polynomial) -> tuple[Polynomial, dict[str, Polynomial]]:
    """Write ``h = h0 + sum_b u_b * h_b``; ``h`` must be affine in the multipliers."""
    table = h.table
    mult = table.of_kind(Kind.MULTIPLIER)
    groups = h.split_by(mult)
    h0 = Polynomial.zero(table)
    coeffs: dict[str, Polynomial] = {}
    for key, part in groups.items():
        if not any(key):
            h0 = part
            continue
        if sum(key) != 1:
            raise ValueError(f"expression is not linear in the multipliers: {h}")
        coeffs[table.variables[mult[key.index(1)]].name] = part
    return h0, coeffs


def _consistency(H_t: Polynomial, c: Constraint, G: GroebnerBasis):
    return split_multipliers(G.reduce(poisson_bracket(H_t, c.poly)))


def complete_constraints(
    h: HamiltonianSystem,
    radical_check: bool = False,
    max_iter: int | None = None,
) -> Completion:
    """Enlarge the primary constraints until every consistency condition holds.

    After each insertion all constraints are re-scanned.  Brackets that
    involve multipliers only define the multipliers and add nothing.
    """
    order = h.order
    if h.regular:
        return Completion("regular", [], GroebnerBasis((), order), None)

    H_t = total_hamiltonian(h)
    n = len(h.table.coordinates)
    cap = max_iter if max_iter is not None else 10 * (2 * n)
    constraints = list(h.primary)
    G = h.G0
    trace: list[Insertion] = []
    warnings: list[str] = []
    iteration = 0

    while True:
        inserted = False
        for idx, c in enumerate(constraints):
            h0, coeffs = _consistency(H_t, c, G)
            if any(not v.is_zero() for v in coeffs.values()) or h0.is_zero():
                continue
            if radical_check and radical_member(h0, G.elements, order):
                msg = f"NON-RADICAL: consistency condition of {c.name} lies in the radical but not the ideal: {h0.to_str(order)}"
                if msg not in warnings:
                    warnings.append(msg)
                continue
            iteration += 1
            if iteration > cap:
                raise IterationLimitExceeded(
                    f"completion did not reach a fixpoint within {cap} insertions"
                )
            new = Constraint(
                f"phi{len(constraints) + 1}",
                h0.monic(order),
                Origin("consistency", parent=idx + 1, iteration=iteration),
            )
            trace.append(Insertion(iteration, c.name, new.name, new.poly, G))
            constraints.append(new)
            G = buchberger([x.poly for x in constraints], order)
            if G.is_unit():
                warnings.append(
                    f"inconsistent: consistency condition of {c.name} ({c.poly.to_str(order)}) "
                    f"gives {h0.to_str(order)}; the constraint ideal is the whole ring"
                )
                return Completion("inconsistent", constraints, G, H_t, [], trace, warnings)
            inserted = True
            break
        if not inserted:
            break

    conditions = multiplier_conditions(H_t, constraints, G)
    warnings.extend(_hidden_constraint_warnings(conditions, G))
    return Completion("consistent", constraints, G, H_t, conditions, trace, warnings)


def multiplier_conditions(H_t: Polynomial, constraints: Sequence[Constraint], G: GroebnerBasis) -> list[MultiplierCondition]:
    out = []
    for c in constraints:
        h0, coeffs = _consistency(H_t, c, G)
        nz = tuple((name, v) for name, v in sorted(coeffs.items(), key=lambda kv: _mult_index(kv[0])) if not v.is_zero())
        if nz:
            out.append(MultiplierCondition(c.name, h0, nz))
    return out


def _mult_index(name: str) -> int:
    return int(name[1:])


def _hidden_constraint_warnings(conditions: Sequence[MultiplierCondition], G: GroebnerBasis) -> list[str]:
    """Flag multiplier systems whose u-free parts are not implied by the coefficient rows.

    When the coefficient matrix has smaller rank than the matrix augmented
    with the u-free column, a combination of conditions is free of
    multipliers and would be a further constraint.  It is not added.
    """
    if not conditions:
        return []
    names = sorted({n for c in conditions for n, _ in c.coefficients}, key=_mult_index)
    table = conditions[0].u_free.table
    zero = Polynomial.zero(table)
    rows = []
    for c in conditions:
        d = dict(c.coefficients)
        rows.append([d.get(n, zero) for n in names])
    aug = [r + [c.u_free] for r, c in zip(rows, conditions)]
    if rank_mod_ideal(rows, G) < rank_mod_ideal(aug, G):
        return [
            "multiplier conditions are degenerate: a multiplier-free combination of them "
            "is nonzero on the constraint surface and was not added as a constraint"
        ]
    return []


def verify_fixpoint(completion: Completion, radical_check: bool = False) -> bool:
    """Independent re-check of the consistency condition for every constraint."""
    if completion.status != "consistent":
        return completion.status == "regular"
    G = completion.basis
    for c in completion.constraints:
        h0, coeffs = _consistency(completion.H_t, c, G)
        if any(not v.is_zero() for v in coeffs.values()):
            continue
        if h0.is_zero():
            continue
        if radical_check and radical_member(h0, G.elements, G.order):
            continue
        return False
    return True


# ---------------------------------------------------------------------------
# linear algebra over the quotient ring
# ---------------------------------------------------------------------------

def _reduce_matrix(M: Matrix, G: GroebnerBasis) -> list[list[Polynomial]]:
    return [[G.reduce(x) for x in row] for row in M]


def _echelon(M: Matrix, G: GroebnerBasis, jordan: bool = False):
    """Row echelon form with every intermediate value reduced modulo ``G``.

    A pivot is admissible iff its normal form is nonzero; rational pivots
    are preferred.  Non-constant pivots use fraction-free row updates.
    Returns (rows, pivot columns, whether a non-constant pivot was used).
    """
    A = _reduce_matrix(M, G)
    nrows = len(A)
    ncols = len(A[0]) if A else 0
    pivcols: list[int] = []
    nonconstant = False
    r = 0

    def eliminate_row(i: int, k: int, col: int) -> None:
        a = A[i][col]
        if a.is_zero():
            return
        p = A[k][col]
        if p.is_constant():
            f = a.scale(1 / p.constant_value())
            A[i] = [G.reduce(x - f * y) if not y.is_zero() else x for x, y in zip(A[i], A[k])]
        else:
            A[i] = [G.reduce(p * x - a * y) for x, y in zip(A[i], A[k])]

    for col in range(ncols):
        if r == nrows:
            break
        cand = [i for i in range(r, nrows) if not A[i][col].is_zero()]
        if not cand:
            continue
        piv = min(
            cand,
            key=lambda i: (not A[i][col].is_constant(), A[i][col].total_degree(), len(A[i][col]), i),
        )
        A[r], A[piv] = A[piv], A[r]
        if not A[r][col].is_constant():
            nonconstant = True
        for i in range(r + 1, nrows):
            eliminate_row(i, r, col)
        pivcols.append(col)
        r += 1

    if jordan:
        for k in range(len(pivcols) - 1, -1, -1):
            for i in range(k):
                eliminate_row(i, k, pivcols[k])
    return A, pivcols, nonconstant


def rank_mod_ideal(M: Matrix, G: GroebnerBasis) -> int:
    """Generic rank of ``M`` over the quotient by the ideal of ``G``."""
    if not M or not M[0]:
        return 0
    _, pivcols, _ = _echelon(M, G)
    return len(pivcols)


def normalize_vector(v: Sequence[Polynomial], order: MonomialOrder) -> list[Polynomial]:
    """First nonzero entry monic, then denominators cleared and integer content removed."""
    first = next((x for x in v if not x.is_zero()), None)
    if first is None:
        return list(v)
    v = [x.scale(1 / first.leading_term(order)[1]) for x in v]
    coeffs = [c for x in v for c in x.terms.values()]
    den = 1
    for c in coeffs:
        den = math.lcm(den, c.denominator)
    num = 0
    for c in coeffs:
        num = math.gcd(num, int(c * den))
    return [x.scale(Fraction(den, num)) for x in v]


def nullspace_mod_ideal(M: Matrix, G: GroebnerBasis, ncols: int | None = None) -> list[list[Polynomial]]:
    """Basis of the kernel of ``M`` over the quotient ring, one vector per free column."""
    order = G.order
    if not M or not M[0]:
        if ncols is None:
            raise ValueError("column count needed for an empty matrix")
        return []
    A, pivcols, _ = _echelon(M, G, jordan=True)
    table = A[0][0].table
    ncols = len(A[0])
    one = Polynomial.constant(table, 1)
    pivots = [A[i][c] for i, c in enumerate(pivcols)]
    scale = one
    for d in pivots:
        if not d.is_constant():
            scale = G.reduce(scale * d)

    basis = []
    for f in range(ncols):
        if f in pivcols:
            continue
        v = [Polynomial.zero(table) for _ in range(ncols)]
        v[f] = scale
        for i, c in enumerate(pivcols):
            d = pivots[i]
            if d.is_constant():
                v[c] = G.reduce(-(A[i][f] * scale).scale(1 / d.constant_value()))
            else:
                rest = one
                for j, dj in enumerate(pivots):
                    if j != i and not dj.is_constant():
                        rest = rest * dj
                v[c] = G.reduce(-(A[i][f] * rest))
        basis.append(normalize_vector(v, order))
    return basis


def bracket_matrix(constraints: Sequence[Constraint], G: GroebnerBasis) -> BracketMatrix:
    k = len(constraints)
    table = constraints[0].poly.table if constraints else None
    entries = [[None] * k for _ in range(k)]
    for a in range(k):
        entries[a][a] = Polynomial.zero(table)
        for b in range(a + 1, k):
            e = G.reduce(poisson_bracket(constraints[a].poly, constraints[b].poly))
            entries[a][b] = e
            entries[b][a] = -e
    if k == 0:
        return BracketMatrix((), 0)
    _, pivcols, nonconstant = _echelon(entries, G)
    return BracketMatrix(tuple(tuple(r) for r in entries), len(pivcols), nonconstant)


def is_first_class(phi: Polynomial, constraints: Sequence[Constraint], G: GroebnerBasis) -> bool:
    """Bracket with every constraint reduces to zero."""
    return all(G.reduce(poisson_bracket(phi, c.poly)).is_zero() for c in constraints)


def _combine(vectors, constraints: Sequence[Constraint], order, prefix: str, tag: str, warnings: list[str]):
    out = []
    table = constraints[0].poly.table
    for v in vectors:
        comb = Polynomial.zero(table)
        for a, c in zip(v, constraints):
            if not a.is_zero():
                comb = comb + a * c.poly
        if comb.is_zero():
            warnings.append(f"{prefix}: kernel vector gives the zero combination and was dropped")
            continue
        lc = comb.leading_term(order)[1]
        coeffs = tuple(a.scale(1 / lc) for a in v)
        out.append(
            Constraint(f"{prefix}{len(out) + 1}", comb.monic(order), Origin("combination", coefficients=coeffs), tag)
        )
    return out


def separate(constraints: Sequence[Constraint], G: GroebnerBasis, M: BracketMatrix | None = None):
    """Split the complete set into first- and second-class constraints.

    Returns (first class, second class, bracket matrix, warnings).
    """
    warnings: list[str] = []
    k = len(constraints)
    if M is None:
        M = bracket_matrix(constraints, G)
    r = M.rank
    if M.nonconstant_pivot:
        warnings.append(
            "bracket-matrix rank used a non-constant pivot; it is the generic rank and may "
            "differ on components of the constraint surface"
        )
    if r == k:
        return [], [c.tagged("second") for c in constraints], M, warnings
    if r == 0:
        return [c.tagged("first") for c in constraints], [], M, warnings

    order = G.order
    A = nullspace_mod_ideal([list(row) for row in M.entries], G)
    first = _combine(A, constraints, order, "fc", "first", warnings)
    B = nullspace_mod_ideal(A, G, ncols=k)
    second = _combine(B, constraints, order, "sc", "second", warnings)
    for c in first:
        if not is_first_class(c.poly, constraints, G):
            warnings.append(f"{c.name} fails the first-class certificate")
    return first, second, M, warnings


# ---------------------------------------------------------------------------
# pipeline
# ---------------------------------------------------------------------------

def analyze(
    sys: LagrangianSystem,
    order: MonomialOrder | None = None,
    radical_check: bool = False,
    max_iter: int | None = None,
) -> AnalysisReport:
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    ham = canonical_hamiltonian(sys, order)
    order = ham.order
    timings["hamiltonian"] = time.perf_counter() - t0

    t1 = time.perf_counter()
    comp = complete_constraints(ham, radical_check=radical_check, max_iter=max_iter)
    timings["completion"] = time.perf_counter() - t1

    H_t = comp.H_t
    eom = equations_of_motion(H_t if H_t is not None else ham.H_c)
    warnings = list(comp.warnings)
    first: list[Constraint] = []
    second: list[Constraint] = []
    matrix = None
    complete = comp.constraints
    if comp.status == "consistent":
        t2 = time.perf_counter()
        first, second, matrix, w = separate(complete, comp.basis)
        warnings.extend(w)
        timings["separation"] = time.perf_counter() - t2
    timings["total"] = time.perf_counter() - t0

    return AnalysisReport(
        status=comp.status,
        H_c=ham.H_c,
        H_t=H_t,
        primary=list(ham.primary),
        complete=list(complete),
        first_class=first,
        second_class=second,
        matrix=matrix,
        multiplier_conditions=comp.conditions,
        equations_of_motion=eom,
        warnings=warnings,
        timings=timings,
        order=order,
        basis=comp.basis if comp.status != "regular" else None,
        trace=comp.trace,
    )
