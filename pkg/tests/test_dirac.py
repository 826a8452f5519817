import random
from fractions import Fraction

import pytest
import sympy

from diracgb.dirac import (
    IterationLimitExceeded,
    analyze,
    bracket_matrix,
    complete_constraints,
    is_first_class,
    nullspace_mod_ideal,
    rank_mod_ideal,
    separate,
    split_multipliers,
    verify_fixpoint,
)
from diracgb.frontend import parse_problem
from diracgb.groebner import GroebnerBasis, buchberger, ideal_member
from diracgb.phasespace import Constraint, Origin, canonical_hamiltonian, poisson_bracket
from diracgb.ratpoly import Kind, Polynomial, VariableTable
from conftest import FIXTURES, fixture_text

FIXTURE_NAMES = sorted(p.name for p in FIXTURES.glob("*.dg"))


def load(name):
    return parse_problem(fixture_text(name))[1]


def V(t, name):
    return Polynomial.var(t, name)


def as_constraints(polys):
    return [Constraint(f"phi{i + 1}", p, Origin("primary", index=i + 1)) for i, p in enumerate(polys)]


def mixed_setup():
    s = load("mixed_classes.dg")
    t = s.table
    polys = [V(t, "p_q1") + V(t, "q2"), V(t, "p_q2") - V(t, "q1"), V(t, "p_q3"), V(t, "q1")]
    G = buchberger(polys, t.default_order)
    return t, as_constraints(polys), G


# --- completion ----------------------------------------------------------------

def test_split_multipliers():
    t = VariableTable.for_coordinates(["q1"], n_multipliers=2)
    h = V(t, "q1") + 2 * V(t, "u1") * V(t, "p_q1") - V(t, "u2")
    h0, coeffs = split_multipliers(h)
    assert h0 == V(t, "q1")
    assert coeffs == {"u1": 2 * V(t, "p_q1"), "u2": Polynomial.constant(t, -1)}
    with pytest.raises(ValueError):
        split_multipliers(V(t, "u1") ** 2)


def test_completion_inconsistent():
    ham = canonical_hamiltonian(load("inconsistent.dg"))
    comp = complete_constraints(ham)
    assert comp.status == "inconsistent"
    assert comp.basis.is_unit()
    assert comp.constraints[-1].poly == 1
    assert any("phi1" in w for w in comp.warnings)


def test_completion_regular():
    comp = complete_constraints(canonical_hamiltonian(load("regular.dg")))
    assert comp.status == "regular"
    assert comp.constraints == [] and comp.trace == []


def test_completion_yang_mills():
    s = load("ym01.dg")
    t = s.table
    comp = complete_constraints(canonical_hamiltonian(s))
    assert comp.status == "consistent"
    assert len(comp.constraints) == 6
    x = {i: V(t, f"x{i}") for i in (1, 2, 3)}
    p = {i: V(t, f"p_x{i}") for i in (1, 2, 3)}
    eps = [(1, 2, 3), (2, 3, 1), (3, 1, 2)]
    for i, j, k in eps:
        assert ideal_member(x[j] * p[k] - x[k] * p[j], comp.basis)


def test_completion_rotator():
    s = load("rotator.dg")
    t = s.table
    comp = complete_constraints(canonical_hamiltonian(s))
    q2 = sum((V(t, f"q{i}") ** 2 for i in (1, 2, 3)), Polynomial.zero(t))
    p2 = sum((V(t, f"p_q{i}") ** 2 for i in (1, 2, 3)), Polynomial.zero(t))
    pq = sum((V(t, f"p_q{i}") * V(t, f"q{i}") for i in (1, 2, 3)), Polynomial.zero(t))
    expected = buchberger([V(t, "p_lam"), q2 - 1, pq, 2 * V(t, "lam") + p2], t.default_order)
    assert comp.basis == expected


def test_iteration_cap_is_reported():
    with pytest.raises(IterationLimitExceeded):
        complete_constraints(canonical_hamiltonian(load("rotator.dg")), max_iter=1)


def test_radical_mode_warns_and_skips():
    s = parse_problem("coords: q1 q2\nL = 1/2*dq1^2 + q2*q1^2")[1]
    h = canonical_hamiltonian(s)
    plain = complete_constraints(h)
    radical = complete_constraints(h, radical_check=True)
    assert len(plain.constraints) == 4
    assert len(radical.constraints) == 2
    assert any(w.startswith("NON-RADICAL") for w in radical.warnings)
    assert verify_fixpoint(radical, radical_check=True)
    assert not verify_fixpoint(radical, radical_check=False)


def test_degenerate_multiplier_system_is_flagged():
    s = parse_problem("coords: a b c\nL = (a + c)*db + a")[1]
    comp = complete_constraints(canonical_hamiltonian(s))
    assert any("degenerate" in w for w in comp.warnings)


def test_trace_records_strict_growth():
    for name in ("ym01.dg", "rotator.dg", "mixed_classes.dg"):
        comp = complete_constraints(canonical_hamiltonian(load(name)))
        for ins in comp.trace:
            assert not ideal_member(ins.poly, ins.previous_basis)
        names = {c.name for c in comp.constraints}
        assert all(ins.constraint in names for ins in comp.trace)


# --- bracket matrix and rank ------------------------------------------------------

def test_bracket_matrix_mixed():
    t, cs, G = mixed_setup()
    M = bracket_matrix(cs, G)
    assert M.rank == 2
    nonzero = {(a, b): e for a, row in enumerate(M.entries) for b, e in enumerate(row) if not e.is_zero()}
    assert nonzero == {(0, 1): -2, (1, 0): 2, (0, 3): 1, (3, 0): -1}


def test_rank_examples():
    t = VariableTable.symbols("x")
    G = GroebnerBasis((), t.default_order)
    z, one = Polynomial.zero(t), Polynomial.constant(t, 1)
    assert rank_mod_ideal([[z, z], [z, z]], G) == 0
    assert rank_mod_ideal([[z, one], [-one, z]], G) == 2
    x = Polynomial.var(t, "x")
    Gx = buchberger([x], t.default_order)
    # x vanishes on the surface, so the pivot is not admissible
    assert rank_mod_ideal([[z, x], [-x, z]], Gx) == 0
    assert rank_mod_ideal([[z, x + 1], [-x - 1, z]], Gx) == 2


def test_rank_matches_sympy_on_rational_matrices():
    rng = random.Random(7)
    t = VariableTable.symbols("x")
    G = GroebnerBasis((), t.default_order)
    for _ in range(60):
        n, m = rng.randint(1, 5), rng.randint(1, 5)
        rows = [[Fraction(rng.randint(-2, 2), rng.randint(1, 3)) if rng.random() < 0.6 else Fraction(0) for _ in range(m)] for _ in range(n)]
        # duplicate a row sometimes to force deficiency
        if n > 1 and rng.random() < 0.5:
            rows[-1] = [2 * c for c in rows[0]]
        M = [[Polynomial.constant(t, c) for c in r] for r in rows]
        expected = sympy.Matrix([[sympy.Rational(c.numerator, c.denominator) for c in r] for r in rows]).rank()
        assert rank_mod_ideal(M, G) == expected
        kernel = nullspace_mod_ideal(M, G)
        assert len(kernel) == m - expected
        for v in kernel:
            for r in M:
                assert sum((a * b for a, b in zip(r, v)), Polynomial.zero(t)).is_zero()


def test_nullspace_examples():
    t, cs, G = mixed_setup()
    z = Polynomial.zero(t)
    one = Polynomial.constant(t, 1)
    assert nullspace_mod_ideal([[z, z], [z, z]], G) == [[one, z], [z, one]]
    M = bracket_matrix(cs, G)
    kernel = nullspace_mod_ideal([list(r) for r in M.entries], G)
    assert kernel == [[z, z, one, z], [z, one, z, 2 * one]]
    rot = load("rotator.dg")
    comp = complete_constraints(canonical_hamiltonian(rot))
    Mr = bracket_matrix(comp.constraints, comp.basis)
    assert nullspace_mod_ideal([list(r) for r in Mr.entries], comp.basis) == []


# --- separation --------------------------------------------------------------------

def test_separate_mixed():
    t, cs, G = mixed_setup()
    first, second, M, warnings = separate(cs, G)
    assert M.rank == 2 and len(first) == 2 and len(second) == 2
    assert warnings == []
    assert {c.poly for c in first} == {V(t, "p_q3"), V(t, "p_q2") + V(t, "q1")}
    for c in first:
        assert is_first_class(c.poly, cs, G)
        combo = sum((a * x.poly for a, x in zip(c.origin.coefficients, cs)), Polynomial.zero(t))
        assert combo == c.poly
    assert buchberger([c.poly for c in first + second], G.order) == G


def test_separate_extremes():
    comp = complete_constraints(canonical_hamiltonian(load("ym01.dg")))
    first, second, M, _ = separate(comp.constraints, comp.basis)
    assert M.rank == 0 and len(first) == 6 and second == []
    assert all(c.class_tag == "first" for c in first)
    comp = complete_constraints(canonical_hamiltonian(load("rotator.dg")))
    first, second, M, _ = separate(comp.constraints, comp.basis)
    assert M.rank == 4 and first == [] and len(second) == 4


# --- properties over every fixture -----------------------------------------------------

@pytest.mark.parametrize("name", FIXTURE_NAMES)
def test_fixture_properties(name):
    r = analyze(load(name))
    comp_ok = r.status in ("regular", "consistent", "inconsistent")
    assert comp_ok
    if r.status == "inconsistent":
        assert r.first_class == [] and r.second_class == [] and r.basis.is_unit()
        return
    if r.status == "regular":
        assert r.complete == [] and r.matrix is None
        return
    G = r.basis
    k = len(r.complete)
    E = r.matrix.entries
    for a in range(k):
        assert E[a][a].is_zero()
        for b in range(k):
            assert E[a][b] == -E[b][a]
            assert E[a][b] == G.reduce(poisson_bracket(r.complete[a].poly, r.complete[b].poly))
    assert r.rank % 2 == 0
    assert len(r.second_class) == r.rank
    assert len(r.first_class) == k - r.rank
    for c in r.first_class:
        assert is_first_class(c.poly, r.complete, G)
    assert buchberger([c.poly for c in r.first_class + r.second_class], G.order) == G
    for c in r.complete:
        assert not c.poly.involves_kind(Kind.VELOCITY, Kind.MULTIPLIER)
        assert c.poly.leading_term(G.order)[1] == 1
        c.poly.audit()


def test_nonconstant_pivot_warning():
    s = parse_problem(
        "coords: x1 x2 x3 z1 z2 z3 y1 y2 y3\nparams: g=1\n"
        "L = -3/2*y3^2 + 1/2*((dx1 + g*(y2*x3 - y3*x2))^2 + (dx2 + g*(y3*x1 - y1*x3))^2 + (dx3 + g*(y1*x2 - y2*x1))^2"
        " + (dz1 + g*(y2*z3 - y3*z2))^2 + (dz2 + g*(y3*z1 - y1*z3))^2 + (dz3 + g*(y1*z2 - y2*z1))^2)"
    )[1]
    r = analyze(s)
    assert r.status == "consistent"
    assert any("non-constant pivot" in w for w in r.warnings)
