"""Acceptance criteria, one test per criterion.

Each test prints a single ``[PASS]`` or ``[FAIL]`` line.  Run with
``pytest tests/test_acceptance.py -v -s`` to see them in order.
"""

import io
import random
import time
from fractions import Fraction

from diracgb.benchmark import gauge_mechanics_problem
from diracgb.dirac import analyze, complete_constraints, is_first_class, verify_fixpoint
from diracgb.frontend import parse_problem
from diracgb.frontend.cli import run
from diracgb.groebner import buchberger, ideal_member, is_groebner, s_polynomial
from diracgb.phasespace import canonical_hamiltonian, poisson_bracket
from diracgb.ratpoly import MonomialOrder, Polynomial, VariableTable
from conftest import FIXTURES, criterion, fixture_text

ALL_FIXTURES = sorted(p.name for p in FIXTURES.glob("*.dg"))


def load(name):
    return parse_problem(fixture_text(name))[1]


def timed_analyze(name):
    system = load(name)
    t0 = time.perf_counter()
    r = analyze(system)
    return system.table, r, time.perf_counter() - t0


def total(polys, t):
    return sum(polys, Polynomial.zero(t))


def test_criterion_1_yang_mills(capsys):
    with criterion(capsys, "1 SU(2) Yang-Mills 0+1: six first-class constraints, rank 0"):
        t, r, dt = timed_analyze("ym01.dg")
        V = lambda n: Polynomial.var(t, n)
        assert [c.poly for c in r.primary] == [V("p_y1"), V("p_y2"), V("p_y3")]
        assert r.status == "consistent" and len(r.complete) == 6
        for j, k in ((2, 3), (3, 1), (1, 2)):
            assert ideal_member(V(f"x{j}") * V(f"p_x{k}") - V(f"x{k}") * V(f"p_x{j}"), r.basis)
        assert r.rank == 0 and len(r.first_class) == 6 and r.second_class == []
        assert dt < 1.0


def test_criterion_2_rotator(capsys):
    with criterion(capsys, "2 rotator: basis matches, rank 4, four second-class constraints"):
        t, r, dt = timed_analyze("rotator.dg")
        V = lambda n: Polynomial.var(t, n)
        q2 = total([V(f"q{i}") ** 2 for i in (1, 2, 3)], t)
        p2 = total([V(f"p_q{i}") ** 2 for i in (1, 2, 3)], t)
        pq = total([V(f"p_q{i}") * V(f"q{i}") for i in (1, 2, 3)], t)
        expected = buchberger([V("p_lam"), q2 - 1, pq, 2 * V("lam") + p2], t.default_order)
        assert r.basis == expected
        assert r.rank == 4 and r.first_class == [] and len(r.second_class) == 4
        assert dt < 1.0


def test_criterion_3_mixed_classes(capsys):
    with criterion(capsys, "3 mixed example: rank 2, two first and two second class"):
        t, r, dt = timed_analyze("mixed_classes.dg")
        V = lambda n: Polynomial.var(t, n)
        assert [c.poly for c in r.primary] == [V("p_q1") + V("q2"), V("p_q2") - V("q1"), V("p_q3")]
        secondary = r.complete[len(r.primary):]
        assert len(secondary) == 1
        assert r.basis.reduce(secondary[0].poly).is_zero()
        assert secondary[0].poly == V("q1")
        assert r.rank == 2 and len(r.first_class) == 2 and len(r.second_class) == 2
        for c in r.first_class:
            assert is_first_class(c.poly, r.complete, r.basis)
        assert buchberger([c.poly for c in r.first_class + r.second_class], r.order) == r.basis
        for f in (V("p_q2") + V("q1"), V("p_q3")):
            assert is_first_class(f, r.complete, r.basis)
        assert dt < 1.0


def test_criterion_4_inconsistent(capsys):
    with criterion(capsys, "4 inconsistent Lagrangian: detected, exit code 2"):
        t, r, dt = timed_analyze("inconsistent.dg")
        V = lambda n: Polynomial.var(t, n)
        assert r.H_c == Fraction(1, 2) * V("p_q1") ** 2 - V("q2")
        assert [c.poly for c in r.primary] == [V("p_q2")]
        assert r.status == "inconsistent"
        assert r.first_class == [] and r.second_class == [] and r.basis.is_unit()
        assert run(["analyze", str(FIXTURES / "inconsistent.dg")], io.StringIO()) == 2
        assert dt < 1.0


def test_criterion_5_generated_benchmark(capsys):
    with criterion(capsys, "5 generated degree-4, 12-variable singular Lagrangian under 30 s"):
        for seed, mass in ((0, False), (1, False), (2, True)):
            system = parse_problem(gauge_mechanics_problem(seed, 1, mass))[1]
            t = system.table
            n_q = len(t.coordinates)
            assert 2 * n_q == 12 and system.L.total_degree() == 4
            t0 = time.perf_counter()
            r = analyze(system)
            dt = time.perf_counter() - t0
            assert r.status == "consistent" and len(r.complete) == 6
            assert r.rank == (6 if mass else 0)
            assert dt < 30.0
        # a larger instance with three matter fields (24 variables)
        system = parse_problem(gauge_mechanics_problem(0, 3))[1]
        t0 = time.perf_counter()
        r = analyze(system)
        assert time.perf_counter() - t0 < 30.0 and r.status == "consistent"


def _random_poly(rng, table, n_vars, max_degree=3, max_terms=4):
    n = len(table)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        m = [0] * n
        for _ in range(rng.randint(0, max_degree)):
            m[rng.randrange(n_vars)] += 1
        terms[tuple(m)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return Polynomial(table, terms)


def test_criterion_6_property_suites(capsys):
    with criterion(capsys, "6 property suites: certificates, NF laws, bracket axioms, fixture invariants"):
        rng = random.Random(20240601)
        t3 = VariableTable.symbols("x", "y", "z")
        drl = MonomialOrder.degrevlex([0, 1, 2])
        for _ in range(40):
            F = [_random_poly(rng, t3, 3, 2, 3) for _ in range(rng.randint(1, 3))]
            G = buchberger(F, drl)
            assert is_groebner(G.elements, drl)
            for a in G:
                for b in G:
                    assert G.reduce(s_polynomial(a, b, drl)).is_zero()
            f, g = _random_poly(rng, t3, 3), _random_poly(rng, t3, 3)
            a, b = Fraction(rng.randint(-3, 3), 2), Fraction(rng.randint(-3, 3), 3)
            assert G.reduce(G.reduce(f)) == G.reduce(f)
            assert G.reduce(a * f + b * g) == a * G.reduce(f) + b * G.reduce(g)

        t = VariableTable.for_coordinates(["q1", "q2", "q3"])
        phase = [t.index(n) for n in ("p_q1", "p_q2", "p_q3", "q1", "q2", "q3")]
        sub = VariableTable.symbols(*(t.names[i] for i in phase))
        pb = poisson_bracket
        for _ in range(100):
            f, g, h = (_random_poly(rng, sub, 6).embed(t) for _ in range(3))
            assert pb(f, g) == -pb(g, f)
            assert pb(f, g * h) == g * pb(f, h) + pb(f, g) * h
            assert (pb(f, pb(g, h)) + pb(g, pb(h, f)) + pb(h, pb(f, g))).is_zero()

        for name in ALL_FIXTURES:
            system = load(name)
            r = analyze(system)
            if r.status != "consistent":
                continue
            E = r.matrix.entries
            k = len(r.complete)
            assert all(E[i][j] == -E[j][i] for i in range(k) for j in range(k))
            assert r.rank % 2 == 0
            assert len(r.first_class) + len(r.second_class) == k
            assert len(r.second_class) == r.rank
            comp = complete_constraints(canonical_hamiltonian(system))
            assert verify_fixpoint(comp)


def test_criterion_7_determinism(capsys):
    with criterion(capsys, "7 determinism: byte-identical machine reports"):
        for name in ALL_FIXTURES:
            outs = []
            for _ in range(2):
                buf = io.StringIO()
                run(["analyze", str(FIXTURES / name), "--json", "--eom"], buf)
                outs.append(buf.getvalue().encode())
            assert outs[0] == outs[1] and outs[0]
