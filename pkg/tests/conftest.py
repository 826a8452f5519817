import contextlib
from pathlib import Path

import pytest
from hypothesis import settings
from hypothesis import strategies as st

from diracgb.ratpoly import Polynomial, VariableTable

settings.register_profile("repro", derandomize=True, deadline=None, max_examples=100)
settings.load_profile("repro")

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


def fixture_text(name: str) -> str:
    return (FIXTURES / name).read_text()


@pytest.fixture
def xyz():
    t = VariableTable.symbols("x", "y", "z")
    return t, [Polynomial.var(t, n) for n in "xyz"]


rationals = st.fractions(min_value=-5, max_value=5, max_denominator=4)


def polynomials(table, max_degree=3, max_terms=5, coeffs=rationals):
    n = len(table)
    monos = st.lists(st.integers(0, max_degree), min_size=n, max_size=n).filter(
        lambda m: sum(m) <= max_degree
    ).map(tuple)
    return st.dictionaries(monos, coeffs, max_size=max_terms).map(lambda d: Polynomial(table, d))


@contextlib.contextmanager
def criterion(capsys, label: str):
    """Print one PASS/FAIL line for an acceptance criterion."""
    try:
        yield
    except BaseException:
        with capsys.disabled():
            print(f"\n[FAIL] {label}")
        raise
    with capsys.disabled():
        print(f"\n[PASS] {label}")
