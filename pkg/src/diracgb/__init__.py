"""Dirac constraint analysis of polynomial Lagrangians via Gröbner bases."""

from .ratpoly import Kind, MonomialOrder, Polynomial, Rational, Variable, VariableTable, compare, diff, leading_term
from .groebner import (
    GroebnerBasis,
    NotEliminationOrder,
    buchberger,
    eliminate,
    ideal_member,
    normal_form,
    radical_member,
    s_polynomial,
)

__version__ = "0.1.0"

__all__ = [
    "GroebnerBasis",
    "Kind",
    "MonomialOrder",
    "NotEliminationOrder",
    "Polynomial",
    "Rational",
    "Variable",
    "VariableTable",
    "buchberger",
    "compare",
    "diff",
    "eliminate",
    "ideal_member",
    "leading_term",
    "normal_form",
    "radical_member",
    "s_polynomial",
]
