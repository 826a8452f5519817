from .parser import (
    MissingParameter,
    NonPolynomial,
    ParseError,
    ProblemFile,
    UndeclaredIdentifier,
    parse_polynomial,
    parse_problem,
)
from .report import render_report, report_document

__all__ = [
    "MissingParameter",
    "NonPolynomial",
    "ParseError",
    "ProblemFile",
    "UndeclaredIdentifier",
    "parse_polynomial",
    "parse_problem",
    "render_report",
    "report_document",
]
