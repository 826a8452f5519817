"""Text and machine (JSON) rendering of an :class:`AnalysisReport`."""

from __future__ import annotations

import json

from ..dirac import AnalysisReport
from ..phasespace import Constraint
from ..ratpoly import Kind, Polynomial

SCHEMA_VERSION = 1


def _constraint_doc(c: Constraint, fmt) -> dict:
    o = c.origin
    origin: dict = {"kind": o.kind}
    if o.kind == "primary":
        origin["index"] = o.index
    elif o.kind == "consistency":
        origin["parent"] = f"phi{o.parent}"
        origin["iteration"] = o.iteration
    doc = {"name": c.name, "poly": fmt(c.poly), "origin": origin, "class": c.class_tag}
    if o.coefficients is not None:
        doc["coefficients"] = [fmt(a) for a in o.coefficients]
    return doc


def report_document(r: AnalysisReport, eom: bool = False, timings: bool = False) -> dict:
    order = r.order
    fmt = lambda p: p.to_str(order)  # noqa: E731
    table = r.H_c.table
    doc = {
        "schema_version": SCHEMA_VERSION,
        "status": r.status,
        "variables": {
            "coordinates": table.coordinates,
            "momenta": [v.name for v in table if v.kind is Kind.MOMENTUM],
            "multipliers": [v.name for v in table if v.kind is Kind.MULTIPLIER][: len(r.primary)],
        },
        "order": repr(order),
        "canonical_hamiltonian": fmt(r.H_c),
        "total_hamiltonian": None if r.H_t is None else fmt(r.H_t),
        "primary": [_constraint_doc(c, fmt) for c in r.primary],
        "complete": [_constraint_doc(c, fmt) for c in r.complete],
        "basis": [] if r.basis is None else [fmt(g) for g in r.basis],
        "first_class": [_constraint_doc(c, fmt) for c in r.first_class],
        "second_class": [_constraint_doc(c, fmt) for c in r.second_class],
        "bracket_matrix": None if r.matrix is None else [[fmt(e) for e in row] for row in r.matrix.entries],
        "rank": r.rank,
        "multiplier_conditions": [
            {
                "constraint": m.constraint,
                "u_free": fmt(m.u_free),
                "coefficients": {name: fmt(p) for name, p in m.coefficients},
            }
            for m in r.multiplier_conditions
        ],
        "equations_of_motion": [
            {"variable": name, "rhs": fmt(rhs)} for name, rhs in r.equations_of_motion
        ] if eom else [],
        "warnings": list(r.warnings),
    }
    if timings:
        doc["timings"] = {k: round(v, 6) for k, v in r.timings.items()}
    return doc


def render_machine(r: AnalysisReport, eom: bool = False, timings: bool = False) -> str:
    return json.dumps(report_document(r, eom, timings), indent=2, ensure_ascii=False) + "\n"


def render_text(r: AnalysisReport, eom: bool = False, timings: bool = False) -> str:
    order = r.order
    fmt = lambda p: p.to_str(order)  # noqa: E731
    lines = [f"status: {r.status}", f"canonical Hamiltonian: H_c = {fmt(r.H_c)}"]
    if r.H_t is not None:
        lines.append(f"total Hamiltonian:     H_t = {fmt(r.H_t)}")

    def block(title, cs):
        lines.append(f"{title} ({len(cs)}):")
        for c in cs:
            lines.append(f"  {c.name}: {fmt(c.poly)}    [{c.origin.describe()}]")

    block("primary constraints", r.primary)
    if r.status != "regular":
        block("complete set", r.complete)
    if r.status == "consistent":
        lines.append(f"bracket matrix rank: {r.rank}")
        block("first class", r.first_class)
        block("second class", r.second_class)
    if r.multiplier_conditions:
        lines.append("multiplier conditions:")
        for m in r.multiplier_conditions:
            terms = " + ".join(f"({fmt(p)})*{u}" for u, p in m.coefficients)
            lines.append(f"  {m.constraint}: {fmt(m.u_free)} + {terms} = 0")
    if eom and r.equations_of_motion:
        lines.append("equations of motion:")
        for name, rhs in r.equations_of_motion:
            lines.append(f"  d/dt {name} = {fmt(rhs)}")
    for w in r.warnings:
        lines.append(f"warning: {w}")
    if timings:
        lines.append("timings: " + ", ".join(f"{k}={v:.4f}s" for k, v in r.timings.items()))
    return "\n".join(lines) + "\n"


def render_report(r: AnalysisReport, format: str = "text", eom: bool = False, timings: bool = False) -> str:
    if format == "text":
        return render_text(r, eom, timings)
    if format == "machine":
        return render_machine(r, eom, timings)
    raise ValueError(f"unknown report format {format!r}")


def report_polynomials(doc: dict) -> list[str]:
    """Every polynomial string in a machine document (for round-trip checks)."""
    out = [doc["canonical_hamiltonian"]]
    if doc["total_hamiltonian"] is not None:
        out.append(doc["total_hamiltonian"])
    for key in ("primary", "complete", "first_class", "second_class"):
        for c in doc[key]:
            out.append(c["poly"])
            out.extend(c.get("coefficients", []))
    out.extend(doc["basis"])
    for row in doc["bracket_matrix"] or []:
        out.extend(row)
    for m in doc["multiplier_conditions"]:
        out.append(m["u_free"])
        out.extend(m["coefficients"].values())
    out.extend(e["rhs"] for e in doc["equations_of_motion"])
    return out


def report_polynomial_values(r: AnalysisReport, eom: bool = False) -> list[Polynomial]:
    """Internal values in the same sequence as :func:`report_polynomials`."""
    out = [r.H_c]
    if r.H_t is not None:
        out.append(r.H_t)
    for cs in (r.primary, r.complete, r.first_class, r.second_class):
        for c in cs:
            out.append(c.poly)
            out.extend(c.origin.coefficients or ())
    out.extend(r.basis or ())
    for row in (r.matrix.entries if r.matrix else ()):
        out.extend(row)
    for m in r.multiplier_conditions:
        out.append(m.u_free)
        out.extend(p for _, p in m.coefficients)
    if eom:
        out.extend(rhs for _, rhs in r.equations_of_motion)
    return out
