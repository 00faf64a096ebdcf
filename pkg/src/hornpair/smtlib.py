"""SMT-LIB 2.6 emission in the HORN fragment.

One ``declare-fun`` per predicate (sorted by name), one universally
quantified implication per clause in system order, goal clauses asserting
``false``, and a final ``(check-sat)``.  Output is deterministic so golden
tests can compare bytes.  Atomic constraints over integer-sorted variables
are scaled to integer coefficients and bounds before printing.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .syntax import (
    Atom, AtomicConstraint, ChcSystem, Clause, EQ, REAL, VarId, var_name,
)


def _num(x: Fraction, real: bool) -> str:
    if x < 0:
        return f"(- {_num(-x, real)})"
    if x.denominator == 1:
        return f"{x.numerator}.0" if real else str(x.numerator)
    return f"(/ {x.numerator} {x.denominator})"


def _sum(terms: list[str]) -> str:
    if not terms:
        return "0"
    if len(terms) == 1:
        return terms[0]
    return f"(+ {' '.join(terms)})"


def _atomic(a: AtomicConstraint, real: bool) -> str:
    coeffs = a.coeffs
    bound = a.bound
    if not real:
        scale = math.lcm(bound.denominator,
                         *(c.denominator for _, c in coeffs))
        coeffs = tuple((v, c * scale) for v, c in coeffs)
        bound = bound * scale
    terms = []
    for v, c in coeffs:
        name = var_name(v.index)
        if c == 1:
            terms.append(name)
        else:
            terms.append(f"(* {_num(c, real)} {name})")
    op = "=" if a.rel == EQ else "<="
    return f"({op} {_sum(terms)} {_num(bound, real)})"


def _atom(atom: Atom) -> str:
    if not atom.args:
        return atom.pred
    return f"({atom.pred} {' '.join(var_name(v.index) for v in atom.args)})"


def _clause(clause: Clause) -> str:
    vs = clause.var_order()
    parts = [_atomic(a, any(v.sort == REAL for v in a.vars()))
             for a in clause.constraint.atoms]
    parts.extend(_atom(a) for a in clause.body)
    if not parts:
        body = "true"
    elif len(parts) == 1:
        body = parts[0]
    else:
        body = f"(and {' '.join(parts)})"
    head = "false" if clause.head is None else _atom(clause.head)
    impl = f"(=> {body} {head})"
    if vs:
        binders = " ".join(
            f"({var_name(v.index)} {'Real' if v.sort == REAL else 'Int'})"
            for v in vs)
        impl = f"(forall ({binders}) {impl})"
    return f"(assert {impl})"


def emit_smtlib(system: ChcSystem) -> str:
    """Render a normalized system as an SMT-LIB HORN script."""
    lines = ["(set-logic HORN)"]
    for pred in sorted(system.sigs):
        sorts = " ".join("Real" if s == REAL else "Int"
                         for s in system.sigs[pred])
        lines.append(f"(declare-fun {pred} ({sorts}) Bool)")
    lines.extend(_clause(c) for c in system.clauses)
    lines.append("(check-sat)")
    return "\n".join(lines) + "\n"
