"""Seeded random generators for small systems and constraints, shared by
the property and acceptance test suites."""

from __future__ import annotations

import random
from fractions import Fraction

from .syntax import (
    Atom, ChcSystem, Clause, Constraint, INT, VarId, constraint_of,
    make_atomic, normalize_clause,
)


def random_constraint(rng: random.Random, nvars: int = 4,
                      max_atoms: int = 6, coeff_range: int = 3,
                      bound_range: int = 4) -> Constraint:
    """A random conjunction of linear atoms over variables 0..nvars-1 with
    small integer coefficients; used by the domain operator suites."""
    vs = [VarId(i, INT) for i in range(nvars)]
    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        support = rng.sample(vs, rng.randint(1, min(2 + rng.randint(0, 1),
                                                    nvars)))
        coeffs = {}
        for v in support:
            c = rng.randint(-coeff_range, coeff_range)
            if c:
                coeffs[v] = Fraction(c)
        if not coeffs:
            continue
        rel = "=" if rng.random() < 0.2 else "=<"
        atoms.append(make_atomic(coeffs,
                                 Fraction(rng.randint(-bound_range,
                                                      bound_range)), rel))
    return constraint_of(atoms)


def _clause_constraint(rng: random.Random, vs: list[VarId],
                       max_atoms: int = 2) -> Constraint:
    atoms = []
    for _ in range(rng.randint(0, max_atoms)):
        if not vs:
            break
        form = rng.randint(0, 4)
        v = rng.choice(vs)
        c = Fraction(rng.randint(0, 3))
        if form == 0:
            atoms.append(make_atomic({v: Fraction(1)}, c, "=<"))
        elif form == 1:
            atoms.append(make_atomic({v: Fraction(-1)}, -c, "=<"))
        elif form == 2:
            atoms.append(make_atomic({v: Fraction(1)}, c, "="))
        else:
            w = rng.choice(vs)
            if w == v:
                continue
            rel = "=<" if form == 3 else "="
            atoms.append(make_atomic({v: Fraction(1), w: Fraction(-1)},
                                     c - 1, rel))
    return constraint_of(atoms)


def random_system(rng: random.Random, max_preds: int = 3,
                  max_arity: int = 2) -> ChcSystem:
    """A small random system: up to ``max_preds`` predicates of arity up to
    ``max_arity`` with 1-2 clauses each (facts are likely), plus one or two
    goal clauses.  All sorts are int and constants stay in 0..3 so the
    bounded least-model oracle is effective."""
    npreds = rng.randint(1, max_preds)
    preds = [f"p{i}" for i in range(npreds)]
    arities = {p: rng.randint(1, max_arity) for p in preds}
    clauses: list[Clause] = []
    for p in preds:
        for ci in range(rng.randint(1, 2)):
            nv = 0

            def fresh(n: int) -> list[VarId]:
                nonlocal nv
                out = [VarId(nv + i, INT) for i in range(n)]
                nv += n
                return out

            head = Atom(p, tuple(fresh(arities[p])))
            body = []
            if ci > 0 or rng.random() < 0.55:
                for _ in range(rng.randint(1, 2)):
                    q = rng.choice(preds)
                    body.append(Atom(q, tuple(fresh(arities[q]))))
            vs = [v for a in [head, *body] for v in a.args]
            clauses.append(normalize_clause(
                Clause(head, _clause_constraint(rng, vs), tuple(body))))
    for _ in range(rng.randint(1, 2)):
        nv = 0
        body = []
        for _ in range(rng.randint(1, 2)):
            q = rng.choice(preds)
            args = [VarId(nv + i, INT) for i in range(arities[q])]
            nv += arities[q]
            body.append(Atom(q, tuple(args)))
        vs = [v for a in body for v in a.args]
        clauses.append(normalize_clause(
            Clause(None, _clause_constraint(rng, vs), tuple(body))))
    sigs = {p: tuple(INT for _ in range(arities[p])) for p in preds}
    return ChcSystem(tuple(clauses), sigs, {})
