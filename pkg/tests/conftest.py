import json
from pathlib import Path

import pytest

from hornpair import lp, polyhedra
from hornpair.syntax import ChcSystem, Clause, Constraint, VarId, eq_atom

FIXTURES = Path(__file__).resolve().parent.parent / "fixtures"


@pytest.fixture(scope="session")
def fixtures_dir() -> Path:
    return FIXTURES


@pytest.fixture(scope="session")
def manifest() -> dict:
    return json.loads((FIXTURES / "manifest.json").read_text())


def constraint_equivalent(a: Constraint, b: Constraint) -> bool:
    return (lp.constraint_entails(a, b)
            and lp.constraint_entails(b, a))


def arg_projection(c: Clause):
    """Clause constraint projected onto the head/body argument variables
    (everything else is existential)."""
    from hornpair.syntax import FALSE

    args = list(c.head.args) if c.head is not None else []
    for a in c.body:
        args.extend(a.args)
    atoms = polyhedra.project(c.constraint.atoms, c.var_order(), args)
    if atoms == "false":
        return FALSE, args
    return Constraint(atoms), args


def clause_equivalent(c1: Clause, c2: Clause) -> bool:
    """Same clause up to variable renaming and constraint equivalence:
    heads and body atoms align positionally, and the argument projections
    of the constraints entail each other under that alignment."""
    if (c1.head is None) != (c2.head is None) or len(c1.body) != len(c2.body):
        return False
    if c1.head is not None and c1.head.arity != c2.head.arity:
        return False
    if any(a.arity != b.arity for a, b in zip(c1.body, c2.body)):
        return False
    p1, args1 = arg_projection(c1)
    p2, args2 = arg_projection(c2)
    offset = c1.max_index() + 1
    ren = {v: VarId(v.index + offset, v.sort) for v in c2.var_order()}
    eqs = Constraint(tuple(eq_atom(x, ren[y])
                           for x, y in zip(args1, args2)))
    p2r = p2.rename(ren)
    return (lp.constraint_entails(p1.conjoin(eqs), p2r)
            and lp.constraint_entails(p2r.conjoin(eqs), p1))


def goal_chain(system: ChcSystem) -> list[Clause]:
    """The goal clause plus the defining clauses of the predicates along
    its single-atom body chain (for fixture outputs with one goal)."""
    goal = next(c for c in system.clauses if c.is_goal)
    chain = [goal]
    seen = set()
    pred = goal.body[0].pred
    while pred not in seen:
        seen.add(pred)
        defs = [c for c in system.clauses
                if c.head is not None and c.head.pred == pred]
        chain.extend(defs)
        nxt = {a.pred for c in defs for a in c.body} - seen
        if not nxt:
            break
        pred = sorted(nxt)[0]
    return chain
