"""Unfolding, clause deletion, partitioning, folding, and the strategy."""

import random
from fractions import Fraction

import pytest

from conftest import clause_equivalent, constraint_equivalent

from hornpair import bounded, domains, engine, lp
from hornpair.domains import DomainTag, alpha, to_constraint
from hornpair.engine import (
    PAIRING, SINGLETON, Definition, PassTimeout, StrategyError,
    StrategyState, define_and_fold, delete_unsat, derive_groups, partition,
    recursive_predicates, run_strategy_result, transform_system, unfold,
    unfold_all, unfold_round,
)
from hornpair.generator import random_system
from hornpair.parser import parse_clp
from hornpair.syntax import (
    Atom, ChcSystem, Clause, Constraint, VarId, constraint_of, make_atomic,
)

PIPE = """
false :- X1 =< X2-1, s11(A,B,X,Y,X1,Y1), s21(A,B,X,Y,X2,Y2).
s11(A,B,X,Y,X2,Y2) :- s12(A,B,X,Y,A2,B2,X2,Y2).
s12(A,B,X,Y,A2,B2,X2,Y2) :- A =< B-1, X1 = A+X, Y1 = Y+X1, A1 = A+1, s12(A1,B,X1,Y1,A2,B2,X2,Y2).
s12(A,B,X,Y,A,B,X,Y) :- A >= B.
s21(A,B,X,Y,X2,Y2) :- s22(A,B,X,Y,A2,B2,X2,Y2).
s22(A,B,X,Y,A2,B2,X2,Y2) :- A =< B-1, X1 = X+A, s23(A,B,X1,Y,A2,B2,X2,Y2).
s22(A,B,X,Y,A,B,X,Y) :- A >= B.
s23(A,B,X,Y,A2,B,X,Y2) :- A >= B-1, Y2 = Y+X, A2 = A+1.
s23(A,B,X,Y,A2,B2,X2,Y2) :- A =< B-2, Y1 = Y+X, A1 = A+1, X1 = X+A1, s23(A1,B,X1,Y1,A2,B2,X2,Y2).
"""


def pipe_system():
    return parse_clp(PIPE)


def pipe_parts():
    s = pipe_system()
    return (ChcSystem(s.program_clauses(), dict(s.sigs), dict(s.groups)),
            list(s.goal_clauses()))


def test_recursive_predicates():
    program, _ = pipe_parts()
    assert recursive_predicates(program) == {"s12", "s23"}


def test_derive_groups_by_goal_position():
    s = pipe_system()
    groups = derive_groups(s)
    assert groups == {"s11": 0, "s12": 0, "s21": 1, "s22": 1, "s23": 1}


def test_unfold_goal_single_definitions():
    program, goals = pipe_parts()
    (goal,) = goals
    out = unfold(goal, 0, program)
    assert len(out) == 1
    assert [a.pred for a in out[0].body] == ["s12", "s21"]


def test_unfold_undefined_predicate_empty():
    program = parse_clp("q(X) :- true.")
    clause = parse_clp("false :- p(X).\np(X) :- true.").goal_clauses()[0]
    lonely = ChcSystem(program.clauses, dict(program.sigs))
    assert unfold(clause, 0, lonely) == []


def test_unfold_single_clause_substitution():
    program = parse_clp("q(Y) :- Y =< 0.")
    clause = parse_clp("p(X) :- q(X).\nq(Y) :- Y =< 0.").clauses[0]
    (out,) = unfold(clause, 0, program)
    assert not out.body
    # X = Y, Y <= 0 collapses to the head variable being bounded
    assert lp.constraint_entails(
        out.constraint,
        constraint_of([make_atomic({out.head.args[0]: Fraction(1)}, 0)]))


def test_unfold_all_product():
    program = parse_clp("a(X) :- X =< 1.\na(X) :- X >= 5.\n"
                        "b(X) :- X =< 2.\nb(X) :- X >= 6.\nb(X) :- X = 4.")
    clause = parse_clp("false :- a(X), b(Y).\na(X) :- true.\nb(X) :- true."
                       ).goal_clauses()[0]
    out = unfold_all(clause, program)
    assert len(out) == 2 * 3


def test_unfold_all_empty_body_identity():
    clause = Clause(None, Constraint(), ())
    program = parse_clp("p(X) :- true.")
    assert unfold_all(clause, program) == [clause]


def test_unfold_all_on_pairing_definition():
    # one simultaneous round on the (s12, s22) definition produces the four
    # base/recursive combinations, including the recursive {s12, s23} one
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.POLY, PAIRING)
    d1 = res.definitions[0]
    assert d1.key == ("s12", "s22")
    out = unfold_all(d1.clause, program)
    preds = sorted(tuple(sorted(a.pred for a in c.body)) for c in out)
    assert preds == [(), ("s12",), ("s12", "s23"), ("s23",)]
    survivors = delete_unsat(out)
    assert [tuple(sorted(a.pred for a in c.body)) for c in survivors] \
        == [("s12", "s23")]


def test_strategy_unfold_round_skips_recursive_atoms():
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.POLY, PAIRING)
    d1 = res.definitions[0]
    out = unfold_round(d1.clause, program, recursive_predicates(program))
    preds = sorted(tuple(sorted(a.pred for a in c.body)) for c in out)
    # only the non-recursive s22 atom is unfolded
    assert preds == [("s12",), ("s12", "s23")]


def test_delete_unsat_examples():
    keep = parse_clp("p(X) :- true.").clauses[0]
    drop = parse_clp("p(X) :- X =< 0, X >= 1.").clauses[0]
    assert delete_unsat([keep, drop]) == [keep]


def test_delete_unsat_pipeline_exit_entry_combination():
    # pairing the first loop's exit (A >= B) with the second loop's entry
    # (A <= B-1) under shared A, B is unsatisfiable and must be deleted
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.POLY, PAIRING)
    d1 = res.definitions[0]
    out = unfold_all(d1.clause, program)
    gone = [c for c in out if c not in delete_unsat(out)]
    assert len(gone) == 3


def test_partition_singleton():
    atoms = tuple(Atom(p, ()) for p in ("a", "b", "c"))
    assert partition(SINGLETON, atoms, {}) == [(0,), (1,), (2,)]


def test_partition_pairing_prefers_different_groups():
    atoms = (Atom("s12", ()), Atom("s22", ()))
    got = partition(PAIRING, atoms, {"s12": 0, "s22": 1})
    assert got == [(0, 1)]


def test_partition_pairing_same_group_positional():
    atoms = tuple(Atom(p, ()) for p in ("a", "b", "c"))
    got = partition(PAIRING, atoms, {"a": 0, "b": 0, "c": 0})
    assert got == [(0, 1), (2,)]


def test_partition_pairing_mixed():
    atoms = tuple(Atom(p, ()) for p in ("a", "b", "c", "d"))
    got = partition(PAIRING, atoms, {"a": 0, "b": 0, "c": 1, "d": 1})
    assert got == [(0, 2), (1, 3)]


def _mini_state(domain, partition_op, program, groups=None):
    return StrategyState(
        domain=domain, partition=partition_op, program=program,
        groups=groups or {}, recursive=recursive_predicates(program))


def test_define_and_fold_reuses_entailing_definition():
    program = parse_clp("p(X) :- true.")
    st = _mini_state(DomainTag.BOX, SINGLETON, program)
    x = VarId(0)
    existing = Definition(
        "d1", parse_clp("d1(X) :- X >= 0, p(X).").clauses[0],
        key=("p",), value=alpha(DomainTag.BOX,
                                constraint_of([make_atomic({x: Fraction(-1)},
                                                           0)]), (x,)))
    st.defs_by_key[("p",)] = [existing]
    st.definitions.append(existing)
    clause = parse_clp("q(X) :- X >= 1, p(X).\np(X) :- true.").clauses[0]
    root = Definition(None, clause)
    folded = define_and_fold(clause, root, st)
    assert [a.pred for a in folded.body] == ["d1"]
    assert len(st.definitions) == 1  # nothing new introduced
    assert not st.incls


def test_define_and_fold_widens_against_ancestor():
    # same conjunction met on the ancestor chain with Box [0,1] then [0,2]
    # widens to x >= 0
    program = parse_clp("p(X) :- true.")
    st = _mini_state(DomainTag.BOX, SINGLETON, program)
    x = VarId(0)
    box01 = alpha(DomainTag.BOX, constraint_of(
        [make_atomic({x: Fraction(-1)}, 0), make_atomic({x: Fraction(1)}, 1)]
    ), (x,))
    ancestor = Definition("d1", parse_clp(
        "d1(X) :- X >= 0, X =< 1, p(X).").clauses[0],
        key=("p",), value=box01)
    st.defs_by_key[("p",)] = [ancestor]
    st.definitions.append(ancestor)
    clause = parse_clp(
        "d1(X) :- X >= 0, X =< 2, p(X).\np(X) :- true.").clauses[0]
    folded = define_and_fold(clause, ancestor, st)
    assert len(st.definitions) == 2
    new = st.definitions[-1]
    assert new.value.box == ((Fraction(0), None),)
    assert folded.body[0].pred == new.name


def test_run_strategy_rejects_goal_head_in_program():
    program = parse_clp("p(X) :- true.")
    bad_goal = program.clauses[0]
    with pytest.raises(StrategyError):
        engine.run_strategy(program, [bad_goal], DomainTag.POLY, SINGLETON)


def test_pipeline_poly_definition_constraints():
    # the two live definitions carry exactly the published relations:
    # equal inputs with G <= K-1, and the loop alignment
    # {G <= O-1, A <= B-1, K = A+C}
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.POLY, PAIRING)
    out_preds = {c.head.pred for c in res.system.clauses if c.head}
    live = [d for d in res.definitions if d.name in out_preds]
    assert [d.key for d in live] == [("s12", "s22"), ("s12", "s23")]
    v = [VarId(i) for i in range(16)]

    def deq(i, j):
        return make_atomic({v[i]: Fraction(1), v[j]: Fraction(-1)}, 0, "=")

    exp1 = constraint_of([deq(0, 8), deq(1, 9), deq(2, 10), deq(3, 11),
                          make_atomic({v[6]: Fraction(1),
                                       v[14]: Fraction(-1)}, -1)])
    exp2 = constraint_of([deq(0, 8), deq(1, 9), deq(3, 11),
                          make_atomic({v[10]: Fraction(1), v[0]: Fraction(-1),
                                       v[2]: Fraction(-1)}, 0, "="),
                          make_atomic({v[6]: Fraction(1),
                                       v[14]: Fraction(-1)}, -1),
                          make_atomic({v[0]: Fraction(1),
                                       v[1]: Fraction(-1)}, -1)])
    for d, exp in zip(live, (exp1, exp2)):
        assert constraint_equivalent(to_constraint(d.value), exp)


def test_asp_definitions_are_singletons():
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.OCT, SINGLETON)
    assert all(len(d.clause.body) == 1 for d in res.definitions)


def test_app_universe_definitions_unconstrained():
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.UNIVERSE, PAIRING)
    assert all(d.clause.constraint.is_true for d in res.definitions)


def test_fold_consistency_trace():
    # unfolding each folded clause's new atoms back to their definition
    # bodies recovers a clause implied by the pre-fold clause
    program, goals = pipe_parts()
    res = run_strategy_result(program, goals, DomainTag.POLY, PAIRING)
    by_name = {d.name: d for d in res.definitions}
    for pre, post in res.fold_trace:
        assert pre.constraint == post.constraint
        pre_preds = sorted(a.pred for a in pre.body)
        expanded = sorted(a.pred for f in post.body
                          for a in by_name[f.pred].clause.body)
        assert pre_preds == expanded
        for f in post.body:
            d = by_name[f.pred]
            ren = dict(zip(d.clause.head.args, f.args))
            assert lp.constraint_entails(pre.constraint,
                                         d.clause.constraint.rename(ren))


def test_no_dangling_predicates_in_output():
    rng = random.Random(99)
    for _ in range(15):
        s = random_system(rng)
        for strat in ("asp", "app"):
            out = transform_system(s, strat, DomainTag.BDS)
            defined = {c.head.pred for c in out.clauses if c.head}
            for c in out.clauses:
                assert all(a.pred in defined for a in c.body)


def test_definition_constraints_fixed_by_own_alpha():
    program, goals = pipe_parts()
    for tag in (DomainTag.BOX, DomainTag.BDS, DomainTag.OCT, DomainTag.POLY):
        res = run_strategy_result(program, goals, tag, PAIRING)
        for d in res.definitions:
            back = alpha(tag, to_constraint(d.value), d.value.dims)
            assert domains.equivalent(back, d.value)


def test_strategy_timeout_raises():
    program, goals = pipe_parts()
    with pytest.raises(PassTimeout):
        engine.run_strategy(program, goals, DomainTag.POLY, PAIRING,
                            timeout=1e-9)


def test_definition_cap_guard():
    program, goals = pipe_parts()
    with pytest.raises(StrategyError, match="definition cap"):
        engine.run_strategy(program, goals, DomainTag.POLY, PAIRING,
                            max_defs=1)


def test_transform_deterministic():
    from hornpair.syntax import system_to_clp

    s = pipe_system()
    a = system_to_clp(transform_system(s, "app", DomainTag.POLY))
    b = system_to_clp(transform_system(s, "app", DomainTag.POLY))
    assert a == b
