"""Concrete syntax: accepted forms, rewrites, and diagnostics."""

from fractions import Fraction

import pytest

from hornpair.parser import ParseError, parse_clp
from hornpair.smtlib import emit_smtlib
from hornpair.syntax import EQ, LE, system_to_clp


def test_goal_clause_with_strict_bound():
    s = parse_clp("false :- X1 =< X2-1, s11(A,B,X,Y,X1,Y1), "
                  "s21(A,B,X,Y,X2,Y2).")
    (g,) = s.goal_clauses()
    assert g.head is None
    assert [a.pred for a in g.body] == ["s11", "s21"]
    # constraint contains X1 - X2 <= -1
    assert any(a.rel == LE and a.bound == -1 and len(a.coeffs) == 2
               for a in g.constraint.atoms)


def test_fact_with_true_body():
    s = parse_clp("p(X) :- true.")
    (c,) = s.clauses
    assert c.head.pred == "p" and not c.body and c.constraint.is_true


def test_strict_inequality_rewritten_for_ints():
    s = parse_clp("p(X,Y) :- X < Y, q(X,Y).\nq(X,Y) :- true.")
    c = s.clauses[0]
    atom = next(a for a in c.constraint.atoms if a.rel == LE)
    assert atom.bound == -1  # X - Y <= -1


def test_rational_and_scaled_literals():
    s = parse_clp("p(X) :- 2*X =< 3.")
    atom = s.clauses[0].constraint.atoms[0]
    # canonical form divides by the coefficient gcd
    assert [c for _, c in atom.coeffs] == [1]
    assert atom.bound == Fraction(3, 2)


def test_atom_argument_terms_become_equalities():
    s = parse_clp("p(X) :- q(X+1).\nq(X) :- true.")
    c = s.clauses[0]
    assert len(c.body[0].args) == 1
    assert any(a.rel == EQ for a in c.constraint.atoms)


def test_syntax_error_carries_position():
    with pytest.raises(ParseError) as err:
        parse_clp("p(X) :- X =< .")
    assert err.value.line == 1
    assert err.value.col > 0


def test_arity_mismatch_rejected():
    with pytest.raises(ParseError, match="arity"):
        parse_clp("p(X) :- true.\np(X,Y) :- true.")


def test_strict_inequality_real_rejected():
    with pytest.raises(ParseError, match="strict"):
        parse_clp("%% real p\np(X) :- X < 1.")


def test_real_sorts_emitted():
    s = parse_clp("%% real p\np(X) :- X =< 1.")
    assert s.sigs["p"] == ("real",)
    assert "(declare-fun p (Real) Bool)" in emit_smtlib(s)


def test_comments_and_anonymous_vars():
    s = parse_clp("% comment line\np(X, _) :- X =< 0.  % trailing\n")
    assert s.clauses[0].head.arity == 2


def test_group_directive_recorded():
    s = parse_clp("%% group a b\n%% group c\n"
                  "a(X) :- true.\nb(X) :- true.\nc(X) :- true.")
    assert s.groups == {"a": 0, "b": 0, "c": 1}


def test_directive_round_trip():
    s = parse_clp("%% group a b\na(X) :- true.\nb(X) :- true.")
    assert parse_clp(system_to_clp(s)).groups == s.groups


def test_nonlinear_product_rejected():
    with pytest.raises(ParseError, match="nonlinear"):
        parse_clp("p(X,Y) :- X*Y =< 1.")


def test_division_by_constant():
    s = parse_clp("p(X) :- X/2 =< 3.")
    atom = s.clauses[0].constraint.atoms[0]
    assert atom.bound == Fraction(6)
