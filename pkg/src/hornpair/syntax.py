"""Core syntax of constrained Horn clauses over linear rational arithmetic.

A clause is ``head :- constraint, atoms`` where the head is an atom or the
distinguished symbol ``false`` (goal clauses), the constraint is a finite
conjunction of linear atomic constraints with exact rational coefficients,
and the body atoms apply predicate symbols to variables.

After :func:`normalize_clause`, every atom (head included) has pairwise
distinct variables as arguments, distinct atoms share no variables, and all
relations between arguments live in the constraint part.  Variable indices
are dense starting at 0.  All values here are immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Iterator, Mapping, Sequence

INT = "int"
REAL = "real"

LE = "=<"
EQ = "="
NEQ = "=\\="  # parse-time only; removed by split_disequalities


class ChcError(Exception):
    """Base error for malformed systems or unsupported constructs."""


@dataclass(frozen=True, order=True)
class VarId:
    index: int
    sort: str = INT


@dataclass(frozen=True)
class AtomicConstraint:
    """A single linear relation ``sum(c_i * x_i)  rel  bound``.

    Coefficients are stored sorted by variable index with zeros dropped.
    Canonical form (via :func:`make_atomic`) scales coefficients to coprime
    integers; equality atoms additionally fix the sign of the leading
    coefficient.
    """

    coeffs: tuple[tuple[VarId, Fraction], ...]
    bound: Fraction
    rel: str = LE

    def vars(self) -> tuple[VarId, ...]:
        return tuple(v for v, _ in self.coeffs)

    def coeff_map(self) -> dict[VarId, Fraction]:
        return dict(self.coeffs)

    @property
    def is_false_literal(self) -> bool:
        if self.coeffs:
            return False
        if self.rel == LE:
            return self.bound < 0
        if self.rel == EQ:
            return self.bound != 0
        return self.bound == 0  # NEQ: 0 != 0

    def evaluate(self, values: Mapping[VarId, Fraction | int]) -> bool:
        total = sum((c * values[v] for v, c in self.coeffs), Fraction(0))
        if self.rel == LE:
            return total <= self.bound
        if self.rel == EQ:
            return total == self.bound
        return total != self.bound

    def rename(self, mapping: Mapping[VarId, VarId]) -> "AtomicConstraint":
        items = sorted(((mapping.get(v, v), c) for v, c in self.coeffs),
                       key=lambda it: it[0].index)
        return AtomicConstraint(tuple(items), self.bound, self.rel)


FALSE_ATOM = AtomicConstraint((), Fraction(-1), LE)


def make_atomic(coeffs: Mapping[VarId, Fraction | int],
                bound: Fraction | int,
                rel: str = LE) -> AtomicConstraint | bool:
    """Canonicalize one atomic constraint.

    Returns True/False for constraints with no variables (trivially decided),
    otherwise the canonical AtomicConstraint: integer coprime coefficients,
    sorted by variable; equalities get a positive leading coefficient.
    """
    items = sorted(((v, Fraction(c)) for v, c in coeffs.items() if c != 0),
                   key=lambda it: it[0].index)
    b = Fraction(bound)
    if not items:
        if rel == LE:
            return b >= 0
        if rel == EQ:
            return b == 0
        return b != 0
    scale = math.lcm(*(c.denominator for _, c in items))
    ints = [int(c * scale) for _, c in items]
    g = math.gcd(*ints)
    factor = Fraction(scale, g)
    coeffs2 = [(v, c * factor) for v, c in items]
    b2 = b * factor
    if rel in (EQ, NEQ) and coeffs2[0][1] < 0:
        coeffs2 = [(v, -c) for v, c in coeffs2]
        b2 = -b2
    return AtomicConstraint(tuple(coeffs2), b2, rel)


def atomic_sort_key(a: AtomicConstraint):
    return (tuple((v.index, c) for v, c in a.coeffs), a.rel, a.bound)


@dataclass(frozen=True)
class Constraint:
    """A conjunction of atomic constraints; ``()`` is true."""

    atoms: tuple[AtomicConstraint, ...] = ()

    @property
    def is_true(self) -> bool:
        return not self.atoms

    @property
    def is_false_literal(self) -> bool:
        return any(a.is_false_literal for a in self.atoms)

    def vars(self) -> list[VarId]:
        seen: dict[VarId, None] = {}
        for a in self.atoms:
            for v, _ in a.coeffs:
                seen.setdefault(v)
        return list(seen)

    def conjoin(self, *others: "Constraint") -> "Constraint":
        atoms = list(self.atoms)
        for o in others:
            atoms.extend(o.atoms)
        return constraint_of(atoms)

    def rename(self, mapping: Mapping[VarId, VarId]) -> "Constraint":
        return Constraint(tuple(a.rename(mapping) for a in self.atoms))

    def evaluate(self, values: Mapping[VarId, Fraction | int]) -> bool:
        return all(a.evaluate(values) for a in self.atoms)


TRUE = Constraint()
FALSE = Constraint((FALSE_ATOM,))


def constraint_of(atoms: Iterable[AtomicConstraint | bool]) -> Constraint:
    """Build a constraint, dropping trivially true atoms and collapsing to
    the canonical false when any atom is trivially false."""
    out: list[AtomicConstraint] = []
    for a in atoms:
        if a is True:
            continue
        if a is False:
            return FALSE
        assert isinstance(a, AtomicConstraint)
        if a.is_false_literal:
            return FALSE
        if not a.coeffs:
            # trivially decided non-canonical literal
            if a.evaluate({}):
                continue
            return FALSE
        out.append(a)
    return Constraint(tuple(out))


def eq_atom(x: VarId, y: VarId) -> AtomicConstraint:
    made = make_atomic({x: Fraction(1), y: Fraction(-1)}, 0, EQ)
    assert isinstance(made, AtomicConstraint)
    return made


@dataclass(frozen=True)
class Atom:
    pred: str
    args: tuple[VarId, ...] = ()

    @property
    def arity(self) -> int:
        return len(self.args)

    def rename(self, mapping: Mapping[VarId, VarId]) -> "Atom":
        return Atom(self.pred, tuple(mapping.get(v, v) for v in self.args))


@dataclass(frozen=True)
class Clause:
    """``head :- constraint, body``; head None means the goal head false."""

    head: Atom | None
    constraint: Constraint = TRUE
    body: tuple[Atom, ...] = ()

    @property
    def is_goal(self) -> bool:
        return self.head is None

    def var_order(self) -> list[VarId]:
        """All clause variables, ordered by first occurrence in head args,
        then body atom args, then constraint atoms."""
        seen: dict[VarId, None] = {}
        if self.head is not None:
            for v in self.head.args:
                seen.setdefault(v)
        for atom in self.body:
            for v in atom.args:
                seen.setdefault(v)
        for a in self.constraint.atoms:
            for v, _ in a.coeffs:
                seen.setdefault(v)
        return list(seen)

    def rename(self, mapping: Mapping[VarId, VarId]) -> "Clause":
        head = self.head.rename(mapping) if self.head is not None else None
        return Clause(head, self.constraint.rename(mapping),
                      tuple(a.rename(mapping) for a in self.body))

    def max_index(self) -> int:
        vs = self.var_order()
        return max((v.index for v in vs), default=-1)


@dataclass(frozen=True)
class ChcSystem:
    """A set of clauses with a predicate signature table.

    ``sigs`` maps each predicate to its argument sorts.  ``groups`` carries
    optional provenance tags (predicate -> source program index) that steer
    the pairing heuristic of the transformation engine.
    """

    clauses: tuple[Clause, ...]
    sigs: dict[str, tuple[str, ...]] = field(default_factory=dict)
    groups: dict[str, int] = field(default_factory=dict)

    def goal_clauses(self) -> tuple[Clause, ...]:
        return tuple(c for c in self.clauses if c.is_goal)

    def program_clauses(self) -> tuple[Clause, ...]:
        return tuple(c for c in self.clauses if not c.is_goal)

    def clauses_for(self, pred: str) -> tuple[Clause, ...]:
        return tuple(c for c in self.clauses
                     if c.head is not None and c.head.pred == pred)

    def validate(self) -> None:
        for c in self.clauses:
            for atom in ((c.head,) if c.head else ()) + c.body:
                if atom.pred not in self.sigs:
                    raise ChcError(f"undeclared predicate {atom.pred}")
                if len(self.sigs[atom.pred]) != atom.arity:
                    raise ChcError(
                        f"arity mismatch for {atom.pred}: "
                        f"{atom.arity} vs {len(self.sigs[atom.pred])}")


def normalize_clause(clause: Clause) -> Clause:
    """Normalize a clause: every atom gets pairwise distinct variables,
    atoms become variable-disjoint (head treated like an atom), and the
    induced equalities are conjoined to the constraint.  Variable indices are
    renumbered densely from 0 in order of first occurrence (head, body
    atoms, constraint).  Idempotent; preserves the clause's models."""
    fresh = clause.max_index() + 1
    used: set[VarId] = set()
    eqs: list[AtomicConstraint] = []

    def freshen(atom: Atom) -> Atom:
        nonlocal fresh
        args: list[VarId] = []
        for v in atom.args:
            if v in used:
                nv = VarId(fresh, v.sort)
                fresh += 1
                eqs.append(eq_atom(v, nv))
                args.append(nv)
                used.add(nv)
            else:
                used.add(v)
                args.append(v)
        return Atom(atom.pred, tuple(args))

    head = freshen(clause.head) if clause.head is not None else None
    body = tuple(freshen(a) for a in clause.body)
    constraint = clause.constraint.conjoin(Constraint(tuple(eqs)))
    out = Clause(head, constraint, body)

    mapping: dict[VarId, VarId] = {}
    for v in out.var_order():
        mapping[v] = VarId(len(mapping), v.sort)
    return out.rename(mapping)


def normalize_system(system: ChcSystem) -> ChcSystem:
    return ChcSystem(tuple(normalize_clause(c) for c in system.clauses),
                     dict(system.sigs), dict(system.groups))


def _strict_int_bound(b: Fraction) -> Fraction:
    """Largest integer-valued upper bound below b (for integer-valued forms):
    f < b  over integers  <=>  f <= ceil(b) - 1."""
    return Fraction(math.ceil(b) - 1)


def split_disequalities(system: ChcSystem) -> ChcSystem:
    """Replace every disequality in a goal-clause constraint by the two
    integer sign cases: ``f != b`` becomes one clause with ``f <= b-1`` and
    one with ``f >= b+1``.  Goals with several disequalities produce the
    product of the splits; all other clauses pass through unchanged.

    Disequalities in non-goal clauses or over real-sorted variables are
    rejected."""
    out: list[Clause] = []
    for clause in system.clauses:
        neqs = [a for a in clause.constraint.atoms if a.rel == NEQ]
        if not neqs:
            out.append(clause)
            continue
        if not clause.is_goal:
            raise ChcError("disequality in a non-goal clause is unsupported")
        for a in neqs:
            if any(v.sort == REAL for v, _ in a.coeffs):
                raise ChcError("disequality over real-sorted variables "
                               "is unsupported")
        rest = tuple(a for a in clause.constraint.atoms if a.rel != NEQ)
        variants: list[list[AtomicConstraint | bool]] = [list(rest)]
        for a in neqs:
            lo = make_atomic(dict(a.coeffs), _strict_int_bound(a.bound), LE)
            hi = make_atomic({v: -c for v, c in a.coeffs},
                             _strict_int_bound(-a.bound), LE)
            variants = [base + [branch] for base in variants
                        for branch in (lo, hi)]
        for atoms in variants:
            cons = constraint_of(atoms)
            if not cons.is_false_literal:
                out.append(Clause(clause.head, cons, clause.body))
    return ChcSystem(tuple(out), dict(system.sigs), dict(system.groups))


def constrained_facts(system: ChcSystem) -> list[Clause]:
    """Clauses with a non-false head, no body atoms, and a satisfiable
    constraint.  Their absence makes the all-false interpretation a model of
    the non-goal clauses."""
    from . import lp

    return [c for c in system.clauses
            if c.head is not None and not c.body
            and lp.satisfiable(c.constraint)]


# ---------------------------------------------------------------------------
# concrete syntax printing


def var_name(index: int) -> str:
    letter = chr(ord("A") + index % 26)
    suffix = index // 26
    return letter if suffix == 0 else f"{letter}{suffix}"


def _render_side(terms: Sequence[tuple[VarId, Fraction]],
                 const: Fraction) -> str:
    parts: list[str] = []
    for v, c in terms:
        name = var_name(v.index)
        mag = abs(c)
        txt = name if mag == 1 else f"{mag}*{name}"
        if not parts:
            parts.append(txt if c > 0 else f"-{txt}")
        else:
            parts.append(f"+{txt}" if c > 0 else f"-{txt}")
    if const != 0 or not parts:
        if not parts:
            parts.append(str(const))
        else:
            parts.append(f"+{const}" if const > 0 else str(const))
    return "".join(parts)


def atomic_to_clp(a: AtomicConstraint) -> str:
    lhs = [(v, c) for v, c in a.coeffs if c > 0]
    rhs = [(v, -c) for v, c in a.coeffs if c < 0]
    return f"{_render_side(lhs, Fraction(0)) if lhs else '0'} {a.rel} " \
           f"{_render_side(rhs, a.bound)}"


def atom_to_clp(atom: Atom) -> str:
    if not atom.args:
        return atom.pred
    return f"{atom.pred}({','.join(var_name(v.index) for v in atom.args)})"


def clause_to_clp(clause: Clause) -> str:
    head = "false" if clause.head is None else atom_to_clp(clause.head)
    items = [atomic_to_clp(a) for a in clause.constraint.atoms]
    items.extend(atom_to_clp(a) for a in clause.body)
    if not items:
        items = ["true"]
    return f"{head} :- {', '.join(items)}."


def system_to_clp(system: ChcSystem) -> str:
    """Deterministic concrete-syntax rendering; parses back to an equal
    system (up to variable renaming) when the input is normalized."""
    lines: list[str] = []
    real_preds = sorted(p for p, sorts in system.sigs.items()
                        if any(s == REAL for s in sorts))
    if real_preds:
        lines.append("%% real " + " ".join(real_preds))
    if system.groups:
        by_tag: dict[int, list[str]] = {}
        for pred, tag in system.groups.items():
            by_tag.setdefault(tag, []).append(pred)
        for tag in sorted(by_tag):
            lines.append("%% group " + " ".join(sorted(by_tag[tag])))
    lines.extend(clause_to_clp(c) for c in system.clauses)
    return "\n".join(lines) + "\n"
