"""Unfold/fold transformation engine: abstraction-based predicate pairing
and specialization.

The strategy keeps a worklist of definition clauses (new predicates defined
by a constraint plus a conjunction of input-system atoms) and, per clause:
unfolds the body against the input system, deletes unsatisfiable results,
partitions the surviving bodies, and folds each part with an existing or
freshly introduced definition.  Definition constraints live in a chosen
abstract domain; when the same conjunction recurs along an ancestor chain
the new constraint is widened, which bounds the set of definitions and
forces termination.

Unfolding policy: atoms whose predicate is non-recursive in the input
system are unfolded (one round); only when every body atom is recursive is
each atom unfolded once.  This keeps recursive predicates in lockstep, so
paired loops stay aligned, while still executing base cases far enough for
constraint-based pruning to kill impossible combinations.

The returned system is the accumulated clause set restricted to clauses
that can contribute to a goal derivation: clauses mentioning predicates
with no surviving definition are dropped, and so are clauses unreachable
from the goals.
"""

from __future__ import annotations

import time
from collections import deque
from dataclasses import dataclass, field

from . import domains, lp
from .domains import AbstractValue, DomainTag
from .polyhedra import FM_CAP_DEFAULT
from .syntax import (
    Atom, ChcError, ChcSystem, Clause, Constraint, VarId, constraint_of,
    eq_atom, normalize_clause,
)


class StrategyError(ChcError):
    pass


class PassTimeout(StrategyError):
    def __init__(self, message: str = "transformation timed out"):
        super().__init__(message)


@dataclass(frozen=True)
class PartitionOp:
    """Body-splitting operator: ``singleton`` never joins atoms (clause
    specialization), ``pairing`` greedily joins pairs, preferring atoms
    with different provenance tags."""

    kind: str  # "singleton" | "pairing"

    @property
    def k(self) -> int:
        return 1 if self.kind == "singleton" else 2


SINGLETON = PartitionOp("singleton")
PAIRING = PartitionOp("pairing")


@dataclass
class Definition:
    """A node of the definition forest; goal clauses are the roots."""

    name: str | None                 # new predicate name; None for goals
    clause: Clause
    parent: "Definition | None" = None
    key: tuple[str, ...] | None = None
    value: AbstractValue | None = None

    @property
    def is_goal(self) -> bool:
        return self.name is None


@dataclass
class StrategyState:
    domain: DomainTag
    partition: PartitionOp
    program: ChcSystem
    groups: dict[str, int]
    recursive: frozenset[str]
    fm_cap: int = FM_CAP_DEFAULT
    sibling_cap: int = 8
    max_defs: int | None = None
    deadline: float | None = None
    incls: deque[Definition] = field(default_factory=deque)
    defs_by_key: dict[tuple[str, ...], list[Definition]] = field(
        default_factory=dict)
    definitions: list[Definition] = field(default_factory=list)
    transf: list[Clause] = field(default_factory=list)
    fold_trace: list[tuple[Clause, Clause]] = field(default_factory=list)
    reserved: set[str] = field(default_factory=set)
    counter: int = 0

    def fresh_name(self) -> str:
        while True:
            self.counter += 1
            name = f"newp{self.counter}"
            if name not in self.reserved:
                return name

    def check_deadline(self) -> None:
        if self.deadline is not None and time.monotonic() > self.deadline:
            raise PassTimeout()


def recursive_predicates(program: ChcSystem) -> frozenset[str]:
    """Predicates that can reach themselves in the call graph."""
    calls: dict[str, set[str]] = {}
    for c in program.clauses:
        if c.head is not None:
            calls.setdefault(c.head.pred, set()).update(
                a.pred for a in c.body)
    out = set()
    for p in calls:
        seen: set[str] = set()
        stack = list(calls.get(p, ()))
        while stack:
            q = stack.pop()
            if q == p:
                out.add(p)
                break
            if q not in seen:
                seen.add(q)
                stack.extend(calls.get(q, ()))
    return frozenset(out)


def derive_groups(system: ChcSystem) -> dict[str, int]:
    """Provenance tags for the pairing heuristic: explicit group directives
    win; otherwise predicates reachable from exactly one goal-atom position
    get that position as their tag."""
    if system.groups:
        return dict(system.groups)
    calls: dict[str, set[str]] = {}
    for c in system.clauses:
        if c.head is not None:
            calls.setdefault(c.head.pred, set()).update(
                a.pred for a in c.body)
    positions: dict[str, set[int]] = {}
    for goal in system.goal_clauses():
        for i, atom in enumerate(goal.body):
            seen = {atom.pred}
            stack = [atom.pred]
            while stack:
                q = stack.pop()
                for r in calls.get(q, ()):
                    if r not in seen:
                        seen.add(r)
                        stack.append(r)
            for p in seen:
                positions.setdefault(p, set()).add(i)
    return {p: next(iter(tags)) for p, tags in positions.items()
            if len(tags) == 1}


# ---------------------------------------------------------------------------
# unfolding


def unfold(clause: Clause, at: int, program: ChcSystem) -> list[Clause]:
    """One unfolding step: resolve the selected body atom against every
    program clause with a matching head.  Argument equalities are pushed
    into the constraint and results are re-normalized.  A predicate with no
    clauses yields the empty list (the atom can never be derived)."""
    atom = clause.body[at]
    results = []
    for pc in program.clauses_for(atom.pred):
        offset = clause.max_index() + 1
        renamed = pc.rename({v: VarId(v.index + offset, v.sort)
                             for v in pc.var_order()})
        eqs = [eq_atom(x, y) for x, y in zip(atom.args, renamed.head.args)]
        body = clause.body[:at] + renamed.body + clause.body[at + 1:]
        cons = clause.constraint.conjoin(Constraint(tuple(eqs)),
                                         renamed.constraint)
        results.append(normalize_clause(Clause(clause.head, cons, body)))
    return results


def _unfold_positions(clause: Clause, positions: list[int],
                      program: ChcSystem) -> list[Clause]:
    # cascade left to right; unfolding at a position shifts later ones
    results: list[tuple[Clause, int]] = [(clause, 0)]
    for pos in positions:
        step: list[tuple[Clause, int]] = []
        for c, shift in results:
            at = pos + shift
            for out in unfold(c, at, program):
                inserted = len(out.body) - (len(c.body) - 1)
                step.append((out, shift + inserted - 1))
        results = step
    return [c for c, _ in results]


def unfold_all(clause: Clause, program: ChcSystem) -> list[Clause]:
    """One simultaneous round: every body atom is unfolded exactly once."""
    return _unfold_positions(clause, list(range(len(clause.body))), program)


def unfold_round(clause: Clause, program: ChcSystem,
                 recursive: frozenset[str]) -> list[Clause]:
    """The strategy's unfolding phase: unfold the non-recursive body atoms
    when there are any, otherwise every atom once."""
    nonrec = [i for i, a in enumerate(clause.body)
              if a.pred not in recursive]
    positions = nonrec if nonrec else list(range(len(clause.body)))
    return _unfold_positions(clause, positions, program)


def delete_unsat(clauses: list[Clause]) -> list[Clause]:
    """Keep exactly the clauses with a satisfiable constraint (checked at
    full rational precision)."""
    return [c for c in clauses if lp.satisfiable(c.constraint)]


# ---------------------------------------------------------------------------
# partitioning and folding


def partition(op: PartitionOp, atoms: tuple[Atom, ...],
              groups: dict[str, int]) -> list[tuple[int, ...]]:
    """Split a body into subconjunctions (as index tuples).  Pairing walks
    left to right, joining each atom with the first later atom carrying a
    different provenance tag; leftovers pair positionally, a final odd atom
    stays alone."""
    if op.kind == "singleton":
        return [(i,) for i in range(len(atoms))]
    unpaired = list(range(len(atoms)))
    out: list[tuple[int, ...]] = []
    i = 0
    while i < len(unpaired):
        a = unpaired[i]
        mate = next((j for j in range(i + 1, len(unpaired))
                     if groups.get(atoms[unpaired[j]].pred)
                     != groups.get(atoms[a].pred)), None)
        if mate is None:
            i += 1
            continue
        out.append((a, unpaired[mate]))
        del unpaired[mate]
        del unpaired[i]
    while len(unpaired) >= 2:
        out.append((unpaired[0], unpaired[1]))
        del unpaired[:2]
    if unpaired:
        out.append((unpaired[0],))
    return sorted(out)


def _canonical_group(atoms: tuple[Atom, ...]) -> tuple[
        tuple[str, ...], tuple[Atom, ...], list[VarId]]:
    """Sort a subconjunction by predicate name (position breaks ties) and
    return the key, the sorted atoms, and their concatenated variables."""
    order = sorted(range(len(atoms)), key=lambda i: (atoms[i].pred, i))
    catoms = tuple(atoms[i] for i in order)
    key = tuple(a.pred for a in catoms)
    vs = [v for a in catoms for v in a.args]
    return key, catoms, vs


def define_and_fold(e: Clause, current: Definition,
                    st: StrategyState) -> Clause:
    """The definition-and-folding step for one unfolded clause: partition
    the body, abstract and project the clause constraint onto each part,
    reuse an entailing definition or introduce a new one (widened against
    the nearest matching ancestor), and return the folded clause."""
    if not e.body:
        return e
    dims = tuple(sorted(set(e.var_order()), key=lambda v: v.index))
    abstracted = domains.alpha(st.domain, e.constraint, dims, st.fm_cap)
    parts = partition(st.partition, e.body, st.groups)
    folded: list[Atom] = []
    for part in parts:
        key, catoms, part_vars = _canonical_group(
            tuple(e.body[i] for i in part))
        canon_vars = [VarId(i, v.sort) for i, v in enumerate(part_vars)]
        d_i = domains.rename_dims(
            domains.project(abstracted, part_vars, st.fm_cap), canon_vars)
        canon_map = dict(zip(part_vars, canon_vars))
        canon_atoms = tuple(a.rename(canon_map) for a in catoms)

        used: Definition | None = None
        for cand in st.defs_by_key.get(key, ()):
            if cand.key == key and domains.leq(d_i, cand.value):
                used = cand
                break
        if used is None:
            value = d_i
            anc = current
            while anc is not None:
                if not anc.is_goal and anc.key == key:
                    value = domains.widen(anc.value, d_i, st.fm_cap)
                    break
                anc = anc.parent
            else:
                siblings = st.defs_by_key.get(key, [])
                if len(siblings) >= st.sibling_cap:
                    value = domains.widen(siblings[0].value, d_i, st.fm_cap)
            name = st.fresh_name()
            dclause = Clause(Atom(name, tuple(canon_vars)),
                             domains.to_constraint(value), canon_atoms)
            used = Definition(name, dclause, parent=current, key=key,
                              value=value)
            st.defs_by_key.setdefault(key, []).append(used)
            st.definitions.append(used)
            st.incls.append(used)
            if st.max_defs is not None and len(st.definitions) > st.max_defs:
                raise StrategyError(
                    f"definition cap exceeded ({st.max_defs}); "
                    "widening failed to stabilize")
        folded.append(Atom(used.name, tuple(part_vars)))
    out = Clause(e.head, e.constraint, tuple(folded))
    st.fold_trace.append((e, out))
    return out


# ---------------------------------------------------------------------------
# the driver


def _prune(clauses: list[Clause]) -> list[Clause]:
    """Joint fixpoint of two sound clause removals: drop clauses whose body
    mentions a predicate with no defining clause, and drop non-goal clauses
    unreachable from the goals."""
    kept = list(clauses)
    while True:
        defined = {c.head.pred for c in kept if c.head is not None}
        filtered = [c for c in kept
                    if all(a.pred in defined for a in c.body)]
        reach: set[str] = set()
        stack = [a.pred for c in filtered if c.is_goal for a in c.body]
        while stack:
            p = stack.pop()
            if p in reach:
                continue
            reach.add(p)
            for c in filtered:
                if c.head is not None and c.head.pred == p:
                    stack.extend(a.pred for a in c.body)
        filtered = [c for c in filtered
                    if c.is_goal or c.head.pred in reach]
        if filtered == kept:
            return kept
        kept = filtered


@dataclass(frozen=True)
class StrategyResult:
    system: ChcSystem
    definitions: tuple[Definition, ...]
    fold_trace: tuple[tuple[Clause, Clause], ...]


def run_strategy(program: ChcSystem, goals: list[Clause],
                 domain: DomainTag, partition_op: PartitionOp,
                 groups: dict[str, int] | None = None,
                 fm_cap: int = FM_CAP_DEFAULT,
                 sibling_cap: int = 8,
                 max_defs: int | None = None,
                 timeout: float | None = None) -> ChcSystem:
    """Run the transformation to fixpoint and return the transformed
    system.  See :func:`run_strategy_result` for the detailed record."""
    return run_strategy_result(program, goals, domain, partition_op, groups,
                               fm_cap, sibling_cap, max_defs,
                               timeout).system


def run_strategy_result(program: ChcSystem, goals: list[Clause],
                        domain: DomainTag, partition_op: PartitionOp,
                        groups: dict[str, int] | None = None,
                        fm_cap: int = FM_CAP_DEFAULT,
                        sibling_cap: int = 8,
                        max_defs: int | None = None,
                        timeout: float | None = None) -> StrategyResult:
    program = ChcSystem(tuple(normalize_clause(c) for c in program.clauses),
                        dict(program.sigs), dict(program.groups))
    program_preds = {c.head.pred for c in program.clauses
                     if c.head is not None}
    for g in goals:
        if g.head is not None and g.head.pred in program_preds:
            raise StrategyError(
                f"goal head {g.head.pred} occurs in the program")
    if groups is None:
        groups = derive_groups(ChcSystem(
            tuple(goals) + program.clauses, dict(program.sigs),
            dict(program.groups)))
    reserved = set(program.sigs) | program_preds
    for g in goals:
        reserved.update(a.pred for a in g.body)
    st = StrategyState(
        domain=domain, partition=partition_op, program=program,
        groups=groups, recursive=recursive_predicates(program),
        fm_cap=fm_cap, sibling_cap=sibling_cap,
        max_defs=(max_defs if max_defs is not None
                  else max(64, 10 * len(program.clauses))),
        deadline=(time.monotonic() + timeout) if timeout else None,
        reserved=reserved)
    st.transf = [normalize_clause(c) for c in program.clauses]
    for g in goals:
        st.incls.append(Definition(None, normalize_clause(g)))

    while st.incls:
        st.check_deadline()
        cur = st.incls.popleft()
        unfolded = unfold_round(cur.clause, program, st.recursive)
        for e in delete_unsat(unfolded):
            st.check_deadline()
            st.transf.append(define_and_fold(e, cur, st))

    pruned = _prune(st.transf)
    sigs = dict(program.sigs)
    for d in st.definitions:
        sigs[d.name] = tuple(v.sort for v in d.clause.head.args)
    system = ChcSystem(tuple(pruned), sigs, dict(groups))
    return StrategyResult(system, tuple(st.definitions),
                          tuple(st.fold_trace))


def asp(program: ChcSystem, goals: list[Clause], tag: DomainTag,
        **kwargs) -> ChcSystem:
    """Clause specialization: singleton partition (no atoms are joined),
    constraints are still propagated through the chosen domain."""
    return run_strategy(program, goals, tag, SINGLETON, **kwargs)


def app(program: ChcSystem, goals: list[Clause], tag: DomainTag,
        **kwargs) -> ChcSystem:
    """Predicate pairing with abstraction: pairs of atoms (preferring
    different provenance) become new predicates constrained in the domain."""
    return run_strategy(program, goals, tag, PAIRING, **kwargs)


def transform_system(system: ChcSystem, strategy: str, tag: DomainTag,
                     **kwargs) -> ChcSystem:
    """Split a full system into program and goals and run asp or app."""
    program = ChcSystem(system.program_clauses(), dict(system.sigs),
                        dict(system.groups))
    goals = list(system.goal_clauses())
    fn = asp if strategy == "asp" else app
    return fn(program, goals, tag, **kwargs)
