"""Bounded least-model semantics over a finite integer range.

Evaluates a clause system by fixpoint: predicate facts are tuples over
``lo..hi`` and a clause fires for every in-range assignment of its
variables that satisfies the constraint with all body atoms already
derived.  Two things keep transformed systems with wide joins tractable:
evaluation is semi-naive (each combination of body tuples is considered
once), and every clause is split into connected components of variables,
where only components feeding the head are enumerated and the rest are
checked for a single satisfying assignment.  ``derives_false`` reports
whether some goal clause can fire; this is the independent oracle used to
cross-check that transformations preserve satisfiability.
"""

from __future__ import annotations

from fractions import Fraction

from .syntax import ChcSystem, Clause, EQ, LE

Row = tuple[int, ...]
Facts = dict[str, set[Row]]


class _Component:
    __slots__ = ("atoms", "catoms", "vars")

    def __init__(self) -> None:
        self.atoms: list[int] = []
        self.catoms: list[int] = []
        self.vars: list[int] = []


class _ClauseEval:
    """Precompiled clause: dense variable slots, integer coefficients,
    per-variable constraint indices, and the component split."""

    def __init__(self, clause: Clause):
        vs = clause.var_order()
        index = {v: i for i, v in enumerate(vs)}
        self.nvars = len(vs)
        self.catoms: list[tuple[list[tuple[int, int | Fraction]],
                                Fraction, str]] = []
        for a in clause.constraint.atoms:
            items = [(index[v], int(c) if c.denominator == 1 else c)
                     for v, c in a.coeffs]
            self.catoms.append((items, a.bound, a.rel))
        self.touch: list[list[int]] = [[] for _ in range(self.nvars)]
        for ci, (items, _, _) in enumerate(self.catoms):
            for vi, _ in items:
                self.touch[vi].append(ci)
        self.body = [(a.pred, [index[v] for v in a.args])
                     for a in clause.body]
        self.head = (None if clause.head is None
                     else (clause.head.pred,
                           [index[v] for v in clause.head.args]))

        parent = list(range(self.nvars))

        def find(x: int) -> int:
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        def union(group: list[int]) -> None:
            for a, b in zip(group, group[1:]):
                parent[find(a)] = find(b)

        for items, _, _ in self.catoms:
            union([vi for vi, _ in items])
        for _, args in self.body:
            union(args)

        comps: dict[int, _Component] = {}
        for vi in range(self.nvars):
            comps.setdefault(find(vi), _Component()).vars.append(vi)
        for bi, (_, args) in enumerate(self.body):
            if args:
                comps[find(args[0])].atoms.append(bi)
            else:
                solo = _Component()
                solo.atoms.append(bi)
                comps[-1 - bi] = solo
        for ci, (items, _, _) in enumerate(self.catoms):
            comps[find(items[0][0])].catoms.append(ci)

        head_vars = set(self.head[1]) if self.head else set()
        self.primary = [c for c in comps.values()
                        if any(v in head_vars for v in c.vars)]
        self.side = [c for c in comps.values()
                     if not any(v in head_vars for v in c.vars)]

    def _atom_ok(self, ci: int, values: list[int | None],
                 lo: int, hi: int) -> bool:
        items, bound, rel = self.catoms[ci]
        mini = maxi = 0
        ground = True
        for vi, c in items:
            x = values[vi]
            if x is None:
                ground = False
                if c > 0:
                    mini += c * lo
                    maxi += c * hi
                else:
                    mini += c * hi
                    maxi += c * lo
            else:
                t = c * x
                mini += t
                maxi += t
        if rel == LE:
            return mini <= bound
        if rel == EQ:
            return mini <= bound <= maxi
        return not ground or mini != bound  # disequality

    def _component_solutions(self, comp: _Component,
                             tables: list[list[Row]],
                             values: list[int | None], lo: int, hi: int):
        """All assignments of one component's variables (in place)."""

        def ok_after(vi: int) -> bool:
            return all(self._atom_ok(ci, values, lo, hi)
                       for ci in self.touch[vi])

        order = sorted(comp.atoms, key=lambda i: len(tables[i]))

        def join(k: int):
            if k == len(order):
                free = [vi for vi in comp.vars if values[vi] is None]
                yield from assign(free, 0)
                return
            _, args = self.body[order[k]]
            for row in tables[order[k]]:
                undo: list[int] = []
                ok = True
                for vi, x in zip(args, row):
                    cur = values[vi]
                    if cur is None:
                        values[vi] = x
                        undo.append(vi)
                        if not ok_after(vi):
                            ok = False
                            break
                    elif cur != x:
                        ok = False
                        break
                if ok:
                    yield from join(k + 1)
                for vi in undo:
                    values[vi] = None

        def assign(free: list[int], k: int):
            if k == len(free):
                yield True
                return
            vi = free[k]
            for x in range(lo, hi + 1):
                values[vi] = x
                if ok_after(vi):
                    yield from assign(free, k + 1)
            values[vi] = None

        yield from join(0)

    def solutions(self, tables: list[list[Row]], lo: int, hi: int):
        """Yield value vectors covering the head variables.  Components not
        feeding the head are only checked for one satisfying assignment;
        their slots are meaningless in the yielded vector."""
        values: list[int | None] = [None] * self.nvars
        for comp in self.side:
            if not next(self._component_solutions(comp, tables, values,
                                                  lo, hi), False):
                return
            for vi in comp.vars:
                values[vi] = None

        def product(k: int):
            if k == len(self.primary):
                yield values
                return
            for _ in self._component_solutions(self.primary[k], tables,
                                               values, lo, hi):
                yield from product(k + 1)

        yield from product(0)


def _tables_for(ev: _ClauseEval, pos: int, old: Facts, delta: Facts,
                full: Facts) -> list[list[Row]] | None:
    """Semi-naive table selection: atom `pos` reads the delta, earlier
    atoms the pre-round facts, later atoms everything."""
    tables = []
    for i, (pred, _) in enumerate(ev.body):
        src = delta if i == pos else (old if i < pos else full)
        rows = src.get(pred)
        if not rows:
            return None
        tables.append(list(rows))
    return tables


def least_model(system: ChcSystem, lo: int = 0, hi: int = 3) -> Facts:
    evals = [_ClauseEval(c) for c in system.clauses if c.head is not None]
    full: Facts = {}
    delta: Facts = {}
    for ev in evals:
        if not ev.body:
            pred, args = ev.head
            for sol in ev.solutions([], lo, hi):
                row = tuple(sol[i] for i in args)
                if row not in full.setdefault(pred, set()):
                    full[pred].add(row)
                    delta.setdefault(pred, set()).add(row)
    while delta:
        old = {p: rows - delta.get(p, set()) for p, rows in full.items()}
        new_delta: Facts = {}
        for ev in evals:
            if not ev.body:
                continue
            pred, args = ev.head
            seen = full.setdefault(pred, set())
            for pos in range(len(ev.body)):
                tables = _tables_for(ev, pos, old, delta, full)
                if tables is None:
                    continue
                for sol in ev.solutions(tables, lo, hi):
                    row = tuple(sol[i] for i in args)
                    if all(lo <= x <= hi for x in row) and row not in seen:
                        seen.add(row)
                        new_delta.setdefault(pred, set()).add(row)
        delta = new_delta
    return full


def derives_false(system: ChcSystem, lo: int = 0, hi: int = 3) -> bool:
    """True when some goal clause fires in the bounded least model."""
    facts = least_model(system, lo, hi)
    for clause in system.goal_clauses():
        ev = _ClauseEval(clause)
        tables = []
        missing = False
        for pred, _ in ev.body:
            rows = facts.get(pred)
            if not rows:
                missing = True
                break
            tables.append(list(rows))
        if missing:
            continue
        for _ in ev.solutions(tables, lo, hi):
            return True
    return False
