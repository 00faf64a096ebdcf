"""Exact rational linear programming via two-phase primal simplex.

All arithmetic uses :class:`fractions.Fraction`, so verdicts are exact and
deterministic.  Equality atoms are presolved by Gaussian elimination before
the tableau is built, which keeps the simplex small on the equality-heavy
constraints produced by unfolding.  Pivoting uses Dantzig's rule with a
deterministic Bland fallback against cycling.  Variables are unrestricted
in sign (split internally into nonnegative pairs).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .syntax import (
    AtomicConstraint, Constraint, EQ, NEQ, VarId, ChcError,
)

OPTIMAL = "optimal"
UNBOUNDED = "unbounded"
INFEASIBLE = "infeasible"

_ZERO = Fraction(0)
_ONE = Fraction(1)


@dataclass(frozen=True)
class LpProblem:
    constraint: Constraint
    objective: tuple[tuple[VarId, Fraction], ...]
    sense: str = "max"


@dataclass(frozen=True)
class LpResult:
    status: str
    value: Fraction | None = None


class _Affine:
    """A linear form over variables plus a constant."""

    __slots__ = ("coeffs", "const")

    def __init__(self, coeffs: dict[VarId, Fraction] | None = None,
                 const: Fraction = _ZERO):
        self.coeffs = coeffs if coeffs is not None else {}
        self.const = const

    def add_scaled(self, other: "_Affine", k: Fraction) -> None:
        for v, c in other.coeffs.items():
            nc = self.coeffs.get(v, _ZERO) + k * c
            if nc:
                self.coeffs[v] = nc
            else:
                self.coeffs.pop(v, None)
        self.const += k * other.const


class Simplex:
    """A feasibility-checked tableau over one constraint system that can
    maximize any number of objectives (presolve and phase 1 are shared)."""

    def __init__(self, constraint: Constraint):
        self.feasible = True
        self.subst: dict[VarId, _Affine] = {}
        if constraint.is_false_literal:
            self.feasible = False
            return
        ineqs: list[AtomicConstraint] = []
        for a in constraint.atoms:
            if a.rel == NEQ:
                raise ChcError("disequalities are not supported by the "
                               "LP oracle")
            if a.rel == EQ:
                if not self._absorb_equality(a):
                    self.feasible = False
                    return
            else:
                ineqs.append(a)

        rows: list[tuple[dict[VarId, Fraction], Fraction]] = []
        occurring: dict[VarId, None] = {}
        for a in ineqs:
            form = _Affine()
            for v, c in a.coeffs:
                e = self.subst.get(v)
                if e is not None:
                    form.add_scaled(e, c)
                else:
                    form.add_scaled(_Affine({v: _ONE}), c)
            b = a.bound - form.const
            if not form.coeffs:
                if b < 0:
                    self.feasible = False
                    return
                continue
            rows.append((form.coeffs, b))
            for v in form.coeffs:
                occurring.setdefault(v)

        self.vars: list[VarId] = sorted(occurring, key=lambda v: v.index)
        self.col_of = {v: 2 * i for i, v in enumerate(self.vars)}
        nstruct = 2 * len(self.vars)
        m = len(rows)
        kinds = []
        data = []
        for coeffs, b in rows:
            row = [_ZERO] * nstruct
            for v, c in coeffs.items():
                j = self.col_of[v]
                row[j] += c
                row[j + 1] -= c
            if b < 0:
                row = [-x for x in row]
                b = -b
                kinds.append("ge")
            else:
                kinds.append("le")
            data.append((row, b))

        extra = sum(2 if k == "ge" else 1 for k in kinds)
        self.ncols = nstruct + extra
        self.nstruct = nstruct
        self.tableau: list[list[Fraction]] = []
        self.basis: list[int] = []
        self.artificial: set[int] = set()
        col = nstruct
        for (row, b), kind in zip(data, kinds):
            full = row + [_ZERO] * extra + [b]
            if kind == "le":
                full[col] = _ONE
                self.basis.append(col)
                col += 1
            else:
                full[col] = -_ONE
                full[col + 1] = _ONE
                self.artificial.add(col + 1)
                self.basis.append(col + 1)
                col += 2
            self.tableau.append(full)

        if self.artificial:
            cost = [_ZERO] * self.ncols
            for j in self.artificial:
                cost[j] = Fraction(-1)
            status, value = self._optimize(cost, phase1=True)
            assert status == OPTIMAL
            if value != 0:
                self.feasible = False
                return
            self._expel_artificials()

    def _absorb_equality(self, a: AtomicConstraint) -> bool:
        """Fold one equality into the substitution map; False = inconsistent."""
        form = _Affine()
        for v, c in a.coeffs:
            e = self.subst.get(v)
            if e is not None:
                form.add_scaled(e, c)
            else:
                form.add_scaled(_Affine({v: _ONE}), c)
        if not form.coeffs:
            return form.const == a.bound
        pivot = max(form.coeffs, key=lambda v: v.index)
        k = form.coeffs.pop(pivot)
        expr = _Affine({v: -c / k for v, c in form.coeffs.items()},
                       (a.bound - form.const) / k)
        for e in self.subst.values():
            c = e.coeffs.pop(pivot, None)
            if c is not None:
                e.add_scaled(expr, c)
        self.subst[pivot] = expr
        return True

    # -- tableau mechanics --------------------------------------------------

    def _pivot(self, r: int, c: int, zrow: list[Fraction]) -> None:
        row = self.tableau[r]
        piv = row[c]
        if piv != 1:
            inv = 1 / piv
            self.tableau[r] = row = [x * inv for x in row]
        for i, other in enumerate(self.tableau):
            if i != r and other[c] != 0:
                f = other[c]
                self.tableau[i] = [a - f * b for a, b in zip(other, row)]
        f = zrow[c]
        if f != 0:
            for j in range(len(zrow)):
                if row[j] != 0:
                    zrow[j] -= f * row[j]
        self.basis[r] = c

    def _optimize(self, cost: list[Fraction],
                  phase1: bool = False) -> tuple[str, Fraction]:
        # zrow[j] = reduced cost of column j; zrow[-1] = -objective value
        zrow = list(cost) + [_ZERO]
        for i, bj in enumerate(self.basis):
            cb = cost[bj]
            if cb != 0:
                row = self.tableau[i]
                for j in range(self.ncols + 1):
                    if row[j] != 0:
                        zrow[j] -= cb * row[j]
        iterations = 0
        stall_limit = 4 * (len(self.tableau) + self.ncols) + 64
        while True:
            iterations += 1
            bland = iterations > stall_limit
            enter = -1
            best_red = _ZERO
            for j in range(self.ncols):
                if not phase1 and j in self.artificial:
                    continue
                red = zrow[j]
                if red > 0:
                    if bland:
                        enter = j
                        break
                    if red > best_red:
                        best_red = red
                        enter = j
            if enter < 0:
                return OPTIMAL, -zrow[-1]
            leave = -1
            best = None
            for i, row in enumerate(self.tableau):
                if row[enter] > 0:
                    ratio = row[-1] / row[enter]
                    if (best is None or ratio < best
                            or (ratio == best
                                and self.basis[i] < self.basis[leave])):
                        best = ratio
                        leave = i
            if leave < 0:
                return UNBOUNDED, _ZERO
            self._pivot(leave, enter, zrow)

    def _expel_artificials(self) -> None:
        # pivot basic artificials (necessarily at zero) out where possible;
        # rows that cannot be pivoted are redundant and dropped
        zrow = [_ZERO] * (self.ncols + 1)
        drop: list[int] = []
        for i in range(len(self.basis)):
            if self.basis[i] not in self.artificial:
                continue
            row = self.tableau[i]
            enter = next((j for j in range(self.ncols)
                          if j not in self.artificial and row[j] != 0),
                         None)
            if enter is None:
                drop.append(i)  # the row is all-zero outside artificials
            else:
                self._pivot(i, enter, zrow)
        for i in reversed(drop):
            del self.tableau[i]
            del self.basis[i]

    # -- public interface ----------------------------------------------------

    def maximize(self, objective: Mapping[VarId, Fraction]) -> LpResult:
        if not self.feasible:
            return LpResult(INFEASIBLE)
        form = _Affine()
        for v, c in objective.items():
            if c == 0:
                continue
            e = self.subst.get(v)
            if e is not None:
                form.add_scaled(e, Fraction(c))
            else:
                form.add_scaled(_Affine({v: _ONE}), Fraction(c))
        cost = [_ZERO] * self.ncols
        for v, c in form.coeffs.items():
            if v not in self.col_of:
                return LpResult(UNBOUNDED)  # free variable in the objective
            j = self.col_of[v]
            cost[j] = c
            cost[j + 1] = -c
        if not form.coeffs:
            return LpResult(OPTIMAL, form.const)
        status, value = self._optimize(cost)
        if status == UNBOUNDED:
            return LpResult(UNBOUNDED)
        return LpResult(OPTIMAL, value + form.const)

    def solution(self) -> dict[VarId, Fraction]:
        """The current basic solution, with presolved variables restored."""
        assert self.feasible
        vals = [_ZERO] * self.ncols
        for i, bj in enumerate(self.basis):
            vals[bj] = self.tableau[i][-1]
        point = {v: vals[2 * i] - vals[2 * i + 1]
                 for i, v in enumerate(self.vars)}
        for v, e in self.subst.items():
            point[v] = sum((c * point.get(u, _ZERO)
                            for u, c in e.coeffs.items()), e.const)
        return point


def lp_solve(problem: LpProblem) -> LpResult:
    """Exact optimum of a linear objective over a conjunction of linear
    constraints, or an unbounded/infeasible verdict."""
    objective = dict(problem.objective)
    if problem.sense == "min":
        objective = {v: -c for v, c in objective.items()}
    result = Simplex(problem.constraint).maximize(objective)
    if problem.sense == "min" and result.status == OPTIMAL:
        return LpResult(OPTIMAL, -result.value)
    return result


def sup(constraint: Constraint, objective: Mapping[VarId, Fraction]) -> LpResult:
    return Simplex(constraint).maximize(objective)


def satisfiable(constraint: Constraint) -> bool:
    return Simplex(constraint).feasible


def sample_point(constraint: Constraint) -> dict[VarId, Fraction] | None:
    s = Simplex(constraint)
    return s.solution() if s.feasible else None


def entails_atom(simplex: Simplex, atom: AtomicConstraint) -> bool:
    if not simplex.feasible:
        return True
    checks = [(dict(atom.coeffs), atom.bound)]
    if atom.rel == EQ:
        checks.append(({v: -c for v, c in atom.coeffs}, -atom.bound))
    for objective, bound in checks:
        r = simplex.maximize(objective)
        if r.status != OPTIMAL or r.value > bound:
            return False
    return True


def entails(constraint: Constraint, atom: AtomicConstraint) -> bool:
    """Does every rational point of `constraint` satisfy `atom`?"""
    return entails_atom(Simplex(constraint), atom)


def constraint_entails(c: Constraint, d: Constraint) -> bool:
    if d.is_true:
        return True
    s = Simplex(c)
    return all(entails_atom(s, a) for a in d.atoms)
