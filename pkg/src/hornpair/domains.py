"""Abstract constraint domains over a fixed variable tuple.

Five domains ordered by precision: Universe (true/false only), Boxes
(per-variable intervals), Bounded Differences (x - y <= a and unary bounds,
stored as a difference-bound matrix with a zero node), Octagons
(+-x +- y <= a, stored as a DBM over signed forms with strong closure), and
Convex Polyhedra (arbitrary conjunctions of linear inequalities, exact).

Every domain supports: best abstraction ``alpha`` from a concrete
constraint, concretization ``to_constraint``, entailment ``leq``, least
upper bound ``lub``, widening ``widen``, exact projection ``project``,
conjunction ``meet``, and emptiness.  Values are immutable; all arithmetic
is exact.  Widening results are deliberately left unclosed (the ``closed``
flag) so ascending chains stabilize; every other operation closes on demand.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from typing import Iterable, Mapping, Sequence

from . import lp, polyhedra
from .syntax import (
    AtomicConstraint, Constraint, EQ, FALSE, LE, TRUE, VarId,
    atomic_to_clp, make_atomic,
)

Bound = Fraction | None  # None is +infinity (or missing interval end)


class DomainTag(Enum):
    UNIVERSE = "universe"
    BOX = "box"
    BDS = "bds"
    OCT = "oct"
    POLY = "poly"

    @property
    def precision(self) -> int:
        return _PRECISION[self]


_PRECISION = {DomainTag.UNIVERSE: 0, DomainTag.BOX: 1, DomainTag.BDS: 2,
              DomainTag.OCT: 3, DomainTag.POLY: 4}


class DomainError(Exception):
    pass


Matrix = tuple[tuple[Bound, ...], ...]


@dataclass(frozen=True)
class AbstractValue:
    tag: DomainTag
    dims: tuple[VarId, ...]
    empty: bool = False
    box: tuple[tuple[Bound, Bound], ...] | None = None
    dbm: Matrix | None = None
    closed: bool = True
    atoms: tuple[AtomicConstraint, ...] | None = None


def top(tag: DomainTag, dims: Sequence[VarId]) -> AbstractValue:
    dims = tuple(dims)
    n = len(dims)
    if tag is DomainTag.UNIVERSE:
        return AbstractValue(tag, dims)
    if tag is DomainTag.BOX:
        return AbstractValue(tag, dims, box=((None, None),) * n)
    if tag is DomainTag.BDS:
        return AbstractValue(tag, dims, dbm=_top_matrix(n + 1))
    if tag is DomainTag.OCT:
        return AbstractValue(tag, dims, dbm=_top_matrix(2 * n))
    return AbstractValue(tag, dims, atoms=())


def bottom(tag: DomainTag, dims: Sequence[VarId]) -> AbstractValue:
    return AbstractValue(tag, tuple(dims), empty=True)


def _top_matrix(n: int) -> Matrix:
    return tuple(tuple(Fraction(0) if i == j else None for j in range(n))
                 for i in range(n))


def _dadd(a: Bound, b: Bound) -> Bound:
    if a is None or b is None:
        return None
    return a + b


def _dmin(a: Bound, b: Bound) -> Bound:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


def _dle(a: Bound, b: Bound) -> bool:
    """a <= b with None meaning +infinity."""
    if b is None:
        return True
    return a is not None and a <= b


# ---------------------------------------------------------------------------
# DBM closure


def _bds_close(m: Matrix) -> tuple[Matrix, bool]:
    """Shortest-path closure; returns (closed matrix, is_empty)."""
    n = len(m)
    w = [list(r) for r in m]
    for k in range(n):
        row_k = w[k]
        for i in range(n):
            wik = w[i][k]
            if wik is None:
                continue
            row_i = w[i]
            for j in range(n):
                via = _dadd(wik, row_k[j])
                if via is not None and (row_i[j] is None or via < row_i[j]):
                    row_i[j] = via
    for i in range(n):
        if w[i][i] is not None and w[i][i] < 0:
            return m, True
        w[i][i] = Fraction(0)
    return tuple(tuple(r) for r in w), False


def _oct_strengthen(w: list[list[Bound]]) -> None:
    n = len(w)
    for i in range(n):
        half_i = w[i][i ^ 1]
        if half_i is None:
            continue
        for j in range(n):
            if i == j:
                continue
            half_j = w[j ^ 1][j]
            if half_j is None:
                continue
            via = (half_i + half_j) / 2
            if w[i][j] is None or via < w[i][j]:
                w[i][j] = via


def _oct_close(m: Matrix) -> tuple[Matrix, bool]:
    """Strong closure of a coherent octagonal DBM (exact rationals):
    Floyd-Warshall interleaved with the unary strengthening step."""
    n = len(m)
    w = [list(r) for r in m]
    for k in range(n):
        row_k = w[k]
        for i in range(n):
            wik = w[i][k]
            if wik is None:
                continue
            row_i = w[i]
            for j in range(n):
                via = _dadd(wik, row_k[j])
                if via is not None and (row_i[j] is None or via < row_i[j]):
                    row_i[j] = via
        if k % 2 == 1:
            _oct_strengthen(w)
    _oct_strengthen(w)
    # coherence: an entry and its mirror state the same constraint
    for i in range(n):
        for j in range(n):
            mirror = w[j ^ 1][i ^ 1]
            if mirror is not None and (w[i][j] is None or mirror < w[i][j]):
                w[i][j] = mirror
    for i in range(n):
        if w[i][i] is not None and w[i][i] < 0:
            return m, True
        w[i][i] = Fraction(0)
    return tuple(tuple(r) for r in w), False


def _closed(v: AbstractValue) -> AbstractValue:
    if v.empty or v.closed or v.dbm is None:
        return v
    close = _bds_close if v.tag is DomainTag.BDS else _oct_close
    m, emp = close(v.dbm)
    if emp:
        return bottom(v.tag, v.dims)
    return AbstractValue(v.tag, v.dims, dbm=m, closed=True)


# ---------------------------------------------------------------------------
# template recognition (fast paths for alpha)


def _box_form(a: AtomicConstraint) -> bool:
    return len(a.coeffs) == 1


def _bds_form(a: AtomicConstraint) -> bool:
    if len(a.coeffs) == 1:
        return True
    if len(a.coeffs) == 2:
        (_, c1), (_, c2) = a.coeffs
        return abs(c1) == abs(c2) and (c1 > 0) != (c2 > 0)
    return False


def _oct_form(a: AtomicConstraint) -> bool:
    if len(a.coeffs) == 1:
        return True
    if len(a.coeffs) == 2:
        (_, c1), (_, c2) = a.coeffs
        return abs(c1) == abs(c2)
    return False


def _expand_le(atoms: Iterable[AtomicConstraint]) -> list[AtomicConstraint]:
    out: list[AtomicConstraint] = []
    for a in atoms:
        if a.rel == EQ:
            out.append(AtomicConstraint(a.coeffs, a.bound, LE))
            neg = make_atomic({v: -c for v, c in a.coeffs}, -a.bound, LE)
            assert isinstance(neg, AtomicConstraint)
            out.append(neg)
        else:
            out.append(a)
    return out


# ---------------------------------------------------------------------------
# alpha


def alpha(tag: DomainTag, c: Constraint, dims: Sequence[VarId],
          cap: int = polyhedra.FM_CAP_DEFAULT) -> AbstractValue:
    """Best abstraction of a concrete constraint in the given domain.

    Template bounds (Box/BDS/Oct) are exact suprema computed by LP, except
    when every atom is already in the domain's template form, where seeding
    a DBM and closing it gives the same result cheaply.  Poly is identity up
    to canonicalization and redundancy removal."""
    return _alpha_cached(tag, c, tuple(dims), cap)


@functools.lru_cache(maxsize=8192)
def _alpha_cached(tag: DomainTag, c: Constraint, dims: tuple[VarId, ...],
                  cap: int) -> AbstractValue:
    cvars = set(c.vars())
    if not cvars.issubset(dims):
        raise DomainError("constraint variables not covered by dims")
    if c.is_false_literal:
        return bottom(tag, dims)

    if tag is DomainTag.BOX and all(_box_form(a) for a in c.atoms):
        return _box_seed(c, dims)
    if tag is DomainTag.BDS and all(_bds_form(a) for a in c.atoms):
        return _dbm_seed(DomainTag.BDS, c, dims)
    if tag is DomainTag.OCT and all(_oct_form(a) for a in c.atoms):
        return _dbm_seed(DomainTag.OCT, c, dims)

    simplex = lp.Simplex(c)
    if not simplex.feasible:
        return bottom(tag, dims)
    if tag is DomainTag.UNIVERSE:
        return top(tag, dims)
    if tag is DomainTag.POLY:
        atoms = polyhedra.canonical_atoms(c.atoms)
        assert atoms != "false"
        return AbstractValue(tag, tuple(dims), atoms=polyhedra.remove_redundant(atoms))

    def bound_of(objective: dict[VarId, Fraction]) -> Bound:
        if any(v not in cvars for v in objective):
            return None  # any variable absent from c is unconstrained
        r = simplex.maximize(objective)
        return r.value if r.status == lp.OPTIMAL else None

    n = len(dims)
    if tag is DomainTag.BOX:
        ivals = []
        for v in dims:
            hi = bound_of({v: Fraction(1)})
            lo = bound_of({v: Fraction(-1)})
            ivals.append((None if lo is None else -lo, hi))
        return AbstractValue(tag, tuple(dims), box=tuple(ivals))

    if tag is DomainTag.BDS:
        m = [list(r) for r in _top_matrix(n + 1)]
        for i, v in enumerate(dims):
            m[i + 1][0] = bound_of({v: Fraction(1)})
            m[0][i + 1] = bound_of({v: Fraction(-1)})
            for j, u in enumerate(dims):
                if i != j:
                    m[i + 1][j + 1] = bound_of({v: Fraction(1),
                                                u: Fraction(-1)})
        return AbstractValue(tag, tuple(dims), dbm=tuple(tuple(r) for r in m))

    m = [list(r) for r in _top_matrix(2 * n)]
    for a in range(2 * n):
        for b in range(2 * n):
            if a == b:
                continue
            objective: dict[VarId, Fraction] = {}
            va, sa = dims[a // 2], Fraction(1 if a % 2 == 0 else -1)
            vb, sb = dims[b // 2], Fraction(1 if b % 2 == 0 else -1)
            objective[va] = objective.get(va, Fraction(0)) + sa
            objective[vb] = objective.get(vb, Fraction(0)) - sb
            objective = {v: c2 for v, c2 in objective.items() if c2 != 0}
            if not objective:
                continue
            m[a][b] = bound_of(objective)
    return AbstractValue(tag, tuple(dims), dbm=tuple(tuple(r) for r in m))


def _box_seed(c: Constraint, dims: tuple[VarId, ...]) -> AbstractValue:
    lo: dict[VarId, Bound] = {v: None for v in dims}
    hi: dict[VarId, Bound] = {v: None for v in dims}
    for a in _expand_le(c.atoms):
        (v, k), = a.coeffs
        if k > 0:
            hi[v] = _dmin(hi[v], a.bound / k)
        else:
            b = a.bound / k  # lower bound
            lo[v] = b if lo[v] is None else max(lo[v], b)
    for v in dims:
        if lo[v] is not None and hi[v] is not None and lo[v] > hi[v]:
            return bottom(DomainTag.BOX, dims)
    return AbstractValue(DomainTag.BOX, dims,
                         box=tuple((lo[v], hi[v]) for v in dims))


def _dbm_seed(tag: DomainTag, c: Constraint,
              dims: tuple[VarId, ...]) -> AbstractValue:
    n = len(dims)
    pos = {v: i for i, v in enumerate(dims)}
    if tag is DomainTag.BDS:
        m = [list(r) for r in _top_matrix(n + 1)]
        for a in _expand_le(c.atoms):
            if len(a.coeffs) == 1:
                (v, k), = a.coeffs
                if k > 0:
                    i, j, b = pos[v] + 1, 0, a.bound / k
                else:
                    i, j, b = 0, pos[v] + 1, a.bound / -k
            else:
                (v1, c1), (v2, c2) = a.coeffs
                s = abs(c1)
                if c1 > 0:
                    i, j, b = pos[v1] + 1, pos[v2] + 1, a.bound / s
                else:
                    i, j, b = pos[v2] + 1, pos[v1] + 1, a.bound / s
            m[i][j] = _dmin(m[i][j], b)
        closed, emp = _bds_close(tuple(tuple(r) for r in m))
        return bottom(tag, dims) if emp else AbstractValue(tag, dims,
                                                           dbm=closed)

    def node(v: VarId, sign: int) -> int:
        return 2 * pos[v] + (0 if sign > 0 else 1)

    m = [list(r) for r in _top_matrix(2 * n)]

    def put(i: int, j: int, b: Fraction) -> None:
        m[i][j] = _dmin(m[i][j], b)
        m[j ^ 1][i ^ 1] = _dmin(m[j ^ 1][i ^ 1], b)

    for a in _expand_le(c.atoms):
        if len(a.coeffs) == 1:
            (v, k), = a.coeffs
            if k > 0:
                put(node(v, 1), node(v, -1), 2 * a.bound / k)
            else:
                put(node(v, -1), node(v, 1), 2 * a.bound / -k)
        else:
            (v1, c1), (v2, c2) = a.coeffs
            s = abs(c1)
            sign1 = 1 if c1 > 0 else -1
            sign2 = 1 if c2 > 0 else -1
            put(node(v1, sign1), node(v2, -sign2), a.bound / s)
    closed, emp = _oct_close(tuple(tuple(r) for r in m))
    return bottom(tag, dims) if emp else AbstractValue(tag, dims, dbm=closed)


# ---------------------------------------------------------------------------
# concretization


def _minimal_edges(m: Matrix) -> list[tuple[int, int, Fraction]]:
    """A small generating set of edges for a closed DBM: zero-weight
    strongly-connected classes keep one cycle, distinct classes keep only
    undominated edges between representatives."""
    n = len(m)
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i in range(n):
        for j in range(i + 1, n):
            if (m[i][j] is not None and m[j][i] is not None
                    and m[i][j] + m[j][i] == 0):
                parent[find(i)] = find(j)

    classes: dict[int, list[int]] = {}
    for i in range(n):
        classes.setdefault(find(i), []).append(i)
    rep = {r: min(members) for r, members in classes.items()}
    edges: list[tuple[int, int, Fraction]] = []
    for members in classes.values():
        members.sort()
        if len(members) > 1:
            cycle = members + [members[0]]
            for a, b in zip(cycle, cycle[1:]):
                edges.append((a, b, m[a][b]))
    reps = sorted(rep.values())
    for i in reps:
        for j in reps:
            if i == j or m[i][j] is None:
                continue
            dominated = any(
                k not in (i, j) and m[i][k] is not None
                and m[k][j] is not None and m[i][k] + m[k][j] <= m[i][j]
                for k in reps)
            if not dominated:
                edges.append((i, j, m[i][j]))
    return edges


def to_constraint(v: AbstractValue) -> Constraint:
    """A constraint whose rational models are exactly the value's points."""
    if v.empty:
        return FALSE
    if v.tag is DomainTag.UNIVERSE:
        return TRUE
    atoms: list[AtomicConstraint | bool] = []
    if v.tag is DomainTag.BOX:
        for (lo, hi), var in zip(v.box, v.dims):
            if lo is not None:
                atoms.append(make_atomic({var: Fraction(-1)}, -lo, LE))
            if hi is not None:
                atoms.append(make_atomic({var: Fraction(1)}, hi, LE))
    elif v.tag is DomainTag.BDS:
        cv = _closed(v)
        if cv.empty:
            return FALSE
        for i, j, w in _minimal_edges(cv.dbm):
            coeffs: dict[VarId, Fraction] = {}
            if i > 0:
                coeffs[cv.dims[i - 1]] = Fraction(1)
            if j > 0:
                coeffs[cv.dims[j - 1]] = coeffs.get(cv.dims[j - 1],
                                                    Fraction(0)) - 1
            atoms.append(make_atomic(coeffs, w, LE))
    elif v.tag is DomainTag.OCT:
        cv = _closed(v)
        if cv.empty:
            return FALSE
        for i, j, w in _minimal_edges(cv.dbm):
            coeffs = {}
            vi, si = cv.dims[i // 2], Fraction(1 if i % 2 == 0 else -1)
            vj, sj = cv.dims[j // 2], Fraction(1 if j % 2 == 0 else -1)
            coeffs[vi] = coeffs.get(vi, Fraction(0)) + si
            coeffs[vj] = coeffs.get(vj, Fraction(0)) - sj
            atoms.append(make_atomic(coeffs, w, LE))
    else:
        atoms = list(v.atoms)
    got = polyhedra.canonical_atoms(atoms)
    if got == "false":
        return FALSE
    return Constraint(got)


# ---------------------------------------------------------------------------
# lattice operations


def _check_pair(a: AbstractValue, b: AbstractValue) -> None:
    if a.tag is not b.tag:
        raise DomainError(f"domain mismatch: {a.tag} vs {b.tag}")
    if a.dims != b.dims:
        raise DomainError("dimension mismatch")


def is_empty(v: AbstractValue) -> bool:
    return v.empty


def leq(a: AbstractValue, b: AbstractValue) -> bool:
    """Entailment: every point of a is a point of b."""
    _check_pair(a, b)
    if a.empty:
        return True
    if b.empty:
        return False
    if a.tag is DomainTag.UNIVERSE:
        return True
    if a.tag is DomainTag.BOX:
        for (alo, ahi), (blo, bhi) in zip(a.box, b.box):
            if blo is not None and (alo is None or alo < blo):
                return False
            if not _dle(ahi, bhi):
                return False
        return True
    if a.tag in (DomainTag.BDS, DomainTag.OCT):
        ca = _closed(a)
        if ca.empty:
            return True
        return all(_dle(ca.dbm[i][j], b.dbm[i][j])
                   for i in range(len(b.dbm)) for j in range(len(b.dbm))
                   if b.dbm[i][j] is not None)
    simplex = lp.Simplex(Constraint(a.atoms))
    return all(lp.entails_atom(simplex, atom) for atom in b.atoms)


def lub(a: AbstractValue, b: AbstractValue,
        cap: int = polyhedra.FM_CAP_DEFAULT) -> AbstractValue:
    """Least upper bound; the empty value is the identity element."""
    _check_pair(a, b)
    if a.empty:
        return b
    if b.empty:
        return a
    if a.tag is DomainTag.UNIVERSE:
        return a
    if a.tag is DomainTag.BOX:
        ivals = []
        for (alo, ahi), (blo, bhi) in zip(a.box, b.box):
            lo = None if alo is None or blo is None else min(alo, blo)
            hi = None if ahi is None or bhi is None else max(ahi, bhi)
            ivals.append((lo, hi))
        return AbstractValue(a.tag, a.dims, box=tuple(ivals))
    if a.tag in (DomainTag.BDS, DomainTag.OCT):
        ca, cb = _closed(a), _closed(b)
        if ca.empty:
            return cb
        if cb.empty:
            return ca
        n = len(ca.dbm)
        m = tuple(tuple(None if ca.dbm[i][j] is None or cb.dbm[i][j] is None
                        else max(ca.dbm[i][j], cb.dbm[i][j])
                        for j in range(n)) for i in range(n))
        return AbstractValue(a.tag, a.dims, dbm=m)
    atoms = polyhedra.hull(a.atoms, b.atoms, a.dims, cap)
    return AbstractValue(a.tag, a.dims, atoms=atoms)


def meet(a: AbstractValue, b: AbstractValue) -> AbstractValue:
    """Greatest lower bound (conjunction)."""
    _check_pair(a, b)
    if a.empty or b.empty:
        return bottom(a.tag, a.dims)
    if a.tag is DomainTag.UNIVERSE:
        return a
    if a.tag is DomainTag.BOX:
        ivals = []
        for (alo, ahi), (blo, bhi) in zip(a.box, b.box):
            lo = blo if alo is None else alo if blo is None else max(alo, blo)
            hi = _dmin(ahi, bhi)
            if lo is not None and hi is not None and lo > hi:
                return bottom(a.tag, a.dims)
            ivals.append((lo, hi))
        return AbstractValue(a.tag, a.dims, box=tuple(ivals))
    if a.tag in (DomainTag.BDS, DomainTag.OCT):
        n = len(a.dbm)
        m = tuple(tuple(_dmin(a.dbm[i][j], b.dbm[i][j]) for j in range(n))
                  for i in range(n))
        close = _bds_close if a.tag is DomainTag.BDS else _oct_close
        cm, emp = close(m)
        if emp:
            return bottom(a.tag, a.dims)
        return AbstractValue(a.tag, a.dims, dbm=cm)
    got = polyhedra.canonical_atoms(a.atoms + b.atoms)
    if got == "false" or not polyhedra.feasible(got):
        return bottom(a.tag, a.dims)
    return AbstractValue(a.tag, a.dims, atoms=polyhedra.remove_redundant(got))


def widen(a: AbstractValue, b: AbstractValue,
          cap: int = polyhedra.FM_CAP_DEFAULT) -> AbstractValue:
    """Standard widening, applied to arbitrary pairs by first replacing b
    with lub(a, b): bounds of a that survive in the lub are kept, all
    others are dropped.  DBM results are left unclosed on purpose; closing
    them would break the termination guarantee of ascending chains."""
    _check_pair(a, b)
    if a.empty:
        return b
    if b.empty:
        return a
    if a.tag is DomainTag.UNIVERSE:
        return a
    up = lub(a, b, cap)
    if a.tag is DomainTag.BOX:
        ivals = []
        for (alo, ahi), (ulo, uhi) in zip(a.box, up.box):
            lo = alo if alo is not None and ulo is not None and ulo >= alo \
                else None
            hi = ahi if _dle(uhi, ahi) else None
            ivals.append((lo, hi))
        return AbstractValue(a.tag, a.dims, box=tuple(ivals))
    if a.tag in (DomainTag.BDS, DomainTag.OCT):
        n = len(a.dbm)
        m = tuple(tuple(a.dbm[i][j] if _dle(up.dbm[i][j], a.dbm[i][j])
                        else None
                        for j in range(n)) for i in range(n))
        return AbstractValue(a.tag, a.dims, dbm=m, closed=False)
    simplex = lp.Simplex(Constraint(up.atoms))
    kept = tuple(atom for atom in a.atoms
                 if lp.entails_atom(simplex, atom))
    return AbstractValue(a.tag, a.dims, atoms=kept)


def project(v: AbstractValue, keep: Sequence[VarId],
            cap: int = polyhedra.FM_CAP_DEFAULT) -> AbstractValue:
    """Exact projection (existential elimination of dims not kept)."""
    keep = tuple(keep)
    if not set(keep).issubset(v.dims):
        raise DomainError("projection targets outside dims")
    if v.empty:
        return bottom(v.tag, keep)
    if v.tag is DomainTag.UNIVERSE:
        return top(v.tag, keep)
    idx = [v.dims.index(k) for k in keep]
    if v.tag is DomainTag.BOX:
        return AbstractValue(v.tag, keep, box=tuple(v.box[i] for i in idx))
    if v.tag is DomainTag.BDS:
        cv = _closed(v)
        if cv.empty:
            return bottom(v.tag, keep)
        nodes = [0] + [i + 1 for i in idx]
        m = tuple(tuple(cv.dbm[i][j] for j in nodes) for i in nodes)
        return AbstractValue(v.tag, keep, dbm=m)
    if v.tag is DomainTag.OCT:
        cv = _closed(v)
        if cv.empty:
            return bottom(v.tag, keep)
        nodes = [x for i in idx for x in (2 * i, 2 * i + 1)]
        m = tuple(tuple(cv.dbm[i][j] for j in nodes) for i in nodes)
        return AbstractValue(v.tag, keep, dbm=m)
    got = polyhedra.project(v.atoms, v.dims, keep, cap)
    assert got != "false"  # projecting a nonempty polyhedron stays nonempty
    return AbstractValue(v.tag, keep, atoms=got)


def rename_dims(v: AbstractValue,
                new_dims: Sequence[VarId]) -> AbstractValue:
    """Reinterpret the value over a new variable tuple (positional)."""
    new_dims = tuple(new_dims)
    if len(new_dims) != len(v.dims):
        raise DomainError("dimension count mismatch")
    if v.atoms is not None:
        mapping = dict(zip(v.dims, new_dims))
        atoms = tuple(a.rename(mapping) for a in v.atoms)
        return AbstractValue(v.tag, new_dims, empty=v.empty, atoms=atoms)
    return AbstractValue(v.tag, new_dims, empty=v.empty, box=v.box,
                         dbm=v.dbm, closed=v.closed)


def equivalent(a: AbstractValue, b: AbstractValue) -> bool:
    return leq(a, b) and leq(b, a)


def format_value(v: AbstractValue) -> str:
    """Debug rendering of an abstract value."""
    body = "false" if v.empty else (
        "true" if to_constraint(v).is_true
        else ", ".join(atomic_to_clp(a) for a in to_constraint(v).atoms))
    dims = ",".join(str(d.index) for d in v.dims)
    return f"<{v.tag.value}[{dims}] {body}>"
