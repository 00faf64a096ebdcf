"""Constraint-represented convex polyhedra: canonicalization, redundancy
removal, Fourier-Motzkin projection, and the exact convex hull of two
polyhedra via a lifted system.

Polyhedra are closed (non-strict constraints only).  Atom lists are kept in
a deterministic canonical order; complementary inequality pairs are fused
back into single equalities for readable output.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

from . import lp
from .syntax import (
    AtomicConstraint, Constraint, EQ, LE, VarId, atomic_sort_key, make_atomic,
)


class FmBlowupError(Exception):
    """Raised when one elimination step would exceed the constraint cap."""


FM_CAP_DEFAULT = 2000

# above this many atoms, eliminations interleave LP redundancy removal to
# keep intermediate systems small
_FM_PRUNE_THRESHOLD = 40

_FALSE = "false"


def canonical_atoms(
        atoms: Iterable[AtomicConstraint | bool]) -> tuple[AtomicConstraint, ...] | str:
    """Deduplicated, sorted canonical atom list, with complementary
    inequality pairs fused into equalities.  Returns the string ``"false"``
    for a syntactically inconsistent conjunction."""
    seen: dict = {}
    for a in atoms:
        if a is True:
            continue
        if a is False:
            return _FALSE
        norm = make_atomic(dict(a.coeffs), a.bound, a.rel)
        if norm is False:
            return _FALSE
        if norm is True:
            continue
        seen.setdefault((norm.coeffs, norm.bound, norm.rel), norm)

    les = {}
    eqs = []
    for (coeffs, bound, rel), a in list(seen.items()):
        if rel == EQ:
            eqs.append(a)
        else:
            les[(coeffs, bound)] = a
    out = list(eqs)
    fused: set = set()
    for (coeffs, bound), a in les.items():
        if (coeffs, bound) in fused:
            continue
        mirror = (tuple((v, -c) for v, c in coeffs), -bound)
        if mirror in les and mirror not in fused:
            fused.add((coeffs, bound))
            fused.add(mirror)
            merged = make_atomic(dict(coeffs), bound, EQ)
            assert isinstance(merged, AtomicConstraint)
            out.append(merged)
        elif (coeffs, bound) not in fused:
            out.append(a)
    # fusing may create duplicate equalities; dedupe once more
    uniq = {(a.coeffs, a.bound, a.rel): a for a in out}
    result = sorted(uniq.values(), key=atomic_sort_key)
    # quick syntactic contradiction: f = b1 and f = b2 with b1 != b2
    eq_bounds: dict = {}
    for a in result:
        if a.rel == EQ:
            if eq_bounds.setdefault(a.coeffs, a.bound) != a.bound:
                return _FALSE
    return tuple(result)


def _expand_le(atoms: Sequence[AtomicConstraint]) -> list[AtomicConstraint]:
    out = []
    for a in atoms:
        if a.rel == EQ:
            out.append(AtomicConstraint(a.coeffs, a.bound, LE))
            neg = make_atomic({v: -c for v, c in a.coeffs}, -a.bound, LE)
            assert isinstance(neg, AtomicConstraint)
            out.append(neg)
        else:
            out.append(a)
    return out


def feasible(atoms: Sequence[AtomicConstraint]) -> bool:
    return lp.satisfiable(Constraint(tuple(atoms)))


def remove_redundant(
        atoms: Sequence[AtomicConstraint]) -> tuple[AtomicConstraint, ...]:
    """Greedily drop atoms entailed by the remaining ones (LP check).
    Deterministic: atoms are visited in canonical order."""
    kept = list(atoms)
    i = 0
    while i < len(kept):
        rest = Constraint(tuple(kept[:i] + kept[i + 1:]))
        if lp.entails(rest, kept[i]):
            del kept[i]
        else:
            i += 1
    return tuple(kept)


def _substitute(atoms: list[AtomicConstraint], var: VarId,
                eq: AtomicConstraint) -> list[AtomicConstraint]:
    # eq: sum(c_i x_i) = b with var's coefficient k nonzero:
    # var = (b - rest) / k
    k = dict(eq.coeffs)[var]
    out: list[AtomicConstraint] = []
    for a in atoms:
        coeffs = dict(a.coeffs)
        if var not in coeffs:
            out.append(a)
            continue
        f = coeffs.pop(var) / k
        for v, c in eq.coeffs:
            if v != var:
                coeffs[v] = coeffs.get(v, Fraction(0)) - f * c
        made = make_atomic(coeffs, a.bound - f * eq.bound, a.rel)
        if made is False:
            return [AtomicConstraint((), Fraction(-1), LE)]
        if made is not True:
            out.append(made)
    return out


def fm_eliminate(atoms: Sequence[AtomicConstraint], drop: Sequence[VarId],
                 cap: int = FM_CAP_DEFAULT) -> tuple[AtomicConstraint, ...] | str:
    """Eliminate ``drop`` variables exactly.  Uses Gaussian substitution on
    equalities when available, Fourier-Motzkin combination otherwise.
    Returns ``"false"`` when the input is detected inconsistent.  Raises
    :class:`FmBlowupError` when a single step would exceed ``cap`` atoms."""
    current = list(atoms)
    remaining = list(drop)
    while remaining:
        # prefer a variable with an equality (cheap), else the variable with
        # the smallest pos*neg product; ties break on variable index
        choice: VarId | None = None
        eq_for: AtomicConstraint | None = None
        for v in sorted(remaining, key=lambda x: x.index):
            e = next((a for a in current
                      if a.rel == EQ and v in dict(a.coeffs)), None)
            if e is not None:
                choice, eq_for = v, e
                break
        if choice is None:
            best = None
            for v in remaining:
                pos = sum(1 for a in current if dict(a.coeffs).get(v, 0) > 0)
                neg = sum(1 for a in current if dict(a.coeffs).get(v, 0) < 0)
                key = (pos * neg, v.index)
                if best is None or key < best[0]:
                    best = (key, v)
            choice = best[1]
        remaining.remove(choice)

        if eq_for is not None:
            got = canonical_atoms(_substitute(current, choice, eq_for))
            if got == _FALSE:
                return _FALSE
            current = list(got)
            continue

        expanded = _expand_le(current)
        pos = [a for a in expanded if dict(a.coeffs).get(choice, 0) > 0]
        neg = [a for a in expanded if dict(a.coeffs).get(choice, 0) < 0]
        zero = [a for a in expanded if choice not in dict(a.coeffs)]
        if len(zero) + len(pos) * len(neg) > cap:
            raise FmBlowupError(
                f"elimination of {choice} would produce up to "
                f"{len(zero) + len(pos) * len(neg)} atoms (cap {cap})")
        combined: list[AtomicConstraint | bool] = list(zero)
        for p in pos:
            cp = dict(p.coeffs)[choice]
            for n in neg:
                cn = -dict(n.coeffs)[choice]
                coeffs = {v: c * cn for v, c in p.coeffs}
                for v, c in n.coeffs:
                    coeffs[v] = coeffs.get(v, Fraction(0)) + c * cp
                combined.append(make_atomic(
                    coeffs, p.bound * cn + n.bound * cp, LE))
        got = canonical_atoms(combined)
        if got == _FALSE:
            return _FALSE
        if len(got) > _FM_PRUNE_THRESHOLD:
            got = remove_redundant(got)
        current = list(got)
    got = canonical_atoms(current)
    return got


def project(atoms: Sequence[AtomicConstraint], dims: Sequence[VarId],
            keep: Sequence[VarId],
            cap: int = FM_CAP_DEFAULT) -> tuple[AtomicConstraint, ...] | str:
    drop = [v for v in dims if v not in set(keep)]
    got = fm_eliminate(atoms, drop, cap)
    if got == _FALSE:
        return _FALSE
    return remove_redundant(got)


def hull(atoms_a: Sequence[AtomicConstraint],
         atoms_b: Sequence[AtomicConstraint],
         dims: Sequence[VarId],
         cap: int = FM_CAP_DEFAULT) -> tuple[AtomicConstraint, ...]:
    """Exact convex (polyhedral) hull of two nonempty polyhedra over the
    same dims, via the lifted system z = p + q, A1 p <= lam b1,
    A2 q <= (1-lam) b2, 0 <= lam <= 1, projecting out p and lam."""
    base = max((v.index for v in dims), default=-1) + 1
    ys = {v: VarId(base + i, v.sort) for i, v in enumerate(dims)}
    lam = VarId(base + len(dims))

    lifted: list[AtomicConstraint | bool] = []
    for a in atoms_a:
        coeffs = {ys[v]: c for v, c in a.coeffs}
        coeffs[lam] = -a.bound
        lifted.append(make_atomic(coeffs, 0, a.rel))
    for a in atoms_b:
        coeffs: dict[VarId, Fraction] = {}
        for v, c in a.coeffs:
            coeffs[v] = coeffs.get(v, Fraction(0)) + c
            coeffs[ys[v]] = coeffs.get(ys[v], Fraction(0)) - c
        coeffs[lam] = coeffs.get(lam, Fraction(0)) + a.bound
        lifted.append(make_atomic(coeffs, a.bound, a.rel))
    lifted.append(make_atomic({lam: Fraction(-1)}, 0, LE))
    lifted.append(make_atomic({lam: Fraction(1)}, 1, LE))

    start = canonical_atoms(lifted)
    assert start != _FALSE  # both inputs nonempty, so the lift is feasible
    got = fm_eliminate(start, list(ys.values()) + [lam], cap)
    assert got != _FALSE
    return remove_redundant(got)
