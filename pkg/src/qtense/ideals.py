"""Riesz decomposition, ideals, filters and quotients by ideals."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .algebra import (UNDEF, EffectAlgebra, Inapplicable, QEffectAlgebra, dual,
                      validate_effect_axioms)
from .report import Report


@dataclass(frozen=True)
class IdealOrFilter:
    members: frozenset[str]
    flavor: str  # "ideal" | "filter"

    def __contains__(self, x: str) -> bool:
        return x in self.members

    def __len__(self) -> int:
        return len(self.members)

    def sorted(self) -> list[str]:
        return sorted(self.members)


def check_rdp(algebra: EffectAlgebra) -> Report:
    """Exhaustive Riesz decomposition check; the witness is a triple
    ``(x, y1, y2)`` with ``x <= y1 + y2`` and no decomposition."""
    rep = Report(f"Riesz decomposition on {algebra.name or 'algebra'}")
    t, le = algebra.table, algebra.leq
    for y1, y2 in np.argwhere(t >= 0):
        below1 = np.flatnonzero(le[:, y1])
        below2 = np.flatnonzero(le[:, y2])
        reachable = t[np.ix_(below1, below2)]
        reachable = set(reachable[reachable >= 0].tolist())
        for x in np.flatnonzero(le[:, t[y1, y2]]):
            if int(x) not in reachable:
                rep.check("RDP", False, {"x": algebra.names[x], "y1": algebra.names[y1],
                                         "y2": algebra.names[y2]})
                return rep
    rep.check("RDP", True)
    return rep


def _close_ideal(algebra: EffectAlgebra, seed: np.ndarray) -> np.ndarray:
    member = seed.copy()
    member[algebra.zero] = True
    le, t = algebra.leq, algebra.table
    while True:
        grown = le[:, member].any(axis=1)
        sums = t[np.ix_(grown, grown)]
        extra = np.zeros_like(grown)
        extra[sums[sums >= 0]] = True
        grown |= extra
        if (grown == member).all():
            return member
        member = grown


def _mask(algebra: EffectAlgebra, elements: Iterable[str]) -> np.ndarray:
    m = np.zeros(algebra.n, dtype=bool)
    for x in elements:
        m[algebra.idx(x)] = True
    return m


def _as(algebra: EffectAlgebra, mask: np.ndarray, flavor: str) -> IdealOrFilter:
    return IdealOrFilter(frozenset(algebra.names[i] for i in np.flatnonzero(mask)), flavor)


def generated_ideal(algebra: EffectAlgebra, seed: Iterable[str]) -> IdealOrFilter:
    """Least ideal containing ``seed``."""
    return _as(algebra, _close_ideal(algebra, _mask(algebra, seed)), "ideal")


def generated_filter(algebra: EffectAlgebra, seed: Iterable[str]) -> IdealOrFilter:
    """Least filter containing ``seed``: the ideal it generates in the dual."""
    op = dual(algebra)
    return _as(algebra, _close_ideal(op, _mask(op, seed)), "filter")


def is_ideal(algebra: EffectAlgebra, members: Iterable[str]) -> bool:
    m = _mask(algebra, members)
    if not m.any():
        return False
    down = algebra.leq[:, m].any(axis=1)
    sums = algebra.table[np.ix_(m, m)]
    return bool((down <= m).all() and m[sums[sums >= 0]].all())


def is_filter(algebra: EffectAlgebra, members: Iterable[str]) -> bool:
    return is_ideal(dual(algebra), members)


def enumerate_ideals(algebra: EffectAlgebra) -> list[IdealOrFilter]:
    """All ideals, by closing every known ideal under one more element.

    Any ideal ``J`` is reached from ``{0}`` by adding its elements one at a
    time, so the search is complete.
    """
    start = _close_ideal(algebra, np.zeros(algebra.n, dtype=bool))
    seen = {start.tobytes(): start}
    frontier = [start]
    while frontier:
        nxt = []
        for ideal in frontier:
            for x in np.flatnonzero(~ideal):
                seed = ideal.copy()
                seed[x] = True
                j = _close_ideal(algebra, seed)
                key = j.tobytes()
                if key not in seen:
                    seen[key] = j
                    nxt.append(j)
        frontier = nxt
    out = [_as(algebra, m, "ideal") for m in seen.values()]
    return sorted(out, key=lambda i: (len(i), i.sorted()))


def enumerate_filters(algebra: EffectAlgebra) -> list[IdealOrFilter]:
    return [IdealOrFilter(i.members, "filter") for i in enumerate_ideals(dual(algebra))]


def check_riesz(algebra: EffectAlgebra, ideal: IdealOrFilter) -> Report:
    """``x in I`` and ``x <= a + b`` give ``x = a1 + b1`` with ``a1 <= a``,
    ``b1 <= b`` and ``a1, b1 in I``."""
    rep = Report("Riesz ideal")
    m = _mask(algebra, ideal.members)
    t, le = algebra.table, algebra.leq
    for a, b in np.argwhere(t >= 0):
        ia = np.flatnonzero(le[:, a] & m)
        ib = np.flatnonzero(le[:, b] & m)
        sums = t[np.ix_(ia, ib)]
        reachable = set(sums[sums >= 0].tolist())
        for x in np.flatnonzero(m & le[:, t[a, b]]):
            if int(x) not in reachable:
                rep.check("Riesz", False, {"x": algebra.names[x], "a": algebra.names[a],
                                           "b": algebra.names[b]})
                return rep
    rep.check("Riesz", True)
    return rep


@dataclass(frozen=True, eq=False)
class QuotientAlgebra:
    source: EffectAlgebra
    ideal: IdealOrFilter
    classes: tuple[frozenset[str], ...]
    class_of: dict[str, int]
    algebra: EffectAlgebra

    def project(self, x: str) -> str:
        return self.algebra.names[self.class_of[x]]


def congruence_matrix(algebra: EffectAlgebra, ideal: IdealOrFilter) -> np.ndarray:
    """``[a, b]`` is true iff ``a - x = b - y`` for some ``x <= a``, ``y <= b`` in I."""
    m = _mask(algebra, ideal.members)
    diff = algebra.diff_table  # [a, x] = a - x
    n = algebra.n
    rem = [set(int(v) for v in diff[a, m] if v != UNDEF) for a in range(n)]
    return np.array([[bool(rem[a] & rem[b]) for b in range(n)] for a in range(n)])


def quotient(algebra: EffectAlgebra, ideal: IdealOrFilter) -> QuotientAlgebra:
    """``E / I``; refuses algebras without RDP, where ``~_I`` need not be a
    congruence."""
    rdp = check_rdp(algebra)
    if not rdp.ok:
        raise Inapplicable(f"quotient needs RDP; decomposition fails at {rdp.witnesses[0]}")
    if not is_ideal(algebra, ideal.members):
        raise ValueError("not an ideal")
    rel = congruence_matrix(algebra, ideal)
    n = algebra.n
    if not (rel.diagonal().all() and (rel == rel.T).all()
            and ((rel.astype(int) @ rel.astype(int) > 0) <= rel).all()):
        raise AssertionError("~_I is not an equivalence on an RDP algebra")
    cls = -np.ones(n, dtype=np.int64)
    reps: list[int] = []
    for a in sorted(range(n), key=lambda i: algebra.names[i]):
        if cls[a] < 0:
            cls[rel[a]] = len(reps)
            reps.append(a)
    k = len(reps)
    table = np.full((k, k), UNDEF, dtype=np.int64)
    for a, b in np.argwhere(algebra.table >= 0):
        ca, cb, cs = cls[a], cls[b], cls[algebra.table[a, b]]
        if table[ca, cb] not in (UNDEF, cs):
            raise AssertionError("induced sum is not well defined")
        table[ca, cb] = cs
    names = [f"[{algebra.names[r]}]" for r in reps]
    zero, one = int(cls[algebra.zero]), int(cls[algebra.one])
    if zero == one:
        raise Inapplicable("the ideal is the whole algebra; the quotient is trivial")
    if isinstance(algebra, QEffectAlgebra):
        q = np.full(k, UNDEF)
        d = np.full(k, UNDEF)
        ok = True
        for a in range(n):
            for arr, src in ((q, algebra.q), (d, algebra.d)):
                c = cls[src[a]]
                ok &= arr[cls[a]] in (UNDEF, c)
                arr[cls[a]] = c
        out = (QEffectAlgebra(names, zero, one, table, q, d, name=f"{algebra.name}/I") if ok
               else EffectAlgebra(names, zero, one, table, name=f"{algebra.name}/I"))
    else:
        out = EffectAlgebra(names, zero, one, table, name=f"{algebra.name}/I")
    if not validate_effect_axioms(out, cap=max(out.n, 64)).ok:
        raise AssertionError("quotient fails the effect axioms")
    classes = tuple(frozenset(algebra.names[i] for i in np.flatnonzero(cls == c)) for c in range(k))
    return QuotientAlgebra(algebra, ideal, classes,
                           {algebra.names[i]: int(cls[i]) for i in range(n)}, out)

