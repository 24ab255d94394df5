"""Finite effect algebras and q-effect algebras.

An algebra is a carrier of opaque string names plus a partial sum table
(``-1`` marks an undefined sum). Everything else -- supplement, order,
partial difference and product -- is derived from that table.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .report import Report
from .unit import UNIT, UnitInterval

UNDEF = -1
CORE_CAP = 64
POWER_CAP = 10**6


class StructureError(ValueError):
    """Malformed input that cannot even be checked against the axioms."""


class CapExceeded(ValueError):
    pass


class Inapplicable(ValueError):
    """A theorem or operation hypothesis does not hold for the input."""


def _frozen(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


class FinitePoset:
    """A finite poset given by its names and a boolean ``leq`` matrix."""

    def __init__(self, names: Iterable[str], leq: np.ndarray | None = None, name: str = ""):
        names = tuple(str(x) for x in names)
        dup = sorted({x for x in names if names.count(x) > 1})
        if dup:
            raise StructureError(f"duplicate element identifiers: {dup}")
        if not names:
            raise StructureError("empty carrier")
        self.names = names
        self.index = {x: i for i, x in enumerate(names)}
        self.name = name
        if leq is not None:
            leq = np.array(leq, dtype=bool)
            if leq.shape != (len(names), len(names)):
                raise StructureError("order matrix has the wrong shape")
            self._leq = _frozen(leq)

    @property
    def n(self) -> int:
        return len(self.names)

    @property
    def leq(self) -> np.ndarray:
        return self._leq

    def idx(self, x: str | int) -> int:
        if isinstance(x, (int, np.integer)):
            if not 0 <= x < self.n:
                raise KeyError(x)
            return int(x)
        try:
            return self.index[x]
        except KeyError:
            raise KeyError(f"unknown element {x!r}") from None

    def leq_value(self, u: int, v: int) -> bool:
        return bool(self.leq[u, v])

    def label(self, u: int) -> str:
        return self.names[u]

    def is_partial_order(self) -> bool:
        le = self.leq
        refl = bool(le.diagonal().all())
        anti = not (le & le.T & ~np.eye(self.n, dtype=bool)).any()
        trans = bool(((le.astype(np.int64) @ le.astype(np.int64) > 0) <= le).all())
        return refl and anti and trans

    def meet(self, i: int, j: int) -> int | None:
        lower = self.leq[:, i] & self.leq[:, j]
        hits = np.flatnonzero(lower & self.leq[lower].all(axis=0))
        return int(hits[0]) if len(hits) else None

    def join(self, i: int, j: int) -> int | None:
        upper = self.leq[i] & self.leq[j]
        hits = np.flatnonzero(upper & self.leq[:, upper].all(axis=1))
        return int(hits[0]) if len(hits) else None

    def _bound_table(self, upper: bool) -> np.ndarray:
        """All binary joins (or meets); ``-1`` where none exists."""
        le = self.leq if upper else self.leq.T
        lef = le.astype(np.float64)
        out = np.full((self.n, self.n), UNDEF, dtype=np.int64)
        for x in range(self.n):
            common = le[x][None, :] & le  # row y: common upper bounds of x, y
            sizes = common.sum(axis=1)
            below = common.astype(np.float64) @ lef.T  # [y, m] = #{u in common: m <= u}
            least = common & (below == sizes[:, None])
            has = least.any(axis=1)
            out[x, has] = least[has].argmax(axis=1)
        return out

    @cached_property
    def join_table(self) -> np.ndarray:
        return _frozen(self._bound_table(True))

    @cached_property
    def meet_table(self) -> np.ndarray:
        return _frozen(self._bound_table(False))

    def covers(self) -> list[tuple[int, int]]:
        lt = self.leq & ~np.eye(self.n, dtype=bool)
        between = (lt.astype(np.int64) @ lt.astype(np.int64)) > 0
        return [tuple(map(int, p)) for p in np.argwhere(lt & ~between)]

    def __repr__(self) -> str:
        return f"{type(self).__name__}({self.name or ''} n={self.n})"


class EffectAlgebra(FinitePoset):
    """A finite effect algebra stored as a partial sum table.

    The constructor only checks structure (identifiers, table shape,
    ``zero != one``); the axioms are checked by :func:`validate_effect_axioms`.
    """

    def __init__(self, names: Iterable[str], zero: str | int, one: str | int,
                 table: np.ndarray, name: str = "", provenance: tuple | None = None):
        super().__init__(names, name=name)
        self.zero = self.idx(zero)
        self.one = self.idx(one)
        if self.zero == self.one:
            raise StructureError("zero and one must differ")
        table = np.array(table, dtype=np.int64)
        if table.shape != (self.n, self.n):
            raise StructureError("sum table has the wrong shape")
        if ((table < UNDEF) | (table >= self.n)).any():
            raise StructureError("sum table refers to unknown elements")
        self.table = _frozen(table)
        self.provenance = provenance

    @classmethod
    def from_sums(cls, elements: Sequence[str], zero: str, one: str,
                  sums: Iterable[tuple[str, str, str]], close: bool = True,
                  name: str = "", **kw: Any) -> "EffectAlgebra":
        """Build from ``(x, y, x+y)`` triples.

        With ``close`` each pair listed in one order is also entered in the
        other, unless that order was given explicitly (a conflicting entry is
        left for the (E1) check to report).
        """
        poset = FinitePoset(elements)
        n = poset.n
        table = np.full((n, n), UNDEF, dtype=np.int64)
        given = np.zeros((n, n), dtype=bool)
        for x, y, z in sums:
            i, j, k = poset.idx(x), poset.idx(y), poset.idx(z)
            if given[i, j] and table[i, j] != k:
                raise StructureError(f"{x}+{y} given twice with different results")
            table[i, j] = k
            given[i, j] = True
        if close:
            fill = given.T & ~given
            table[fill] = table.T[fill]
        return cls(elements, zero, one, table, name=name, **kw)

    # -- derived structure -------------------------------------------------

    @cached_property
    def supp(self) -> np.ndarray:
        hits = self.table == self.one
        counts = hits.sum(axis=1)
        if (counts != 1).any():
            bad = self.names[int(np.flatnonzero(counts != 1)[0])]
            raise StructureError(f"element {bad} has no unique supplement (E3)")
        return _frozen(hits.argmax(axis=1))

    @cached_property
    def leq(self) -> np.ndarray:
        le = np.zeros((self.n, self.n), dtype=bool)
        rows, cols = np.nonzero(self.table >= 0)
        le[rows, self.table[rows, cols]] = True
        return _frozen(le)

    @cached_property
    def prod_table(self) -> np.ndarray:
        s = self.supp
        t = self.table[np.ix_(s, s)]
        return _frozen(np.where(t >= 0, s[np.maximum(t, 0)], UNDEF))

    @cached_property
    def diff_table(self) -> np.ndarray:
        """``diff[y, x] = y - x`` where ``x <= y``."""
        out = np.full((self.n, self.n), UNDEF, dtype=np.int64)
        rows, cols = np.nonzero(self.table >= 0)
        out[self.table[rows, cols], rows] = cols
        return _frozen(out)

    # -- value protocol (indices) ------------------------------------------

    @property
    def zero_value(self) -> int:
        return self.zero

    @property
    def one_value(self) -> int:
        return self.one

    def plus_value(self, u: int, v: int) -> int | None:
        r = int(self.table[u, v])
        return None if r == UNDEF else r

    def prod_value(self, u: int, v: int) -> int | None:
        r = int(self.prod_table[u, v])
        return None if r == UNDEF else r

    def supp_value(self, u: int) -> int:
        return int(self.supp[u])

    def _same(self, other: Any) -> bool:
        return (type(self) is type(other) and self.names == other.names
                and self.zero == other.zero and self.one == other.one
                and np.array_equal(self.table, other.table))

    def __eq__(self, other: Any) -> bool:
        return self._same(other)

    def __hash__(self) -> int:
        return hash((self.names, self.zero, self.one, self.table.tobytes()))


class QEffectAlgebra(EffectAlgebra):
    """An effect algebra with the unary maps ``q`` and ``d``."""

    def __init__(self, names: Iterable[str], zero: str | int, one: str | int,
                 table: np.ndarray, q: Sequence[int], d: Sequence[int],
                 name: str = "", provenance: tuple | None = None):
        super().__init__(names, zero, one, table, name=name, provenance=provenance)
        q = np.array(q, dtype=np.int64)
        d = np.array(d, dtype=np.int64)
        for label, m in (("q", q), ("d", d)):
            if m.shape != (self.n,) or ((m < 0) | (m >= self.n)).any():
                raise StructureError(f"map {label} is not total on the carrier")
        self.q = _frozen(q)
        self.d = _frozen(d)

    @classmethod
    def from_sums(cls, elements: Sequence[str], zero: str, one: str,
                  sums: Iterable[tuple[str, str, str]], close: bool = True,
                  name: str = "", q: Mapping[str, str] | None = None,
                  d: Mapping[str, str] | None = None, **kw: Any) -> "QEffectAlgebra":
        base = EffectAlgebra.from_sums(elements, zero, one, sums, close=close)
        return with_qd(base, q or {}, d or {}, name=name, **kw)

    def q_value(self, u: int) -> int:
        return int(self.q[u])

    def d_value(self, u: int) -> int:
        return int(self.d[u])

    def __eq__(self, other: Any) -> bool:
        return (self._same(other) and np.array_equal(self.q, other.q)
                and np.array_equal(self.d, other.d))

    def __hash__(self) -> int:
        return hash((super().__hash__(), self.q.tobytes(), self.d.tobytes()))


def with_qd(base: EffectAlgebra, q: Mapping[str, str], d: Mapping[str, str],
            name: str = "", **kw: Any) -> QEffectAlgebra:
    """Attach ``q``/``d`` (given by element names) to an effect algebra."""
    missing = [x for x in base.names if x not in q or x not in d]
    if missing:
        raise StructureError(f"maps q/d are not total; missing {missing[:5]}")
    return QEffectAlgebra(base.names, base.zero, base.one, base.table,
                          [base.idx(q[x]) for x in base.names],
                          [base.idx(d[x]) for x in base.names],
                          name=name or base.name, provenance=kw.get("provenance", base.provenance))


# -- name-level partial operations -------------------------------------------

def supplement(algebra: EffectAlgebra, x: str) -> str:
    return algebra.names[algebra.supp[algebra.idx(x)]]


def partial_sum(algebra: EffectAlgebra, x: str, y: str) -> str | None:
    r = algebra.plus_value(algebra.idx(x), algebra.idx(y))
    return None if r is None else algebra.names[r]


def partial_diff(algebra: EffectAlgebra, x: str, y: str) -> str | None:
    """``y - x`` when ``x <= y``, else ``None``."""
    r = int(algebra.diff_table[algebra.idx(y), algebra.idx(x)])
    return None if r == UNDEF else algebra.names[r]


def partial_prod(algebra: EffectAlgebra, x: str, y: str) -> str | None:
    """``x · y = (x' + y')'`` when ``x' <= y``, else ``None``."""
    r = algebra.prod_value(algebra.idx(x), algebra.idx(y))
    return None if r is None else algebra.names[r]


# -- validation --------------------------------------------------------------

def _w(algebra: EffectAlgebra, **idx: int) -> dict[str, str]:
    return {k: algebra.names[int(v)] for k, v in idx.items()}


def validate_effect_axioms(algebra: EffectAlgebra, cap: int = CORE_CAP) -> Report:
    """Check (E1)-(E4) exhaustively, plus that the induced order is a bounded
    partial order."""
    if algebra.n > cap:
        raise CapExceeded(f"carrier has {algebra.n} elements; core validation cap is {cap}")
    rep = Report(f"effect axioms of {algebra.name or 'algebra'}")
    t, n = algebra.table, algebra.n
    dfn = t >= 0

    bad = np.argwhere(dfn & (t != t.T))
    rep.check("E1 commutativity", len(bad) == 0,
              _w(algebra, x=bad[0][0], y=bad[0][1]) if len(bad) else None)

    safe = np.maximum(t, 0)
    yz = t  # [y, z]
    x_yz = np.where(yz[None, :, :] >= 0, t[:, safe][:, :, :], UNDEF)  # [x, y, z] = x+(y+z)
    x_yz = np.where((yz[None] >= 0) & (x_yz >= 0), x_yz, UNDEF)
    xy = t  # [x, y]
    xy_z = np.where(xy[:, :, None] >= 0, t[safe, :], UNDEF)  # [x, y, z] = (x+y)+z
    premise = x_yz >= 0
    concl = (xy[:, :, None] >= 0) & (xy_z >= 0) & (xy_z == x_yz)
    bad = np.argwhere(premise & ~concl)
    rep.check("E2 associativity", len(bad) == 0,
              _w(algebra, x=bad[0][0], y=bad[0][1], z=bad[0][2]) if len(bad) else None)

    counts = (t == algebra.one).sum(axis=1)
    bad = np.flatnonzero(counts != 1)
    rep.check("E3 unique supplement", len(bad) == 0,
              {**_w(algebra, x=bad[0]), "supplements": int(counts[bad[0]])} if len(bad) else None)

    bad = [x for x in range(n) if t[x, algebra.one] >= 0 and x != algebra.zero]
    rep.check("E4 x+1 defined forces x=0", not bad, _w(algebra, x=bad[0]) if bad else None)

    if rep.ok:
        le = algebra.leq
        rep.check("induced order is a partial order", algebra.is_partial_order())
        rep.check("0 <= x <= 1", bool(le[algebra.zero].all() and le[:, algebra.one].all()))
    return rep


def validate_q_axioms(algebra: QEffectAlgebra, cap: int = CORE_CAP) -> Report:
    """Check (Q1)-(Q5); the effect axioms are checked first and, if they fail,
    the q-axioms are reported as inapplicable."""
    if not isinstance(algebra, QEffectAlgebra):
        raise StructureError("no q/d maps on this algebra")
    base = validate_effect_axioms(algebra, cap)
    rep = Report(f"q-effect axioms of {algebra.name or 'algebra'}")
    rep.checks.update(base.checks)
    rep.witnesses.extend(base.witnesses)
    if not base.ok:
        return rep
    q, d, s, le, pr = algebra.q, algebra.d, algebra.supp, algebra.leq, algebra.prod_table
    n = algebra.n

    bad = np.flatnonzero(d[s] != s[q])
    rep.check("Q1 d(x')=q(x)'", len(bad) == 0, _w(algebra, x=bad[0]) if len(bad) else None)
    rep.check("Q2 d(0)=0=q(0)", d[algebra.zero] == algebra.zero and q[algebra.zero] == algebra.zero,
              {"d(0)": algebra.names[d[algebra.zero]], "q(0)": algebra.names[q[algebra.zero]]})
    bad = np.argwhere(le & ~le[np.ix_(d, d)])
    rep.check("Q3 d order-preserving", len(bad) == 0,
              _w(algebra, x=bad[0][0], y=bad[0][1]) if len(bad) else None)
    idx = np.arange(n)
    self_prod = pr[idx, idx]
    bad = np.flatnonzero(le[s, idx] & (self_prod != d))
    rep.check("Q4 x'<=x implies x.x=d(x)", len(bad) == 0, _w(algebra, x=bad[0]) if len(bad) else None)
    # Q5 over [x, y, z]; y' <= x makes x.y defined
    zx = le.T  # [x, z]: z <= x
    yx = le[s].T  # [x, y]: y' <= x
    prem = zx[:, None, :] & zx[None, :, :] & yx[:, :, None]
    target = np.where(pr >= 0, pr, 0)
    concl = le[d[None, None, :], target[:, :, None]]
    bad = np.argwhere(prem & ~concl)
    rep.check("Q5 d(z) <= x.y", len(bad) == 0,
              _w(algebra, x=bad[0][0], y=bad[0][1], z=bad[0][2]) if len(bad) else None)
    return rep


def derive_order(algebra: EffectAlgebra) -> "OrderRelation":
    return OrderRelation(algebra.names, algebra.leq)


@dataclass(frozen=True, eq=False)
class OrderRelation:
    names: tuple[str, ...]
    matrix: np.ndarray

    def leq(self, x: str, y: str) -> bool:
        return bool(self.matrix[self.names.index(x), self.names.index(y)])

    def __eq__(self, other: Any) -> bool:
        return (isinstance(other, OrderRelation) and self.names == other.names
                and np.array_equal(self.matrix, other.matrix))

    def converse(self) -> "OrderRelation":
        return OrderRelation(self.names, self.matrix.T.copy())

    def covers(self) -> list[tuple[str, str]]:
        p = FinitePoset(self.names, self.matrix)
        return [(self.names[a], self.names[b]) for a, b in p.covers()]

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.names[a], self.names[b]) for a, b in np.argwhere(self.matrix)]


# -- duals, lattices, classification ------------------------------------------

def dual(algebra: EffectAlgebra) -> EffectAlgebra:
    """Same carrier with ``·`` as sum, 0/1 swapped and, for q-effect algebras,
    ``q`` and ``d`` swapped."""
    name = f"{algebra.name}^op" if algebra.name else ""
    if isinstance(algebra, QEffectAlgebra):
        return QEffectAlgebra(algebra.names, algebra.one, algebra.zero, algebra.prod_table,
                              algebra.d, algebra.q, name=name)
    return EffectAlgebra(algebra.names, algebra.one, algebra.zero, algebra.prod_table, name=name)


def _power_info(algebra: EffectAlgebra) -> tuple[list[EffectAlgebra], int] | None:
    prov = algebra.provenance
    if prov and prov[0] == "product":
        return list(prov[1]), len(prov[1])
    return None


def classify(algebra: EffectAlgebra, cap: int = CORE_CAP) -> Report:
    """Lattice / MV / linear classification with witnesses.

    Direct products are classified factorwise, which keeps large powers
    cheap; other algebras are scanned directly up to ``cap`` elements.
    """
    rep = Report(f"classification of {algebra.name or 'algebra'}")
    info = _power_info(algebra)
    if info is not None and algebra.n > cap:
        factors, k = info
        parts = [classify(f, cap) for f in factors]
        is_lattice = all(p.details["is_lattice"] for p in parts)
        is_mv = all(p.details["is_mv"] for p in parts)
        is_linear = k == 1 and parts[0].details["is_linear"]
        rep.details.update(is_lattice=is_lattice, is_mv=is_mv, is_linear=is_linear, by_factors=True)
        return rep
    if algebra.n > cap:
        raise CapExceeded(f"carrier has {algebra.n} elements; classification cap is {cap}")
    le = algebra.leq
    ordered = sorted(range(algebra.n), key=lambda i: algebra.names[i])
    jt, mt = algebra.join_table, algebra.meet_table
    no_join = next(((a, b) for a in ordered for b in ordered if jt[a, b] == UNDEF), None)
    no_meet = next(((a, b) for a in ordered for b in ordered if mt[a, b] == UNDEF), None)
    is_lattice = no_join is None and no_meet is None
    mv_fail = None
    if is_lattice:
        s = algebra.supp
        mv_fail = next(((a, b) for a in ordered for b in ordered
                        if mt[a, b] == algebra.zero and not le[a, s[b]]), None)
    is_mv = is_lattice and mv_fail is None
    is_linear = bool((le | le.T).all())
    rep.details.update(is_lattice=is_lattice, is_mv=is_mv, is_linear=is_linear)
    if no_join is not None:
        rep.details["no_join"] = [algebra.names[no_join[0]], algebra.names[no_join[1]]]
    if no_meet is not None:
        rep.details["no_meet"] = [algebra.names[no_meet[0]], algebra.names[no_meet[1]]]
    if mv_fail is not None:
        rep.details["mv_failure"] = [algebra.names[mv_fail[0]], algebra.names[mv_fail[1]]]
    return rep


def lattice_oplus(algebra: EffectAlgebra) -> np.ndarray:
    """``x ⊕ y = x + (y ∧ x')`` on a lattice effect algebra."""
    mt = algebra.meet_table
    if (mt == UNDEF).any():
        raise Inapplicable("the algebra is not lattice ordered")
    n = algebra.n
    idx = np.arange(n)
    m = mt[idx[None, :], algebra.supp[:, None]]  # [x, y] = y ∧ x'
    return _frozen(algebra.table[idx[:, None], m])


def lattice_odot(algebra: EffectAlgebra) -> np.ndarray:
    s = algebra.supp
    return _frozen(s[lattice_oplus(algebra)[np.ix_(s, s)]])


def lattice_qd(algebra: EffectAlgebra, name: str = "") -> QEffectAlgebra:
    """The q-effect algebra with ``q(x) = x ⊕ x`` and ``d(x) = x ⊙ x``."""
    op, od = lattice_oplus(algebra), lattice_odot(algebra)
    idx = np.arange(algebra.n)
    return QEffectAlgebra(algebra.names, algebra.zero, algebra.one, algebra.table,
                          op[idx, idx], od[idx, idx], name=name or algebra.name,
                          provenance=algebra.provenance)


# -- maps ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AlgebraMap:
    """A total map; ``table[i]`` is the image of source element ``i`` as a
    target value (an index, or a Fraction when the target is ``UNIT``)."""

    source: Any
    target: Any
    table: tuple

    def __post_init__(self) -> None:
        if len(self.table) != self.source.n:
            raise StructureError("map is not total on its source")

    @classmethod
    def from_names(cls, source: Any, target: Any, mapping: Mapping[str, Any]) -> "AlgebraMap":
        missing = [x for x in source.names if x not in mapping]
        if missing:
            raise StructureError(f"map is not total; missing {missing[:5]}")
        if isinstance(target, UnitInterval):
            from .unit import unit
            return cls(source, target, tuple(unit(mapping[x]) for x in source.names))
        return cls(source, target, tuple(target.idx(mapping[x]) for x in source.names))

    @classmethod
    def identity(cls, algebra: Any) -> "AlgebraMap":
        return cls(algebra, algebra, tuple(range(algebra.n)))

    def __call__(self, x: Any) -> Any:
        return self.table[self.source.idx(x)]

    def image(self, x: str) -> Any:
        v = self(x)
        return v if isinstance(self.target, UnitInterval) else self.target.names[v]

    def as_dict(self) -> dict[str, Any]:
        return {x: self.image(x) for x in self.source.names}

    def array(self) -> np.ndarray:
        return np.asarray(self.table, dtype=object if isinstance(self.target, UnitInterval) else np.int64)

    def then(self, other: "AlgebraMap") -> "AlgebraMap":
        """``other ∘ self``."""
        return AlgebraMap(self.source, other.target, tuple(other.table[v] for v in self.table))

    def __eq__(self, other: Any) -> bool:
        return (isinstance(other, AlgebraMap) and self.source is other.source
                and self.target is other.target and tuple(self.table) == tuple(other.table))

    __hash__ = object.__hash__


def supplement_map(algebra: EffectAlgebra, target: EffectAlgebra | None = None) -> AlgebraMap:
    """``'`` viewed as a map into ``target`` (by default the dual algebra)."""
    return AlgebraMap(algebra, target if target is not None else dual(algebra),
                      tuple(int(v) for v in algebra.supp))


def check_morphism(m: AlgebraMap, kind: str = "effect") -> Report:
    """Morphism flags of ``m`` for ``kind`` in ``poset | effect | q-effect``;
    ``details`` carries ``is_morphism`` and ``is_order_reflecting``."""
    if kind not in ("poset", "effect", "q-effect"):
        raise ValueError(f"unknown morphism kind {kind!r}")
    src, tgt, f = m.source, m.target, m.table
    rep = Report(f"{kind} morphism check")
    n = src.n
    le = src.leq
    for a, b in itertools.product(range(n), repeat=2):
        if le[a, b]:
            rep.check("order-preserving", tgt.leq_value(f[a], f[b]),
                      {"a": src.names[a], "b": src.names[b]})
    if kind in ("effect", "q-effect"):
        rep.check("preserves 0", f[src.zero] == tgt.zero_value, {"f(0)": tgt.label(f[src.zero])})
        rep.check("preserves 1", f[src.one] == tgt.one_value, {"f(1)": tgt.label(f[src.one])})
        for a, b in np.argwhere(src.table >= 0):
            s = tgt.plus_value(f[a], f[b])
            rep.check("preserves +", s is not None and s == f[src.table[a, b]],
                      {"a": src.names[a], "b": src.names[b]})
    if kind == "q-effect":
        for a in range(n):
            rep.check("preserves q", tgt.q_value(f[a]) == f[src.q[a]], {"a": src.names[a]})
            rep.check("preserves d", tgt.d_value(f[a]) == f[src.d[a]], {"a": src.names[a]})
    reflecting = all(le[a, b] or not tgt.leq_value(f[a], f[b])
                     for a, b in itertools.product(range(n), repeat=2))
    rep.details["is_morphism"] = rep.ok
    rep.details["is_order_reflecting"] = bool(reflecting and rep.checks.get("order-preserving", True))
    return rep


@dataclass
class FamilyResult:
    ok: bool
    product_map: dict[str, tuple]
    witness: tuple[str, str] | None
    note: str = ""

    def __bool__(self) -> bool:
        return self.ok


def check_order_reflecting_family(maps: Sequence[AlgebraMap], source: Any = None) -> FamilyResult:
    """Condition (i): pointwise dominance under every map forces order.

    Also evaluates condition (ii) -- order reflection of the induced map into
    the product -- on its own and asserts both agree.
    """
    if not maps:
        if source is None:
            raise ValueError("an empty family needs its source")
        le = source.leq
        ok = bool(le.all())
        bad = None if ok else next((a, b) for a, b in itertools.product(range(source.n), repeat=2)
                                   if not le[a, b])
        return FamilyResult(ok, {x: () for x in source.names},
                            None if bad is None else (source.names[bad[0]], source.names[bad[1]]),
                            "empty family: reflects order only on a one-element carrier")
    src = maps[0].source
    if any(m.source is not src for m in maps):
        raise ValueError("maps must share their source")
    n = src.n
    h = {x: tuple(m.table[i] for m in maps) for i, x in enumerate(src.names)}

    witness = None
    for a, b in itertools.product(range(n), repeat=2):
        dominated = all(m.target.leq_value(m.table[a], m.table[b]) for m in maps)
        if dominated and not src.leq[a, b]:
            witness = (src.names[a], src.names[b])
            break
    cond_i = witness is None

    # (ii): materialize the image inside the product order and test reflection
    images = sorted(set(h.values()), key=repr)
    pos = {v: i for i, v in enumerate(images)}
    prod_le = np.array([[all(m.target.leq_value(u[t], v[t]) for t, m in enumerate(maps))
                         for v in images] for u in images], dtype=bool)
    hv = [pos[h[x]] for x in src.names]
    cond_ii = all(src.leq[a, b] or not prod_le[hv[a], hv[b]]
                  for a, b in itertools.product(range(n), repeat=2))
    if cond_i != cond_ii:
        raise AssertionError("conditions (i) and (ii) disagree")
    return FamilyResult(cond_i, h, witness)


# -- products and powers ---------------------------------------------------------

def direct_product(*factors: EffectAlgebra, name: str = "", cap: int = POWER_CAP) -> EffectAlgebra:
    """Componentwise product; element ``(x1,...,xk)`` has index given by
    mixed radix over the factors' indices."""
    if not factors:
        raise ValueError("need at least one factor")
    sizes = [f.n for f in factors]
    total = int(np.prod(sizes, dtype=object))
    if total > cap:
        raise CapExceeded(f"product would have {total} elements (cap {cap})")
    k = len(factors)
    coords = np.array(list(itertools.product(*[range(s) for s in sizes])), dtype=np.int64).reshape(total, k)
    radix = np.array([int(np.prod(sizes[i + 1:], dtype=np.int64)) for i in range(k)], dtype=np.int64)
    names = ["(" + ",".join(f.names[c] for f, c in zip(factors, row)) + ")" for row in coords]
    comp = np.empty((total, total, k), dtype=np.int64)
    for i, f in enumerate(factors):
        comp[:, :, i] = f.table[coords[:, i][:, None], coords[:, i][None, :]]
    ok = (comp >= 0).all(axis=2)
    table = np.where(ok, (np.maximum(comp, 0) * radix).sum(axis=2), UNDEF)
    zero = int((np.array([f.zero for f in factors]) * radix).sum())
    one = int((np.array([f.one for f in factors]) * radix).sum())
    prov = ("product", tuple(factors), coords, radix)
    if all(isinstance(f, QEffectAlgebra) for f in factors):
        q = sum(f.q[coords[:, i]] * radix[i] for i, f in enumerate(factors))
        d = sum(f.d[coords[:, i]] * radix[i] for i, f in enumerate(factors))
        return QEffectAlgebra(names, zero, one, table, q, d, name=name, provenance=prov)
    return EffectAlgebra(names, zero, one, table, name=name, provenance=prov)


def direct_power(algebra: EffectAlgebra, T: int | Sequence[Any], cap: int = POWER_CAP,
                 name: str = "") -> EffectAlgebra:
    """``algebra^T`` with componentwise operations; ``o(t)=0`` and ``j(t)=1``."""
    k = T if isinstance(T, int) else len(T)
    if k < 1:
        raise ValueError("the index set must be non-empty")
    if algebra.n ** k > cap:
        raise CapExceeded(f"{algebra.n}^{k} elements exceeds the cap {cap}")
    base = algebra.name or "A"
    return direct_product(*([algebra] * k), name=name or f"{base}^{k}", cap=cap)


def coordinates(algebra: EffectAlgebra) -> np.ndarray:
    """Factor indices of each element of a direct product."""
    if not _power_info(algebra):
        raise ValueError("not a direct product")
    return algebra.provenance[2]


def is_isomorphic(a: EffectAlgebra, b: EffectAlgebra, with_qd: bool = True) -> bool:
    """Backtracking search for a bijection preserving 0, 1, the partial sum and,
    when both carry them, ``q`` and ``d``."""
    if a.n != b.n:
        return False
    n = a.n
    use_qd = with_qd and isinstance(a, QEffectAlgebra) and isinstance(b, QEffectAlgebra)

    def profile(x: EffectAlgebra, i: int) -> tuple:
        return (int(x.leq[:, i].sum()), int(x.leq[i].sum()), int((x.table[i] >= 0).sum()))

    pa = [profile(a, i) for i in range(n)]
    pb = [profile(b, i) for i in range(n)]
    if sorted(pa) != sorted(pb):
        return False
    order = sorted(range(n), key=lambda i: -int((a.table[i] >= 0).sum()))
    fwd = [-1] * n
    used = [False] * n

    def consistent(i: int) -> bool:
        j = fwd[i]
        for k in range(n):
            if fwd[k] < 0:
                continue
            for x, y in ((i, k), (k, i)):
                s = a.table[x, y]
                t = b.table[fwd[x], fwd[y]]
                if (s < 0) != (t < 0):
                    return False
                if s >= 0 and fwd[s] >= 0 and fwd[s] != t:
                    return False
            if use_qd:
                for m_a, m_b in ((a.q, b.q), (a.d, b.d)):
                    if m_a[k] == i and m_b[fwd[k]] != j:
                        return False
                    if m_a[i] == k and m_b[j] != fwd[k]:
                        return False
        return True

    def go(pos: int) -> bool:
        if pos == n:
            return True
        i = order[pos]
        for j in range(n):
            if used[j] or pa[i] != pb[j]:
                continue
            if (i == a.zero) != (j == b.zero) or (i == a.one) != (j == b.one):
                continue
            fwd[i], used[j] = j, True
            if consistent(i) and go(pos + 1):
                return True
            fwd[i], used[j] = -1, False
        return False

    return go(0)


def values_as_fractions(values: Iterable[Any]) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


__all__ = [
    "UNDEF", "CORE_CAP", "POWER_CAP", "StructureError", "CapExceeded", "Inapplicable",
    "FinitePoset", "EffectAlgebra", "QEffectAlgebra", "with_qd", "supplement", "partial_sum",
    "partial_diff", "partial_prod", "validate_effect_axioms", "validate_q_axioms",
    "derive_order", "OrderRelation", "dual", "classify", "lattice_oplus", "lattice_odot",
    "lattice_qd", "AlgebraMap", "supplement_map", "check_morphism", "FamilyResult",
    "check_order_reflecting_family", "direct_product", "direct_power", "coordinates",
    "is_isomorphic", "UNIT",
]
