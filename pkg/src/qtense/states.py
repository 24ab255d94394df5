"""States, q-states and the q-semi-state hierarchy on finite q-effect algebras.

A valuation is a vector of Fractions indexed like the carrier. Checks scale
the vector to integers once and run vectorized over the whole carrier, so
they stay exact and fast on algebras with a few hundred elements.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .algebra import (CapExceeded, EffectAlgebra, Inapplicable, QEffectAlgebra,
                      classify)
from .polytope import extreme_points, feasible_point, solve_equalities, vertices
from .report import Report
from .unit import ONE, ZERO, unit

STATE_CAP = 16
KINDS = ("state", "q_state", "q_semi_state", "jauch_piron", "strong")


@dataclass(frozen=True, eq=False)
class StateVector:
    """Valuation ``s`` with ``values[i] = s(algebra.names[i])``.

    ``flags`` records what has been checked: True, False or absent.
    """

    algebra: EffectAlgebra
    values: tuple[Fraction, ...]
    flags: Mapping[str, bool] = field(default_factory=dict)
    label: str = ""

    def __post_init__(self) -> None:
        if len(self.values) != self.algebra.n:
            raise ValueError("valuation is not total on the carrier")

    @classmethod
    def from_mapping(cls, algebra: EffectAlgebra, mapping: Mapping[str, Any], label: str = "") -> "StateVector":
        missing = [x for x in algebra.names if x not in mapping]
        if missing:
            raise ValueError(f"valuation is not total; missing {missing[:5]}")
        return cls(algebra, tuple(unit(mapping[x]) for x in algebra.names), label=label)

    @classmethod
    def constant(cls, algebra: EffectAlgebra, value: Any = 1, label: str = "") -> "StateVector":
        return cls(algebra, (unit(value),) * algebra.n, label=label)

    def __call__(self, x: str | int) -> Fraction:
        return self.values[self.algebra.idx(x)]

    def as_dict(self) -> dict[str, Fraction]:
        return dict(zip(self.algebra.names, self.values))

    def flagged(self, **flags: bool) -> "StateVector":
        return StateVector(self.algebra, self.values, {**self.flags, **flags}, self.label)

    def kind(self, name: str) -> str:
        v = self.flags.get(name)
        return "unchecked" if v is None else ("yes" if v else "no")

    def scaled(self) -> tuple[np.ndarray, int]:
        """Integer vector ``v`` and scale ``L`` with ``values = v / L``."""
        den = 1
        for x in self.values:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in self.values]
        return np.array(ints, dtype=np.int64 if den < 2**40 else object), den

    def __eq__(self, other: Any) -> bool:
        return (isinstance(other, StateVector) and other.algebra is self.algebra
                and other.values == self.values)

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.values))

    def __le__(self, other: "StateVector") -> bool:
        return all(a <= b for a, b in zip(self.values, other.values))


@dataclass(frozen=True, eq=False)
class StateSet:
    algebra: EffectAlgebra
    members: tuple[StateVector, ...]
    provenance: str = "user"  # extreme | user | morphisms

    def __post_init__(self) -> None:
        if any(s.algebra is not self.algebra for s in self.members):
            raise ValueError("states must share the algebra")
        if len({s.values for s in self.members}) != len(self.members):
            raise ValueError("duplicate states")

    @classmethod
    def of(cls, algebra: EffectAlgebra, members: Iterable[StateVector], provenance: str = "user") -> "StateSet":
        seen, out = set(), []
        for s in members:
            if s.values not in seen:
                seen.add(s.values)
                out.append(s)
        out.sort(key=lambda s: s.values)
        return cls(algebra, tuple(out), provenance)

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __getitem__(self, i: int) -> StateVector:
        return self.members[i]

    def matrix(self) -> np.ndarray:
        """Object array (states x elements) of Fractions."""
        return np.array([s.values for s in self.members], dtype=object).reshape(len(self.members), self.algebra.n)


def _as_vector(algebra: EffectAlgebra, values: Any) -> StateVector:
    if isinstance(values, StateVector):
        return values
    if isinstance(values, Mapping):
        return StateVector.from_mapping(algebra, values)
    return StateVector(algebra, tuple(unit(v) for v in values))


def _w(algebra: EffectAlgebra, s: StateVector, **idx: int) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for k, i in idx.items():
        out[k] = algebra.names[int(i)]
        out[f"s({k})"] = s.values[int(i)]
    return out


def _first(mask: np.ndarray) -> tuple | None:
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


# -- individual checks -----------------------------------------------------------

def _q_laws(algebra: QEffectAlgebra, v: np.ndarray, L: int) -> tuple[np.ndarray, np.ndarray]:
    twice = 2 * v
    q_ok = v[algebra.q] == np.minimum(twice, L)
    d_ok = v[algebra.d] == np.maximum(twice - L, 0)
    return q_ok, d_ok


def check_state(algebra: EffectAlgebra, values: Any) -> Report:
    """``state`` and ``q_state`` flags with witnesses; the flagged vector is in
    ``details["vector"]``."""
    s = _as_vector(algebra, values)
    v, L = s.scaled()
    rep = Report("state check")
    rep.check("s(0)=0", v[algebra.zero] == 0, _w(algebra, s, x=algebra.zero))
    rep.check("s(1)=1", v[algebra.one] == L, _w(algebra, s, x=algebra.one))
    t = algebra.table
    i, j = np.nonzero(t >= 0)
    bad = np.flatnonzero(v[i] + v[j] != v[t[i, j]])
    rep.check("additive", len(bad) == 0,
              _w(algebra, s, x=i[bad[0]], y=j[bad[0]]) if len(bad) else None)
    is_state = rep.ok
    is_q = is_state
    if isinstance(algebra, QEffectAlgebra):
        q_ok, d_ok = _q_laws(algebra, v, L)
        for label, ok in (("s(q(x))=s(x)+s(x) truncated", q_ok), ("s(d(x))=s(x).s(x)", d_ok)):
            bad = np.flatnonzero(~ok)
            rep.check(label, len(bad) == 0, _w(algebra, s, x=bad[0]) if len(bad) else None)
        is_q = is_state and bool(q_ok.all() and d_ok.all())
    else:
        is_q = False
    rep.details.update(state=is_state, q_state=is_q)
    rep.details["vector"] = s.flagged(state=is_state, q_state=is_q)
    return rep


def _pairwise_leq(v: np.ndarray) -> np.ndarray:
    """``[a, b]``: ``v[a] <= v[b]``; the scale cancels."""
    return np.asarray(v[:, None] <= v[None, :], dtype=bool)


def _unit_set(v: np.ndarray, L: int) -> np.ndarray:
    return np.array([x == L for x in v], dtype=bool)


def check_semi_state(algebra: QEffectAlgebra, values: Any, level: str = "q_semi") -> Report:
    """Items (i)-(iv); ``jauch_piron`` adds (v), ``strong`` adds (vi)."""
    if level not in ("q_semi", "jauch_piron", "strong"):
        raise ValueError(f"unknown level {level!r}")
    s = _as_vector(algebra, values)
    v, L = s.scaled()
    le = algebra.leq
    rep = Report(f"{level} check")
    rep.check("(i) s(1)=1", v[algebra.one] == L, _w(algebra, s, x=algebra.one))
    mono = _pairwise_leq(v)
    hit = _first(le & ~mono)
    rep.check("(ii) monotone", hit is None, _w(algebra, s, x=hit[0], y=hit[1]) if hit else None)
    q_ok, d_ok = _q_laws(algebra, v, L)
    bad = np.flatnonzero(~d_ok)
    rep.check("(iii) s(x).s(x)=s(d(x))", len(bad) == 0, _w(algebra, s, x=bad[0]) if len(bad) else None)
    bad = np.flatnonzero(~q_ok)
    rep.check("(iv) s(x)+s(x)=s(q(x)) truncated", len(bad) == 0,
              _w(algebra, s, x=bad[0]) if len(bad) else None)
    semi = rep.ok
    flags = {"q_semi_state": semi}
    U = _unit_set(v, L)
    if level in ("jauch_piron", "strong"):
        ok, wit = _jp(algebra, U)
        rep.check("(v) Jauch-Piron", ok, {"x": wit[0], "y": wit[1]} if wit else None)
        flags["jauch_piron"] = semi and ok
    if level == "strong":
        ok, wit = _strong(algebra, U)
        rep.check("(vi) strong", ok, {"x": wit[0], "y": wit[1]} if wit else None)
        flags["strong"] = semi and ok
    rep.details.update(flags)
    rep.details["vector"] = s.flagged(**flags)
    return rep


def _jp(algebra: EffectAlgebra, U: np.ndarray) -> tuple[bool, tuple[str, str] | None]:
    idx = np.flatnonzero(U)
    lower = algebra.leq[np.ix_(idx, idx)].astype(np.float64)  # [z, x]: z <= x, both in U
    common = lower.T @ lower  # [x, y]: number of shared unit lower bounds (exact in float)
    hit = _first(common == 0)
    return hit is None, (algebra.names[idx[hit[0]]], algebra.names[idx[hit[1]]]) if hit else None


def _strong(algebra: EffectAlgebra, U: np.ndarray) -> tuple[bool, tuple[str, str] | None]:
    pr = algebra.prod_table
    defined = pr >= 0
    hit = _first(U[:, None] & U[None, :] & defined & ~U[np.maximum(pr, 0)])
    return hit is None, (algebra.names[hit[0]], algebra.names[hit[1]]) if hit else None


def is_q_state(algebra: EffectAlgebra, s: Any) -> bool:
    return bool(check_state(algebra, s).details["q_state"])


def is_jauch_piron(algebra: QEffectAlgebra, s: Any) -> bool:
    return bool(check_semi_state(algebra, s, "jauch_piron").details["jauch_piron"])


def verify_jp_implies_strong(algebra: QEffectAlgebra, states: Iterable[Any]) -> Report:
    """Every Jauch-Piron member is also strong."""
    rep = Report("Jauch-Piron implies strong")
    tested = 0
    for s in states:
        r = check_semi_state(algebra, s, "strong")
        if r.details["jauch_piron"]:
            tested += 1
            rep.check("strong", r.details["strong"], {"state": _as_vector(algebra, s).values})
    rep.details["jauch_piron_members"] = tested
    if tested == 0:
        rep.notes.append("no Jauch-Piron members; vacuously true")
    return rep


# -- meets and joins ---------------------------------------------------------------

def meet_semistates(states: Sequence[StateVector], algebra: EffectAlgebra | None = None) -> StateVector:
    """Pointwise minimum; the meet of nothing is the constant 1 and is
    flagged ``empty_meet``."""
    if not states:
        if algebra is None:
            raise ValueError("the empty meet needs the algebra")
        return StateVector.constant(algebra, 1, label="empty meet").flagged(empty_meet=True)
    algebra = states[0].algebra
    return StateVector(algebra, tuple(min(col) for col in zip(*(s.values for s in states))), label="meet")


def join_chain_semistates(states: Sequence[StateVector]) -> StateVector:
    """Pointwise maximum of a pointwise-linearly-ordered family."""
    if not states:
        raise ValueError("the join of an empty family is not a q-semi-state")
    for a in states:
        for b in states:
            if not (a <= b or b <= a):
                raise Inapplicable("the family is not linearly ordered")
    return StateVector(states[0].algebra, tuple(max(col) for col in zip(*(s.values for s in states))),
                       label="join")


# -- order reflection and comparison -------------------------------------------------

def check_order_reflecting(algebra: EffectAlgebra, states: Iterable[StateVector]) -> Report:
    """For every ``a`` not below ``b`` some state has ``s(a) > s(b)``; the
    witness is the lexicographically first failing pair."""
    members = list(states)
    n = algebra.n
    rep = Report("order reflecting state set")
    dominated = np.ones((n, n), dtype=bool)
    for s in members:
        v, _ = s.scaled()
        dominated &= _pairwise_leq(v)
    bad = dominated & ~algebra.leq
    order = sorted(range(n), key=lambda i: algebra.names[i])
    wit = next(((a, b) for a in order for b in order if bad[a, b]), None)
    rep.check("order reflecting", wit is None,
              {"a": algebra.names[wit[0]], "b": algebra.names[wit[1]]} if wit else None)
    if wit:
        rep.details["witness"] = (algebra.names[wit[0]], algebra.names[wit[1]])
    rep.details["states"] = len(members)
    return rep


@dataclass
class Comparison:
    pointwise: bool
    unit_sets: bool

    def __bool__(self) -> bool:
        return self.pointwise


def compare_by_unit_sets(algebra: QEffectAlgebra, t: StateVector, s: StateVector) -> Comparison:
    """Pointwise ``t <= s`` together with the unit-set inclusion test; the two
    agree on q-semi-states."""
    for name, x in (("t", t), ("s", s)):
        if not check_semi_state(algebra, x).ok:
            raise Inapplicable(f"{name} is not a q-semi-state")
    pointwise = t <= s
    unit_sets = all(b == ONE for a, b in zip(t.values, s.values) if a == ONE)
    return Comparison(pointwise, unit_sets)


# -- infimum decomposition ----------------------------------------------------------

def verify_infimum_decomposition(algebra: QEffectAlgebra, states: Sequence[StateVector],
                                 t: StateVector, complete: bool = False) -> Report:
    """``t`` equals the meet of the members above it.

    With ``complete`` false the state set is treated as a finite sample of
    all q-states, so a mismatch is reported as partial (the missing state
    may simply not have been enumerated) rather than as a violation.
    """
    rep = Report("infimum decomposition")
    members = list(states)
    gate = check_order_reflecting(algebra, members)
    if not gate.ok:
        return rep.inapplicable(f"state set is not order reflecting at {gate.details['witness']}")
    jp = check_semi_state(algebra, t, "jauch_piron")
    if not jp.details.get("jauch_piron"):
        return rep.inapplicable("t is not a Jauch-Piron q-semi-state")
    above = [s for s in members if t <= s]
    m = meet_semistates(above, algebra)
    residuals = [{"x": x, "t(x)": a, "meet(x)": b}
                 for x, a, b in zip(algebra.names, t.values, m.values) if a != b]
    rep.details.update(above=len(above), meet=m.values, residuals=residuals)
    if residuals and not complete:
        for r in residuals[:rep.max_witnesses]:
            rep.witnesses.append({"check": "t = meet of states above t", **r})
        return rep.partial("state set may be incomplete (truncation-candidate)")
    rep.check("t = meet of states above t", not residuals, residuals[0] if residuals else None)
    return rep


def verify_constant_one(algebra: QEffectAlgebra, states: Sequence[StateVector], t: StateVector) -> Report:
    """A Jauch-Piron ``t`` with ``t(0) != 0`` has no states above it and is
    constant 1 (given an order reflecting state set)."""
    rep = Report("t(0) != 0 forces t = 1")
    if t.values[algebra.zero] == 0:
        return rep.inapplicable("t(0) = 0")
    if not check_order_reflecting(algebra, states).ok:
        return rep.inapplicable("state set is not order reflecting")
    if not is_jauch_piron(algebra, t):
        return rep.inapplicable("t is not a Jauch-Piron q-semi-state")
    rep.check("no state above t", not any(t <= s for s in states))
    rep.check("t is constant 1", all(v == ONE for v in t.values))
    return rep


def verify_superadditivity(algebra: QEffectAlgebra, t: StateVector) -> Report:
    """``t(x) + t(y) <= t(x + y)`` over every defined sum."""
    rep = Report("superadditivity")
    if t.values[algebra.zero] != 0:
        return rep.inapplicable("t(0) != 0")
    v, _ = t.scaled()
    tab = algebra.table
    i, j = np.nonzero(tab >= 0)
    bad = np.flatnonzero(v[i] + v[j] > v[tab[i, j]])
    rep.check("t(x)+t(y) <= t(x+y)", len(bad) == 0,
              _w(algebra, t, x=i[bad[0]], y=j[bad[0]]) if len(bad) else None)
    return rep


def certify_q_jauch_piron(algebra: QEffectAlgebra, states: Sequence[StateVector] | None = None,
                          cap: int = STATE_CAP) -> Report:
    """Every q-state Jauch-Piron? Certified outright for MV algebras; otherwise
    only the enumerated extreme q-states are checked and the answer is partial."""
    rep = Report(f"q-Jauch-Piron certificate for {algebra.name or 'algebra'}")
    cls = classify(algebra)
    if cls.details["is_mv"]:
        rep.check("MV algebra: every state is Jauch-Piron", True)
        return rep
    members = list(states) if states is not None else list(enumerate_extreme_q_states(algebra, cap))
    for s in members:
        rep.check("extreme q-state is Jauch-Piron", is_jauch_piron(algebra, s), {"state": s.values})
    if rep.ok:
        rep.partial("checked on extreme q-states only")
    return rep


# -- enumeration ----------------------------------------------------------------------

def _unit_row(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    row = [0] * n
    for i, c in pairs:
        row[i] += c
    return row


def _branch_rows(algebra: QEffectAlgebra, x: int, high: bool, n: int):
    """Linearized q/d laws at ``x`` for one side of the breakpoint."""
    half = Fraction(1, 2)
    q, d = int(algebra.q[x]), int(algebra.d[x])
    if high:
        eqs = [(_unit_row(n, [(q, 1)]), ONE), (_unit_row(n, [(d, 1), (x, -2)]), Fraction(-1))]
        ineqs = [(_unit_row(n, [(x, -1)]), -half)]
    else:
        eqs = [(_unit_row(n, [(q, 1), (x, -2)]), ZERO), (_unit_row(n, [(d, 1)]), ZERO)]
        ineqs = [(_unit_row(n, [(x, 1)]), half)]
    return eqs, ineqs


def _base_rows(algebra: QEffectAlgebra, additive: bool):
    n = algebra.n
    eqs = [(_unit_row(n, [(algebra.one, 1)]), ONE)]
    ineqs = [(_unit_row(n, [(i, 1)]), ONE) for i in range(n)]
    if additive:
        eqs.append((_unit_row(n, [(algebra.zero, 1)]), ZERO))
        seen = set()
        for i, j in np.argwhere(algebra.table >= 0):
            key = (min(i, j), max(i, j))
            if key in seen or algebra.zero in key:
                continue
            seen.add(key)
            eqs.append((_unit_row(n, [(int(i), 1), (int(j), 1), (int(algebra.table[i, j]), -1)]), ZERO))
    else:
        for a, b in algebra.covers():
            ineqs.append((_unit_row(n, [(a, 1), (b, -1)]), ZERO))
    return eqs, ineqs


def branch_vertices(algebra: QEffectAlgebra, additive: bool = True) -> list[tuple[Fraction, ...]]:
    """Vertices of every feasible branch polytope.

    Each element is placed below or above one half (both sides include the
    boundary), which turns the q/d laws into linear equalities. Elements are
    visited top-down; once some element is low, everything below it is low
    too, since the valuation is monotone. Partial branches are pruned with an
    exact feasibility test.
    """
    n = algebra.n
    le = algebra.leq
    order = sorted(range(n), key=lambda i: (-int(le[:, i].sum()), algebra.names[i]))
    base_eqs, base_ineqs = _base_rows(algebra, additive)
    found: set[tuple[Fraction, ...]] = set()

    def go(pos: int, eqs: list, ineqs: list, low: set[int]) -> None:
        if feasible_point(eqs, ineqs, n) is None:
            return
        if pos == n:
            found.update(vertices(eqs, ineqs, n))
            return
        x = order[pos]
        space = solve_equalities(eqs, n)
        fixed = space.fixed(x) if space is not None else None
        forced_low = any(le[x, y] for y in low)
        sides = [False] if forced_low else [False, True]
        if fixed is not None:
            sides = [fixed > Fraction(1, 2)] if not forced_low or fixed <= Fraction(1, 2) else []
        for high in sides:
            e2, i2 = _branch_rows(algebra, x, high, n)
            go(pos + 1, eqs + e2, ineqs + i2, low if high else low | {x})

    go(0, list(base_eqs), list(base_ineqs), set())
    return sorted(found)


def enumerate_extreme_q_states(algebra: QEffectAlgebra, cap: int = STATE_CAP) -> StateSet:
    """Extreme points of the convex hull of all q-states.

    The q-state set is a finite union of branch polytopes, so these extreme
    points are among the branch vertices; every returned vector is
    re-certified with :func:`check_state`.
    """
    if algebra.n > cap:
        raise CapExceeded(f"carrier has {algebra.n} elements; state enumeration cap is {cap}")
    if not isinstance(algebra, QEffectAlgebra):
        raise ValueError("q-states need q and d")
    pts = extreme_points(branch_vertices(algebra, additive=True))
    members = []
    for p in pts:
        rep = check_state(algebra, p)
        if not rep.details["q_state"]:
            raise AssertionError(f"branch vertex {p} is not a q-state")
        members.append(rep.details["vector"].flagged(**{"extreme": True}))
    return StateSet.of(algebra, members, "extreme")


def enumerate_semi_state_vertices(algebra: QEffectAlgebra, cap: int = 8) -> list[StateVector]:
    """Vertices of the q-semi-state branch polytopes (monotone, normalized,
    q/d laws; no additivity). Meant for generating test instances on small
    algebras."""
    if algebra.n > cap:
        raise CapExceeded(f"carrier has {algebra.n} elements; semi-state cap is {cap}")
    return [StateVector(algebra, p) for p in branch_vertices(algebra, additive=False)]


def order_reflecting_gate(algebra: QEffectAlgebra, states: StateSet) -> None:
    rep = check_order_reflecting(algebra, states)
    if not rep.ok:
        raise Inapplicable(f"state set is not order reflecting at {rep.details['witness']}")
