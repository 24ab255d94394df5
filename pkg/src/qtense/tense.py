"""Galois connections, Galois q-connections, q-tense operators and the
canonical construction over finite chains."""
from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

import numpy as np

from .algebra import (AlgebraMap, EffectAlgebra, FinitePoset, Inapplicable, QEffectAlgebra,
                      direct_power)
from .report import Report
from .unit import UNIT, UnitInterval, threshold_term

EXHAUSTIVE_CAP = 2000
SAMPLES = 1000


# -- frames ----------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class Frame:
    """``R`` is a boolean ``|S| x |T|`` matrix; a time frame has ``T = S``."""

    S: tuple[str, ...]
    T: tuple[str, ...]
    R: np.ndarray
    time: bool = False
    name: str = ""

    def __post_init__(self) -> None:
        if not self.S or not self.T:
            raise ValueError("S and T must be non-empty")
        R = np.asarray(self.R, dtype=bool)
        if R.shape != (len(self.S), len(self.T)):
            raise ValueError("relation has the wrong shape")
        if self.time and self.S != self.T:
            raise ValueError("a time frame has T = S")
        R = R.copy()
        R.setflags(write=False)
        object.__setattr__(self, "R", R)

    @classmethod
    def time_frame(cls, S: Sequence[str], R: Any, name: str = "") -> "Frame":
        return cls(tuple(S), tuple(S), np.asarray(R, dtype=bool), time=True, name=name)

    @classmethod
    def from_pairs(cls, S: Sequence[str], T: Sequence[str] | None, pairs: Sequence[tuple[str, str]],
                   name: str = "") -> "Frame":
        is_time = T is None
        T = tuple(S) if T is None else tuple(T)
        R = np.zeros((len(S), len(T)), dtype=bool)
        for s, t in pairs:
            R[list(S).index(s), list(T).index(t)] = True
        return cls(tuple(S), T, R, time=is_time, name=name)

    @property
    def is_time_frame(self) -> bool:
        return self.time

    def pairs(self) -> list[tuple[str, str]]:
        return [(self.S[i], self.T[j]) for i, j in np.argwhere(self.R)]

    def converse(self) -> "Frame":
        return Frame(self.T, self.S, self.R.T, time=self.time, name=f"{self.name}^-1" if self.name else "")

    def _square(self) -> np.ndarray:
        if not self.time:
            raise ValueError("relation properties apply to time frames")
        return self.R

    @property
    def reflexive(self) -> bool:
        return bool(self._square().diagonal().all())

    @property
    def symmetric(self) -> bool:
        R = self._square()
        return bool((R == R.T).all())

    @property
    def transitive(self) -> bool:
        R = self._square().astype(np.int64)
        return bool(((R @ R > 0) <= self.R).all())

    def __eq__(self, other: Any) -> bool:
        return (isinstance(other, Frame) and self.S == other.S and self.T == other.T
                and np.array_equal(self.R, other.R))

    __hash__ = object.__hash__


def transitive_closure(R: np.ndarray) -> np.ndarray:
    R = np.asarray(R, dtype=bool).copy()
    for k in range(len(R)):
        R |= R[:, k:k + 1] & R[k:k + 1, :]
    return R


CLOSURES = ("raw", "reflexive", "symmetric", "transitive", "preorder")


def random_time_frame(rng: np.random.Generator, size: int, density: float = 0.5,
                      closure: str = "raw", name: str = "") -> Frame:
    """Random relation on ``size`` points, optionally closed."""
    if closure not in CLOSURES:
        raise ValueError(f"unknown closure {closure!r}")
    R = rng.random((size, size)) < density
    if closure in ("reflexive", "preorder"):
        R |= np.eye(size, dtype=bool)
    if closure == "symmetric":
        R |= R.T
    if closure in ("transitive", "preorder"):
        R = transitive_closure(R)
    return Frame.time_frame([f"t{i}" for i in range(size)], R, name=name)


# -- Galois connections on finite posets ------------------------------------------------

@dataclass(eq=False)
class GaloisPair:
    """``f: A -> B`` (left adjoint) and ``g: B -> A`` (right adjoint)."""

    f: AlgebraMap
    g: AlgebraMap
    connection: bool | None = None
    q_connection: bool | None = None

    def __post_init__(self) -> None:
        if self.f.source is not self.g.target or self.f.target is not self.g.source:
            raise ValueError("f: A -> B and g: B -> A must match up")

    @property
    def A(self) -> Any:
        return self.f.source

    @property
    def B(self) -> Any:
        return self.f.target


def _leq(P: Any) -> np.ndarray:
    return np.asarray(P.leq, dtype=bool)


def check_galois_connection(f: AlgebraMap, g: AlgebraMap) -> Report:
    """The three equivalent descriptions of a Galois connection, each checked
    on its own, plus a check that their verdicts coincide.

    (1) ``f(a) <= b`` iff ``a <= g(b)``; (2) both monotone with
    ``id <= g f`` and ``f g <= id``; (3) ``g(b)`` is the maximum of
    ``{x : f(x) <= b}`` and ``f(a)`` the minimum of ``{y : a <= g(y)}``.
    """
    A, B = f.source, f.target
    la, lb = _leq(A), _leq(B)
    fv = np.asarray(f.table, dtype=np.int64)
    gv = np.asarray(g.table, dtype=np.int64)
    rep = Report("Galois connection")
    names_a, names_b = A.names, B.names

    # (1)
    left = lb[fv, :]           # [a, b]: f(a) <= b
    right = la[:, gv]          # [a, b]: a <= g(b)
    bad = np.argwhere(left != right)
    c1 = len(bad) == 0
    w1 = {"a": names_a[bad[0][0]], "b": names_b[bad[0][1]]} if len(bad) else None

    # (2)
    mono_f = (la <= lb[np.ix_(fv, fv)]).all()
    mono_g = (lb <= la[np.ix_(gv, gv)]).all()
    unit_ = la[np.arange(A.n), gv[fv]].all()
    counit = lb[fv[gv], np.arange(B.n)].all()
    c2 = bool(mono_f and mono_g and unit_ and counit)
    w2 = None
    if not c2:
        w2 = {"monotone f": bool(mono_f), "monotone g": bool(mono_g),
              "id <= g.f": bool(unit_), "f.g <= id": bool(counit)}

    # (3)
    X = left.astype(np.float64)  # [x, b]: x in {x : f(x) <= b}
    below = la.T.astype(np.float64) @ X  # [m, b]: #{x in X_b : x <= m}
    is_max = left & (below == X.sum(axis=0)[None, :])
    has_max = is_max.any(axis=0)
    maxima = is_max.argmax(axis=0)
    ok_g = has_max & (maxima == gv)
    Y = right.astype(np.float64)  # [a, y]: y in {y : a <= g(y)}
    above = Y @ lb.T.astype(np.float64)  # [a, m]: #{y in Y_a : m <= y}
    is_min = right & (above == Y.sum(axis=1)[:, None])
    has_min = is_min.any(axis=1)
    minima = is_min.argmax(axis=1)
    ok_f = has_min & (minima == fv)
    c3 = bool(ok_g.all() and ok_f.all())
    w3 = None
    if not ok_g.all():
        b = int(np.flatnonzero(~ok_g)[0])
        w3 = {"b": names_b[b], "g(b)": names_a[gv[b]],
              "max": names_a[maxima[b]] if has_max[b] else None}
    elif not ok_f.all():
        a = int(np.flatnonzero(~ok_f)[0])
        w3 = {"a": names_a[a], "f(a)": names_b[fv[a]],
              "min": names_b[minima[a]] if has_min[a] else None}

    rep.check("(1) f(a) <= b iff a <= g(b)", c1, w1)
    rep.check("(2) monotone, id <= gf, fg <= id", c2, w2)
    rep.check("(3) g(b) = max{x : f(x) <= b}, f(a) = min{y : a <= g(y)}", c3, w3)
    rep.details["conditions"] = [c1, c2, c3]
    rep.details["agree"] = c1 == c2 == c3
    if not rep.details["agree"]:
        rep.check("three conditions agree", False, {"conditions": [c1, c2, c3]})
    return rep


def is_galois_connection(f: AlgebraMap, g: AlgebraMap) -> bool:
    return bool(check_galois_connection(f, g).details["conditions"][0])


def _subset_name(members: Sequence[str], mask: int) -> str:
    return "{" + ",".join(m for i, m in enumerate(members) if mask >> i & 1) + "}"


def powerset_poset(members: Sequence[str]) -> FinitePoset:
    """Subsets of ``members`` as bitmasks, ordered by inclusion."""
    k = len(members)
    masks = np.arange(2**k)
    leq = (masks[:, None] & ~masks[None, :]) == 0
    return FinitePoset([_subset_name(members, m) for m in range(2**k)], leq,
                       name="P(" + ",".join(members) + ")")


def powerset_galois(A: Sequence[str], B: Sequence[str], R: Any) -> GaloisPair:
    """``f_R(X)`` collects the R-successors of ``X``; ``g_R(Y)`` the points
    whose successors all lie in ``Y``."""
    R = np.asarray(R, dtype=bool)
    PA, PB = powerset_poset(A), powerset_poset(B)
    succ = [sum(1 << j for j in np.flatnonzero(R[i])) for i in range(len(A))]
    f = [0] * (2 ** len(A))
    for X in range(2 ** len(A)):
        for i in range(len(A)):
            if X >> i & 1:
                f[X] |= succ[i]
    g = [sum(1 << i for i in range(len(A)) if succ[i] & ~Y == 0) for Y in range(2 ** len(B))]
    pair = GaloisPair(AlgebraMap(PA, PB, tuple(f)), AlgebraMap(PB, PA, tuple(g)))
    pair.connection = check_galois_connection(pair.f, pair.g).ok
    return pair


# -- q-connections and tense operators -----------------------------------------------------

def _commutes(m: AlgebraMap, op: str) -> np.ndarray:
    """Per source element: ``m(op(x)) == op(m(x))``."""
    src, tgt = m.source, m.target
    s_op = src.q if op == "q" else src.d
    out = np.zeros(src.n, dtype=bool)
    for x in range(src.n):
        img = m.table[x]
        t_op = tgt.q_value(img) if op == "q" else tgt.d_value(img)
        out[x] = m.table[int(s_op[x])] == t_op
    return out


def check_galois_q_connection(pair: GaloisPair) -> Report:
    """Connection plus (GQ1) for ``f`` and (GQ2) for ``g``."""
    base = check_galois_connection(pair.f, pair.g)
    rep = Report("Galois q-connection")
    rep.checks.update(base.checks)
    rep.witnesses.extend(base.witnesses)
    rep.details.update(base.details)
    pair.connection = base.ok
    for label, m in (("GQ1", pair.f), ("GQ2", pair.g)):
        for op in ("q", "d"):
            ok = _commutes(m, op)
            bad = np.flatnonzero(~ok)
            rep.check(f"{label} {m_name(m, pair)}({op}(x)) = {op}({m_name(m, pair)}(x))", len(bad) == 0,
                      {"x": m.source.names[bad[0]]} if len(bad) else None)
    pair.q_connection = rep.ok
    return rep


def m_name(m: AlgebraMap, pair: GaloisPair) -> str:
    return "f" if m is pair.f else "g"


def _conj(m: AlgebraMap) -> AlgebraMap:
    """``' . m . '``."""
    src, tgt = m.source, m.target
    return AlgebraMap(src, tgt, tuple(int(tgt.supp[m.table[int(src.supp[x])]]) for x in range(src.n)))


def bar_maps(pair: GaloisPair) -> GaloisPair:
    """``(g-bar, f-bar)`` with ``g-bar = ' g '`` now the left adjoint."""
    out = GaloisPair(_conj(pair.g), _conj(pair.f))
    check_galois_q_connection(out)
    return out


@dataclass(eq=False)
class TenseStructure:
    algebra: QEffectAlgebra
    G: AlgebraMap
    H: AlgebraMap
    P: AlgebraMap
    F: AlgebraMap
    report: Report = field(default_factory=lambda: Report("tense"))

    @property
    def certified(self) -> bool:
        return self.report.ok


def _as_endomap(algebra: QEffectAlgebra, m: Any) -> AlgebraMap:
    if isinstance(m, AlgebraMap):
        return m
    if isinstance(m, dict):
        return AlgebraMap.from_names(algebra, algebra, m)
    return AlgebraMap(algebra, algebra, tuple(int(v) for v in m))


def check_tense_operators(algebra: QEffectAlgebra, G: Any, H: Any) -> TenseStructure:
    """Derive ``P = ' H '`` and ``F = ' G '``, certify (P, G) and (F, H) as
    Galois q-connections and check (T1)-(T5) directly."""
    G, H = _as_endomap(algebra, G), _as_endomap(algebra, H)
    P, F = _conj(H), _conj(G)
    rep = Report(f"q-tense operators on {algebra.name or 'algebra'}")
    conn = {}
    for label, left, right in (("(P,G)", P, G), ("(F,H)", F, H)):
        sub = check_galois_q_connection(GaloisPair(left, right))
        conn[label] = sub.ok
        rep.check(f"{label} Galois q-connection", sub.ok, sub.witnesses[0] if sub.witnesses else None)
    le, n, one = algebra.leq, algebra.n, algebra.one
    g, h, p, f = (np.asarray(m.table) for m in (G, H, P, F))
    names = algebra.names
    rep.check("T1 G(1)=H(1)=1", g[one] == one and h[one] == one,
              {"G(1)": names[g[one]], "H(1)": names[h[one]]})
    for label, m in (("G", g), ("H", h)):
        hit = np.argwhere(le & ~le[np.ix_(m, m)])
        rep.check(f"T2 {label} monotone", len(hit) == 0,
                  {"x": names[hit[0][0]], "y": names[hit[0][1]]} if len(hit) else None)
    idx = np.arange(n)
    for label, outer, inner in (("x <= GP(x)", g, p), ("x <= HF(x)", h, f)):
        bad = np.flatnonzero(~le[idx, outer[inner]])
        rep.check(f"T3 {label}", len(bad) == 0, {"x": names[bad[0]]} if len(bad) else None)
    for tag, op in (("T4", "q"), ("T5", "d")):
        for label, m in (("G", G), ("H", H)):
            bad = np.flatnonzero(~_commutes(m, op))
            rep.check(f"{tag} {label}({op}(x)) = {op}({label}(x))", len(bad) == 0,
                      {"x": names[bad[0]]} if len(bad) else None)
    if all(conn.values()):
        t_ok = all(v for k, v in rep.checks.items() if k.startswith("T"))
        rep.check("T1-T5 follow from the connections", t_ok)
    return TenseStructure(algebra, G, H, P, F, rep)


def verify_rgrf_transfer(pair: GaloisPair, s: AlgebraMap, t: AlgebraMap, morphisms: bool | None = None) -> Report:
    """``s g <= t`` on E2 iff ``s <= t f`` on E1; for effect morphisms ``s``,
    ``t`` also the two bar-map reformulations."""
    E1, E2 = pair.A, pair.B
    E3 = s.target
    le3 = E3.leq_value
    f, g = pair.f.table, pair.g.table
    lhs = all(le3(s.table[g[x]], t.table[x]) for x in range(E2.n))
    rhs = all(le3(s.table[y], t.table[f[y]]) for y in range(E1.n))
    rep = Report("transfer between s.g <= t and s <= t.f")
    rep.details.update(lhs=lhs, rhs=rhs)
    rep.check("s.g <= t iff s <= t.f", lhs == rhs, {"lhs": lhs, "rhs": rhs})
    if morphisms is None:
        from .algebra import check_morphism
        morphisms = (check_morphism(s, "effect").details["is_morphism"]
                     and check_morphism(t, "effect").details["is_morphism"])
    if morphisms:
        gbar, fbar = _conj(pair.g), _conj(pair.f)
        bar_l = all(le3(t.table[z], s.table[gbar.table[z]]) for z in range(E2.n))
        bar_r = all(le3(t.table[fbar.table[w]], s.table[w]) for w in range(E1.n))
        rep.details.update(bar_lhs=bar_l, bar_rhs=bar_r)
        rep.check("s.g <= t iff t <= s.g-bar", lhs == bar_l, {"lhs": lhs, "bar": bar_l})
        rep.check("s <= t.f iff t.f-bar <= s", rhs == bar_r, {"rhs": rhs, "bar": bar_r})
    return rep


def verify_term_commutation(f: AlgebraMap, r: Any) -> Report:
    """``t_r(f(x)) = f(t_r(x))`` for every ``x``; needs (GQ1) for ``f``."""
    src, tgt = f.source, f.target
    if not (_commutes(f, "q").all() and _commutes(f, "d").all()):
        raise Inapplicable("the map does not commute with q and d")
    term = threshold_term(Fraction(r))
    rep = Report(f"term commutation for t_{Fraction(r)}")
    for x in range(src.n):
        lhs = term.apply_value(tgt, f.table[x])
        rhs = f.table[term.apply_value(src, x)]
        rep.check("t_r(f(x)) = f(t_r(x))", lhs == rhs, {"x": src.names[x]})
    return rep


# -- the canonical construction over a finite chain ---------------------------------------

class Chain:
    """A finite linearly ordered q-effect algebra seen through ranks."""

    def __init__(self, algebra: QEffectAlgebra):
        le = algebra.leq
        if not (le | le.T).all():
            raise Inapplicable(f"{algebra.name or 'algebra'} is not linearly ordered")
        if not isinstance(algebra, QEffectAlgebra):
            raise Inapplicable("the chain needs q and d")
        self.algebra = algebra
        self.size = algebra.n
        self.rank_of = le.sum(axis=0) - 1  # number of strictly smaller elements
        self.index_of = np.argsort(self.rank_of)
        r, i = self.rank_of, self.index_of
        self.q = r[algebra.q[i]]
        self.d = r[algebra.d[i]]
        self.supp = r[algebra.supp[i]]
        self.top = self.size - 1

    def name(self, rank: int) -> str:
        return self.algebra.names[self.index_of[rank]]

    def all_vectors(self, k: int) -> np.ndarray:
        return np.array(list(itertools.product(range(self.size), repeat=k)), dtype=np.int64).reshape(-1, k)

    def probe_vectors(self, k: int, rng: np.random.Generator, samples: int) -> np.ndarray:
        """Random vectors plus constants, unit vectors and characteristic
        vectors of every subset (when there are few enough)."""
        parts = [rng.integers(0, self.size, size=(samples, k))]
        parts.append(np.repeat(np.arange(self.size)[:, None], k, axis=1))
        eye = np.eye(k, dtype=np.int64)
        parts.append(eye * self.top)
        parts.append((1 - eye) * self.top)
        if k <= 10:
            masks = (np.arange(2**k)[:, None] >> np.arange(k)[None, :]) & 1
            parts.append(masks * self.top)
        return np.unique(np.concatenate(parts), axis=0)


def _min_over(R: np.ndarray, V: np.ndarray, empty: int) -> np.ndarray:
    """``out[:, s] = min{V[:, t] : R[s, t]}``."""
    big = np.where(R[None, :, :], V[:, None, :], np.iinfo(np.int64).max)
    out = big.min(axis=2)
    return np.where(R.any(axis=1)[None, :], out, empty)


def _max_over(R: np.ndarray, V: np.ndarray, empty: int) -> np.ndarray:
    """``out[:, t] = max{V[:, s] : R[s, t]}``."""
    big = np.where(R.T[None, :, :], V[:, None, :], -1)
    out = big.max(axis=2)
    return np.where(R.any(axis=0)[None, :], out, empty)


def _vec_leq(X: np.ndarray, Y: np.ndarray, chunk: int = 512) -> np.ndarray:
    """``[i, j]``: ``X[i] <= Y[j]`` componentwise."""
    out = np.empty((len(X), len(Y)), dtype=bool)
    for a in range(0, len(X), chunk):
        out[a:a + chunk] = (X[a:a + chunk, None, :] <= Y[None, :, :]).all(axis=2)
    return out


class CanonicalConnection:
    """``G*: M^T -> M^S`` (row minima over R) and its left adjoint
    ``P*: M^S -> M^T`` (column maxima), acting on rank vectors."""

    def __init__(self, chain: Chain | QEffectAlgebra, frame: Frame):
        self.chain = chain if isinstance(chain, Chain) else Chain(chain)
        self.frame = frame

    def G(self, V: np.ndarray) -> np.ndarray:
        return _min_over(self.frame.R, np.atleast_2d(V), self.chain.top)

    def P(self, V: np.ndarray) -> np.ndarray:
        return _max_over(self.frame.R, np.atleast_2d(V), 0)

    def _vectors(self, k: int, cap: int, samples: int, rng: np.random.Generator) -> tuple[np.ndarray, str]:
        if self.chain.size ** k <= cap:
            return self.chain.all_vectors(k), "exhaustive"
        return self.chain.probe_vectors(k, rng, samples), "sampled"

    def certify(self, cap: int = EXHAUSTIVE_CAP, samples: int = SAMPLES, seed: int = 0) -> Report:
        """Adjunction, (GQ1) and (GQ2) on every vector of ``M^S`` and ``M^T``
        when both powers are within ``cap``, on probe vectors otherwise."""
        start = time.perf_counter()
        rng = np.random.default_rng(seed)
        c = self.chain
        X, mode_s = self._vectors(len(self.frame.S), cap, samples, rng)
        Y, mode_t = self._vectors(len(self.frame.T), cap, samples, rng)
        rep = Report(f"canonical connection over {c.algebra.name or 'chain'}")
        _check_adjunction(rep, "(P*,G*)", self.P, self.G, X, Y, c)
        _check_q_transport(rep, "GQ1 P*", self.P, X, c)
        _check_q_transport(rep, "GQ2 G*", self.G, Y, c)
        mode = "exhaustive" if mode_s == mode_t == "exhaustive" else "sampled"
        rep.details.update(mode=mode, vectors_S=len(X), vectors_T=len(Y))
        rep.elapsed = time.perf_counter() - start
        return rep

    def as_pair(self, cap: int = 10**5) -> GaloisPair:
        """Materialize ``(P*, G*)`` as maps between direct powers."""
        c = self.chain
        PS = direct_power(c.algebra, len(self.frame.S), cap=cap)
        PT = PS if self.frame.time else direct_power(c.algebra, len(self.frame.T), cap=cap)
        G = AlgebraMap(PT, PS, tuple(_encode(PS, c, self.G(_decode(PT, c)))))
        P = AlgebraMap(PS, PT, tuple(_encode(PT, c, self.P(_decode(PS, c)))))
        return GaloisPair(P, G)


def _decode(power: EffectAlgebra, c: Chain) -> np.ndarray:
    return c.rank_of[power.provenance[2]]


def _encode(power: EffectAlgebra, c: Chain, ranks: np.ndarray) -> list[int]:
    radix = power.provenance[3]
    return [int(v) for v in (c.index_of[ranks] * radix).sum(axis=1)]


def _check_adjunction(rep: Report, label: str, left, right, X: np.ndarray, Y: np.ndarray, c: Chain) -> None:
    LX, RY = left(X), right(Y)
    a = _vec_leq(LX, Y)
    b = _vec_leq(X, RY)
    bad = np.argwhere(a != b)
    rep.check(f"{label} adjunction", len(bad) == 0,
              {"x": [c.name(v) for v in X[bad[0][0]]], "y": [c.name(v) for v in Y[bad[0][1]]]}
              if len(bad) else None)


def _check_q_transport(rep: Report, label: str, op, V: np.ndarray, c: Chain) -> None:
    out = op(V)
    for sym, table in (("q", c.q), ("d", c.d)):
        bad = np.flatnonzero((op(table[V]) != table[out]).any(axis=1))
        rep.check(f"{label} commutes with {sym}", len(bad) == 0,
                  {"x": [c.name(v) for v in V[bad[0]]]} if len(bad) else None)


class CanonicalTense:
    """``G*``, ``H*`` (minima over successors / predecessors) and their left
    adjoints ``P*``, ``F*`` on ``M^S`` for a time frame ``(S, R)``."""

    def __init__(self, chain: Chain | QEffectAlgebra, frame: Frame):
        if not frame.is_time_frame:
            raise ValueError("the tense construction needs a time frame")
        self.chain = chain if isinstance(chain, Chain) else Chain(chain)
        self.frame = frame
        self.forward = CanonicalConnection(self.chain, frame)
        self.backward = CanonicalConnection(self.chain, frame.converse())

    def G(self, V: np.ndarray) -> np.ndarray:
        return self.forward.G(V)

    def P(self, V: np.ndarray) -> np.ndarray:
        return self.forward.P(V)

    def H(self, V: np.ndarray) -> np.ndarray:
        return self.backward.G(V)

    def F(self, V: np.ndarray) -> np.ndarray:
        """``F*(q)(t) = max{q(s) : t R s}``."""
        return self.backward.P(V)

    def certify(self, cap: int = EXHAUSTIVE_CAP, samples: int = SAMPLES, seed: int = 0) -> Report:
        """(P*,G*), (F*,H*) as Galois q-connections, (T1)-(T5), ``P* = ' H* '``
        and ``F* = ' G* '``, and the reflexive / symmetric / transitive
        consequences whenever the relation has the property."""
        start = time.perf_counter()
        rng = np.random.default_rng(seed)
        c = self.chain
        k = len(self.frame.S)
        V, mode = self.forward._vectors(k, cap, samples, rng)
        rep = Report(f"canonical tense operators over {c.algebra.name or 'chain'}")
        name = lambda v: [c.name(x) for x in v]  # noqa: E731

        _check_adjunction(rep, "(P*,G*)", self.P, self.G, V, V, c)
        _check_adjunction(rep, "(F*,H*)", self.F, self.H, V, V, c)
        for label, op in (("P*", self.P), ("G*", self.G), ("F*", self.F), ("H*", self.H)):
            _check_q_transport(rep, label, op, V, c)

        top = np.full((1, k), c.top)
        rep.check("T1 G*(1)=H*(1)=1", bool((self.G(top) == c.top).all() and (self.H(top) == c.top).all()))
        le = _vec_leq(V, V)
        for label, op in (("G*", self.G), ("H*", self.H)):
            img = op(V)
            bad = np.argwhere(le & ~_vec_leq(img, img))
            rep.check(f"T2 {label} monotone", len(bad) == 0,
                      {"x": name(V[bad[0][0]]), "y": name(V[bad[0][1]])} if len(bad) else None)
        for label, outer, inner in (("x <= G*P*(x)", self.G, self.P), ("x <= H*F*(x)", self.H, self.F)):
            bad = np.flatnonzero(~(V <= outer(inner(V))).all(axis=1))
            rep.check(f"T3 {label}", len(bad) == 0, {"x": name(V[bad[0]])} if len(bad) else None)
        # T4/T5 are the q/d transport checks for G* and H* above; record them under their names
        for tag, sym in (("T4", "q"), ("T5", "d")):
            rep.check(f"{tag} G*, H* commute with {sym}",
                      rep.checks[f"G* commutes with {sym}"] and rep.checks[f"H* commutes with {sym}"])

        s = c.supp
        rep.check("P* = ' H* '", bool((self.P(V) == s[self.H(s[V])]).all()))
        rep.check("F* = ' G* '", bool((self.F(V) == s[self.G(s[V])]).all()))

        props = []
        fr = self.frame
        if fr.reflexive:
            props.append("reflexive")
            rep.check("(i) G*(p) <= p, H*(p) <= p",
                      bool((self.G(V) <= V).all() and (self.H(V) <= V).all()))
            rep.check("(i) q <= P*(q), q <= F*(q)",
                      bool((V <= self.P(V)).all() and (V <= self.F(V)).all()))
        if fr.symmetric:
            props.append("symmetric")
            rep.check("(ii) G* = H*, P* = F*",
                      bool((self.G(V) == self.H(V)).all() and (self.P(V) == self.F(V)).all()))
        if fr.transitive:
            props.append("transitive")
            g, h, p, f = self.G(V), self.H(V), self.P(V), self.F(V)
            rep.check("(iii) G*G* >= G*, H*H* >= H*",
                      bool((self.G(g) >= g).all() and (self.H(h) >= h).all()))
            rep.check("(iii) P*P* <= P*, F*F* <= F*",
                      bool((self.P(p) <= p).all() and (self.F(f) <= f).all()))
        rep.details.update(mode=mode, vectors=len(V), properties=props)
        rep.elapsed = time.perf_counter() - start
        return rep

    def as_tense_structure(self, cap: int = 10**5) -> TenseStructure:
        """Materialize on the direct power and run the generic checks."""
        c = self.chain
        power = direct_power(c.algebra, len(self.frame.S), cap=cap)
        ranks = _decode(power, c)
        G = AlgebraMap(power, power, tuple(_encode(power, c, self.G(ranks))))
        H = AlgebraMap(power, power, tuple(_encode(power, c, self.H(ranks))))
        return check_tense_operators(power, G, H)

    def maps_on(self, power: EffectAlgebra) -> dict[str, AlgebraMap]:
        c = self.chain
        ranks = _decode(power, c)
        return {k: AlgebraMap(power, power, tuple(_encode(power, c, op(ranks))))
                for k, op in (("G", self.G), ("H", self.H), ("P", self.P), ("F", self.F))}


def canonical_connection(M: QEffectAlgebra, frame: Frame) -> CanonicalConnection:
    return CanonicalConnection(Chain(M), frame)


def canonical_tense(M: QEffectAlgebra, frame: Frame) -> CanonicalTense:
    return CanonicalTense(Chain(M), frame)


def evaluate_on_unit(values: Sequence[Fraction], frame: Frame, op: str) -> list[Fraction]:
    """Canonical operators over the rational unit interval, on one vector;
    ``op`` in ``G, H, P, F``."""
    R = frame.R
    if op in ("H", "F"):
        R = R.T
    if op in ("G", "H"):
        return [min((values[t] for t in np.flatnonzero(R[s])), default=Fraction(1)) for s in range(R.shape[0])]
    return [max((values[s] for s in np.flatnonzero(R[:, t])), default=Fraction(0)) for t in range(R.shape[1])]


__all__ = [
    "Frame", "random_time_frame", "transitive_closure", "GaloisPair", "check_galois_connection",
    "is_galois_connection", "powerset_poset", "powerset_galois", "check_galois_q_connection",
    "bar_maps", "TenseStructure", "check_tense_operators", "verify_rgrf_transfer",
    "verify_term_commutation", "Chain", "CanonicalConnection", "CanonicalTense",
    "canonical_connection", "canonical_tense", "evaluate_on_unit", "UNIT", "UnitInterval",
]
