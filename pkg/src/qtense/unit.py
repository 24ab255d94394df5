"""The standard q-effect algebra on the rational unit interval, and the
clone generated by ``q`` and ``d``.

Values are :class:`fractions.Fraction`; nothing here touches floats.
"""
from __future__ import annotations

import time
from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Iterable, Sequence

from .report import Report

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def unit(x: Any) -> Fraction:
    """Parse ``x`` (int, Fraction, or ``"p/q"`` text) as a value in [0, 1]."""
    if isinstance(x, float):
        raise TypeError("floats are not accepted; pass an exact rational")
    try:
        v = Fraction(x.strip()) if isinstance(x, str) else Fraction(x)
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"malformed rational {x!r}") from exc
    if not ZERO <= v <= ONE:
        raise ValueError(f"{v} is outside [0, 1]")
    return v


def std_q(x: Fraction) -> Fraction:
    return min(2 * x, ONE)


def std_d(x: Fraction) -> Fraction:
    return max(2 * x - 1, ZERO)


def oplus(x: Fraction, y: Fraction) -> Fraction:
    return min(x + y, ONE)


def odot(x: Fraction, y: Fraction) -> Fraction:
    return max(x + y - 1, ZERO)


def is_dyadic(r: Fraction) -> bool:
    den = Fraction(r).denominator
    return den & (den - 1) == 0


class UnitInterval:
    """The standard q-effect algebra on rationals in [0, 1].

    It exposes the same value-level protocol as finite algebras
    (``leq_value``, ``plus_value``, ``q_value`` ...), with values being
    Fractions instead of element indices.
    """

    zero_value = ZERO
    one_value = ONE
    name = "I"

    def leq_value(self, u: Fraction, v: Fraction) -> bool:
        return u <= v

    def plus_value(self, u: Fraction, v: Fraction) -> Fraction | None:
        s = u + v
        return s if s <= ONE else None

    def prod_value(self, u: Fraction, v: Fraction) -> Fraction | None:
        s = u + v - 1
        return s if s >= ZERO else None

    def supp_value(self, u: Fraction) -> Fraction:
        return ONE - u

    def q_value(self, u: Fraction) -> Fraction:
        return std_q(u)

    def d_value(self, u: Fraction) -> Fraction:
        return std_d(u)

    def label(self, u: Fraction) -> str:
        return str(u)

    def __repr__(self) -> str:
        return "UNIT"


UNIT = UnitInterval()


@dataclass(frozen=True)
class Term:
    """A composite of ``q`` and ``d``, written as composition: ``q.d`` is q∘d
    (apply ``d`` first)."""

    symbols: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.symbols:
            raise ValueError("a term needs at least one symbol")
        bad = set(self.symbols) - {"q", "d"}
        if bad:
            raise ValueError(f"unknown symbols {sorted(bad)}")

    @classmethod
    def parse(cls, text: str) -> "Term":
        parts = [p for p in text.replace("∘", ".").replace(" ", "").split(".") if p]
        return cls(tuple(parts))

    def __str__(self) -> str:
        return ".".join(self.symbols)

    def after(self, other: "Term") -> "Term":
        """``self ∘ other``."""
        return Term(self.symbols + other.symbols)

    def __len__(self) -> int:
        return len(self.symbols)

    def apply_value(self, algebra: Any, u: Any) -> Any:
        for sym in reversed(self.symbols):
            u = algebra.q_value(u) if sym == "q" else algebra.d_value(u)
        return u

    def __call__(self, algebra: Any, x: Any) -> Any:
        return eval_term(self, algebra, x)


def mu(m: int) -> Term:
    """``d`` iterated ``m`` times."""
    if m < 1:
        raise ValueError("mu(m) needs m >= 1")
    return Term(("d",) * m)


def threshold_term(r: Fraction) -> Term:
    """A term ``t`` with ``t(x) = 1`` iff ``r <= x`` on the unit interval.

    Built from the binary expansion of ``r``: ``1/2`` is ``q``; below one
    half recurse on ``2r`` after ``q``, above one half recurse on ``2r - 1``
    after ``d``.
    """
    r = Fraction(r)
    if not ZERO < r < ONE:
        raise ValueError(f"threshold must lie strictly inside (0, 1), got {r}")
    if not is_dyadic(r):
        raise ValueError(f"threshold {r} is not dyadic")
    outer: list[str] = []
    while r != HALF:
        if r < HALF:
            outer.append("q")
            r = 2 * r
        else:
            outer.append("d")
            r = 2 * r - 1
    # outer[0] is applied first, so it goes last in composition order
    return Term(("q",) + tuple(reversed(outer)))


def eval_term(term: Term, algebra: Any, x: Any) -> Any:
    """Evaluate ``term`` at ``x``.

    On a finite algebra ``x`` is an element name (or index) and the result
    has the same form; on :data:`UNIT` it is a rational.
    """
    if algebra is UNIT or isinstance(algebra, UnitInterval):
        return term.apply_value(UNIT, unit(x))
    i = algebra.idx(x)
    out = term.apply_value(algebra, i)
    return algebra.names[out] if isinstance(x, str) else out


def dyadic_grid(k: int) -> list[Fraction]:
    return [Fraction(j, 2**k) for j in range(2**k + 1)]


def verify_threshold(k: int) -> Report:
    """Check ``t_r(x) = 1 iff r <= x`` for every grid pair at resolution 2^-k,
    and that ``t_r(x) != 1`` forces ``x < r``."""
    if not 1 <= k <= 12:
        raise ValueError("grid exponent must be in 1..12")
    start = time.perf_counter()
    rep = Report(f"threshold terms on grid 2^-{k}")
    den = 2**k
    pairs = 0
    for i in range(1, den):
        r = Fraction(i, den)
        term = threshold_term(r)
        for j in range(den + 1):
            x = Fraction(j, den)
            hit = term.apply_value(UNIT, x) == ONE
            pairs += 1
            rep.check("t_r(x)=1 iff r<=x", hit == (r <= x), {"r": r, "x": x, "term": str(term)})
            if not hit:
                rep.check("t_r(x)!=1 implies x<r", x < r, {"r": r, "x": x})
    rep.details["pairs"] = pairs
    rep.details["thresholds"] = den - 1
    rep.elapsed = time.perf_counter() - start
    return rep


def verify_unit_detection(algebra: Any, state: Any, k: int) -> Report:
    """On a linearly ordered algebra with q-state ``state``: ``s(x) = 1`` iff
    every grid threshold term sends ``x`` to 1 inside the algebra; when some
    ``t_r(x) != 1`` then ``s(x) < r``.

    The grid must be fine enough to separate the largest value below one
    from one; that precondition is checked and reported.
    """
    rep = Report(f"unit detection by threshold terms on {getattr(algebra, 'name', 'algebra')}")
    values = list(state.values)
    below = [v for v in values if v < ONE]
    fine = not below or max(below) < ONE - Fraction(1, 2**k)
    if not fine:
        return rep.inapplicable("grid too coarse to separate values below 1")
    terms = [(Fraction(i, 2**k), threshold_term(Fraction(i, 2**k))) for i in range(1, 2**k)]
    for x in range(algebra.n):
        all_one = True
        for r, term in terms:
            if term.apply_value(algebra, x) != algebra.one:
                all_one = False
                rep.check("t_r(x)!=1 implies s(x)<r", values[x] < r,
                          {"x": algebra.names[x], "r": r, "s(x)": values[x]})
        rep.check("s(x)=1 iff all t_r(x)=1", (values[x] == ONE) == all_one,
                  {"x": algebra.names[x], "s(x)": values[x]})
    return rep


def iterated_product(algebra: Any, factors: Sequence[Any]) -> Any | None:
    """Left-folded partial product; ``None`` once a step is undefined."""
    acc = factors[0]
    for h in factors[1:]:
        acc = algebra.prod_value(acc, h)
        if acc is None:
            return None
    return acc


def verify_obind(algebra: Any, h: Any, h_list: Sequence[Any], k: int) -> bool:
    """``mu_k(h) <= h_1 · ... · h_{2^k}``, padding ``h_list`` with 1.

    ``algebra`` is :data:`UNIT` (rational arguments) or a finite q-effect
    algebra (element names or indices). Precondition failures raise
    ``ValueError``.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if algebra is UNIT:
        hv, hs = unit(h), [unit(x) for x in h_list]
    else:
        hv, hs = algebra.idx(h), [algebra.idx(x) for x in h_list]
    if len(hs) > 2**k:
        raise ValueError(f"at most 2^{k} factors allowed")
    hs = hs + [algebra.one_value] * (2**k - len(hs))
    if not all(algebra.leq_value(hv, x) for x in hs):
        raise ValueError("precondition violated: h must lie below every factor")
    prod = iterated_product(algebra, hs)
    if prod is None:
        raise ValueError("precondition violated: the iterated product is undefined")
    return algebra.leq_value(mu(k).apply_value(algebra, hv), prod)


def scan_obind(algebra: Any, k: int) -> Report:
    """Exhaustive check of :func:`verify_obind` over every admissible tuple of
    a finite q-effect algebra (tuples of exactly 2^k factors)."""
    from itertools import product

    rep = Report(f"mu_{k} product bound on {algebra.name}")
    n, tested = algebra.n, 0
    for h in range(n):
        above = [x for x in range(n) if algebra.leq_value(h, x)]
        for hs in product(above, repeat=2**k):
            p = iterated_product(algebra, list(hs))
            if p is None:
                continue
            tested += 1
            ok = algebra.leq_value(mu(k).apply_value(algebra, h), p)
            rep.check("mu_k(h) <= product", ok,
                      {"h": algebra.names[h], "factors": [algebra.names[x] for x in hs]})
    rep.details["tuples"] = tested
    return rep


def rationals(values: Iterable[Any]) -> tuple[Fraction, ...]:
    return tuple(unit(v) for v in values)
