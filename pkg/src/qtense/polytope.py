"""Exact vertex enumeration for small rational polytopes.

A polytope is ``{x : E x = e, A x <= b}``. Equalities are eliminated by
Gaussian elimination over Fractions; vertices of what is left are found by
trying every set of ``k`` tight inequalities (``k`` the remaining dimension).
Floats only pre-screen candidates; every returned vertex is re-derived and
checked in exact arithmetic.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

Row = tuple[Sequence[Fraction], Fraction]

SUBSET_CAP = 3_000_000


class TooManyCandidates(ValueError):
    pass


@dataclass(frozen=True)
class AffineSpace:
    """Solutions ``x0 + N @ lam`` of a consistent linear system."""

    x0: tuple[Fraction, ...]
    basis: tuple[tuple[Fraction, ...], ...]  # n rows, k columns

    @property
    def dim(self) -> int:
        return len(self.basis[0]) if self.basis else 0

    def point(self, lam: Sequence[Fraction]) -> tuple[Fraction, ...]:
        return tuple(x + sum((c * l for c, l in zip(row, lam)), Fraction(0))
                     for x, row in zip(self.x0, self.basis))

    def fixed(self, i: int) -> Fraction | None:
        return self.x0[i] if not any(self.basis[i]) else None


def solve_equalities(rows: Sequence[Row], n: int) -> AffineSpace | None:
    """Reduced row echelon form over Fractions; ``None`` if inconsistent."""
    m = [list(map(Fraction, a)) + [Fraction(b)] for a, b in rows]
    pivots: list[int] = []
    r = 0
    for c in range(n):
        p = next((i for i in range(r, len(m)) if m[i][c] != 0), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = 1 / m[r][c]
        m[r] = [v * inv for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c] != 0:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    if any(all(v == 0 for v in row[:n]) and row[n] != 0 for row in m):
        return None
    free = [c for c in range(n) if c not in pivots]
    x0 = [Fraction(0)] * n
    basis = [[Fraction(0)] * len(free) for _ in range(n)]
    for j, c in enumerate(free):
        basis[c][j] = Fraction(1)
    for i, c in enumerate(pivots):
        x0[c] = m[i][n]
        for j, fc in enumerate(free):
            basis[c][j] = -m[i][fc]
    return AffineSpace(tuple(x0), tuple(tuple(r) for r in basis))


def _integer_row(coeffs: Sequence[Fraction], rhs: Fraction) -> tuple[tuple[int, ...], int]:
    den = 1
    for v in (*coeffs, rhs):
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in (*coeffs, rhs)]
    g = 0
    for v in ints:
        g = math.gcd(g, abs(v))
    g = g or 1
    ints = [v // g for v in ints]
    return tuple(ints[:-1]), ints[-1]


def _exact_solve(a: list[list[int]], b: list[int]) -> list[Fraction] | None:
    space = solve_equalities([(row, rhs) for row, rhs in zip(a, b)], len(a[0]))
    if space is None or space.dim:
        return None
    return list(space.x0)


def reduced_inequalities(space: AffineSpace, ineqs: Sequence[Row]) -> list[tuple[tuple[int, ...], int]] | None:
    """Inequalities in the free parameters, integer-scaled and deduplicated;
    ``None`` when a constant row is violated."""
    k = space.dim
    out = set()
    for a, b in ineqs:
        a = [Fraction(v) for v in a]
        coef = [sum((a[i] * space.basis[i][j] for i in range(len(a)) if a[i]), Fraction(0))
                for j in range(k)]
        rhs = Fraction(b) - sum((a[i] * space.x0[i] for i in range(len(a)) if a[i]), Fraction(0))
        if not any(coef):
            if rhs < 0:
                return None
            continue
        out.add(_integer_row(coef, rhs))
    return sorted(out)


def vertices(eqs: Sequence[Row], ineqs: Sequence[Row], n: int) -> list[tuple[Fraction, ...]]:
    """All vertices of a bounded polytope, as exact points in ``Q^n``."""
    space = solve_equalities(eqs, n)
    if space is None:
        return []
    rows = reduced_inequalities(space, ineqs)
    if rows is None:
        return []
    k = space.dim
    if k == 0:
        return [space.x0]
    if len(rows) < k:
        raise ValueError("polytope is unbounded")
    A = np.array([r[0] for r in rows], dtype=np.float64)
    b = np.array([r[1] for r in rows], dtype=np.float64)
    total = math.comb(len(rows), k)
    if total > SUBSET_CAP:
        raise TooManyCandidates(f"{total} candidate bases in dimension {k}")
    found: set[tuple[Fraction, ...]] = set()
    combos = itertools.combinations(range(len(rows)), k)
    while True:
        chunk = np.array(list(itertools.islice(combos, 20000)), dtype=np.int64)
        if chunk.size == 0:
            break
        sub = A[chunk]
        det = np.linalg.det(sub)
        ok = np.abs(det) > 0.5  # integer matrices: nonzero determinants have |det| >= 1
        if not ok.any():
            continue
        chunk, sub = chunk[ok], sub[ok]
        lam = np.linalg.solve(sub, b[chunk][:, :, None])[:, :, 0]
        feas = (lam @ A.T <= b + 1e-7).all(axis=1)
        for idx in chunk[feas]:
            exact = _exact_solve([list(rows[i][0]) for i in idx], [rows[i][1] for i in idx])
            if exact is None:
                continue
            if all(sum((Fraction(c) * v for c, v in zip(r[0], exact)), Fraction(0)) <= r[1]
                   for r in rows):
                found.add(tuple(exact))
    return sorted(space.point(lam) for lam in found)


def is_feasible(eqs: Sequence[Row], ineqs: Sequence[Row], n: int) -> bool:
    return bool(vertices(eqs, ineqs, n))


def _pivot(tab: list[list[Fraction]], basis: list[int], r: int, c: int) -> None:
    inv = 1 / tab[r][c]
    tab[r] = [v * inv for v in tab[r]]
    for i, row in enumerate(tab):
        if i != r and row[c] != 0:
            f = row[c]
            tab[i] = [a - f * b for a, b in zip(row, tab[r])]
    basis[r] = c


def feasible_point(eqs: Sequence[Row], ineqs: Sequence[Row], n: int) -> tuple[Fraction, ...] | None:
    """A point of ``{x >= 0 : E x = e, A x <= b}`` or ``None``.

    Equalities are eliminated first; the simplex then runs on the free
    parameters (split into positive and negative parts), which keeps the
    tableau small when the equalities pin most coordinates.
    """
    space = solve_equalities(eqs, n)
    if space is None:
        return None
    nonneg = [([-1 if j == i else 0 for j in range(n)], 0) for i in range(n)]
    rows = reduced_inequalities(space, list(ineqs) + nonneg)
    if rows is None:
        return None
    k = space.dim
    if k == 0 or not rows:
        return space.x0
    split = [(list(a) + [-v for v in a], b) for a, b in rows]
    lam2 = _phase_one([], split, 2 * k)
    if lam2 is None:
        return None
    return space.point([lam2[j] - lam2[k + j] for j in range(k)])


def _phase_one(eqs: Sequence[Row], ineqs: Sequence[Row], n: int) -> tuple[Fraction, ...] | None:
    """Phase one of the simplex method in exact arithmetic with Bland's rule,
    so it terminates and never misreports feasibility (``x >= 0``)."""
    rows = [(list(map(Fraction, a)), Fraction(b), None) for a, b in eqs]
    rows += [(list(map(Fraction, a)), Fraction(b), k) for k, (a, b) in enumerate(ineqs)]
    m, ns = len(rows), len(ineqs)
    if m == 0:
        return tuple(Fraction(0) for _ in range(n))
    width = n + ns + m + 1  # structural, slack, artificial, rhs
    tab = []
    for i, (a, b, slack) in enumerate(rows):
        row = a + [Fraction(0)] * (ns + m) + [b]
        if slack is not None:
            row[n + slack] = Fraction(1)
        if b < 0:
            row = [-v for v in row]
        row[n + ns + i] = Fraction(1)
        tab.append(row)
    basis = [n + ns + i for i in range(m)]
    art = set(basis)
    while True:
        # reduced costs of the phase-one objective (sum of artificials)
        cost = [Fraction(0)] * (width - 1)
        for i, bvar in enumerate(basis):
            if bvar in art:
                for j in range(width - 1):
                    cost[j] -= tab[i][j]
        for j in art:
            cost[j] += 1
        enter = next((j for j in range(width - 1) if cost[j] < 0 and j not in art), None)
        if enter is None:
            break
        ratios = [(tab[i][-1] / tab[i][enter], basis[i], i) for i in range(m) if tab[i][enter] > 0]
        if not ratios:
            break
        _, _, r = min(ratios)
        _pivot(tab, basis, r, enter)
    value = sum((tab[i][-1] for i, bvar in enumerate(basis) if bvar in art), Fraction(0))
    if value > 0:
        return None
    x = [Fraction(0)] * n
    for i, bvar in enumerate(basis):
        if bvar < n:
            x[bvar] = tab[i][-1]
    return tuple(x)


def in_convex_hull(point: Sequence[Fraction], others: Sequence[Sequence[Fraction]]) -> bool:
    """Exact test of ``point`` in ``conv(others)``."""
    if not others:
        return False
    k = len(others)
    eqs = [([o[i] for o in others], point[i]) for i in range(len(point))]
    eqs.append(([Fraction(1)] * k, Fraction(1)))
    return _phase_one(eqs, [], k) is not None


def extreme_points(points: Sequence[Sequence[Fraction]]) -> list[tuple[Fraction, ...]]:
    """Points of a finite set that are not convex combinations of the rest."""
    pts = sorted(set(tuple(map(Fraction, p)) for p in points))
    return [p for i, p in enumerate(pts) if not in_convex_hull(p, pts[:i] + pts[i + 1:])]
