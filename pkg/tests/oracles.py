"""Independent oracles for frozen expected values.

None of these share code with the package's own solvers: q-states are found
by a vectorized grid search with tolerance, polished to small-denominator
rationals and re-checked exactly; extreme points are filtered with scipy's
LP solver; canonical operators are recomputed with plain Python loops.
"""
from __future__ import annotations

import itertools
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

GRID = 10  # resolution 2^-10


def _constraints(alg):
    """(kind, indices) for every law a q-state must satisfy."""
    out = [("zero", (alg.zero,)), ("one", (alg.one,))]
    for i, j in np.argwhere(alg.table >= 0):
        out.append(("sum", (int(i), int(j), int(alg.table[i, j]))))
    if hasattr(alg, "q"):
        for x in range(alg.n):
            out.append(("q", (x, int(alg.q[x]))))
            out.append(("d", (x, int(alg.d[x]))))
    return out


def _next_element(n, order, cons):
    """Greedy: the element closing the most constraints, so rows get pruned
    as early as possible."""
    placed = set(order)

    def closed(x):
        return sum(1 for _, idx in cons if x in idx and all(i in placed or i == x for i in idx))

    return max((x for x in range(n) if x not in placed), key=lambda x: (closed(x), -x))


def _holds(kind, cols, tol):
    if kind == "zero":
        return np.abs(cols[0]) <= tol
    if kind == "one":
        return np.abs(cols[0] - 1) <= tol
    if kind == "sum":
        return np.abs(cols[0] + cols[1] - cols[2]) <= tol
    if kind == "q":
        return np.abs(np.minimum(2 * cols[0], 1) - cols[1]) <= tol
    return np.abs(np.maximum(2 * cols[0] - 1, 0) - cols[1]) <= tol


def grid_q_states(alg, k: int = GRID, max_den: int = 64) -> list[tuple[Fraction, ...]]:
    """All q-states of a small algebra, by grid search and polishing."""
    grid = np.arange(2**k + 1) / 2**k
    tol = 3.01 / 2**(k + 1)  # grid rounding error of three terms, at most
    cons = _constraints(alg)
    rows = np.zeros((1, 0))
    order: list[int] = []
    for _ in range(alg.n):
        x = _next_element(alg.n, order, cons)
        rows = np.concatenate([np.repeat(rows, len(grid), axis=0),
                               np.tile(grid, len(rows))[:, None]], axis=1)
        order.append(x)
        pos = {e: i for i, e in enumerate(order)}
        keep = np.ones(len(rows), dtype=bool)
        for kind, idx in cons:
            if x in idx and all(i in pos for i in idx):
                keep &= _holds(kind, [rows[:, pos[i]] for i in idx], tol)
        rows = rows[keep]
        if len(rows) > 2_000_000:
            raise RuntimeError("grid oracle blew up")
    rows = rows[:, np.argsort(order)]  # back to carrier order
    found = set()
    for r in rows:
        cand = tuple(Fraction(float(v)).limit_denominator(max_den) for v in r)
        if _exact_q_state(alg, cand):
            found.add(cand)
    return sorted(found)


def _exact_q_state(alg, s) -> bool:
    if s[alg.zero] != 0 or s[alg.one] != 1:
        return False
    for i, j in np.argwhere(alg.table >= 0):
        if s[i] + s[j] != s[alg.table[i, j]]:
            return False
    for x in range(alg.n):
        if s[alg.q[x]] != min(2 * s[x], 1) or s[alg.d[x]] != max(2 * s[x] - 1, 0):
            return False
    return True


def lp_extreme(points) -> list[tuple[Fraction, ...]]:
    """Points not in the convex hull of the others (scipy LP feasibility)."""
    pts = sorted(set(points))
    out = []
    for i, p in enumerate(pts):
        rest = pts[:i] + pts[i + 1:]
        if not rest:
            out.append(p)
            continue
        A = np.array([[float(o[j]) for o in rest] for j in range(len(p))] + [[1.0] * len(rest)])
        b = np.array([float(v) for v in p] + [1.0])
        res = linprog(np.zeros(len(rest)), A_eq=A, b_eq=b, bounds=(0, None), method="highs")
        if res.status != 0:
            out.append(p)
    return out


def canonical_G(values, R):
    """Row minima over R, empty minimum 1."""
    return [min((values[t] for t in range(len(R)) if R[s][t]), default=Fraction(1))
            for s in range(len(R))]


def canonical_P(values, R):
    return [max((values[s] for s in range(len(R)) if R[s][t]), default=Fraction(0))
            for t in range(len(R[0]))]


def brute_galois(la, lb, f, g) -> bool:
    """Adjunction by definition, with explicit loops."""
    return all((lb[f[a]][b]) == (la[a][g[b]]) for a in range(len(la)) for b in range(len(lb)))



def all_subsets(n):
    return itertools.chain.from_iterable(itertools.combinations(range(n), k) for k in range(n + 1))
