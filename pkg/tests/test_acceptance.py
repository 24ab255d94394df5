"""One test per acceptance criterion. Each records a PASS/FAIL line that is
printed in the terminal summary. Everything is exact, so the only pinned
tolerances are the runtime budgets below."""
from __future__ import annotations

import time
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import HealthCheck, given, settings
from hypothesis import strategies as st

from qtense import (AlgebraMap, Frame, StateVector, build, canonical_connection,
                    canonical_tense, check_galois_connection, check_semi_state, classify,
                    compare_by_unit_sets, direct_power, enumerate_extreme_q_states,
                    enumerate_mv_morphisms, load_bundled, meet_semistates, powerset_galois,
                    validate_effect_axioms, validate_q_axioms, verify_infimum_decomposition,
                    verify_jp_implies_strong, verify_superadditivity, verify_threshold,
                    verify_tense_representation)
from qtense.representation import frame_operators
from qtense.states import enumerate_semi_state_vertices, verify_constant_one
from qtense.tense import CLOSURES, random_time_frame

from oracles import brute_galois, canonical_G, grid_q_states, lp_extreme

BUDGET = {1: 1.0, 2: 10.0, 3: 60.0, 4: 30.0}  # seconds

# q and d of the eleven-element example, column by column as published
FIG1_Q = {"0": "0", "a": "a", "b": "2b", "c": "c", "a+b": "a+b", "2b": "4b", "3b": "1",
          "4b": "1", "5b": "1", "b+c": "b+c", "1": "1"}
FIG1_D = {"0": "0", "a": "a", "b": "0", "c": "c", "a+b": "a+b", "2b": "0", "3b": "0",
          "4b": "2b", "5b": "4b", "b+c": "b+c", "1": "1"}


def _frames(count=50, seed0=1000):
    """Seeded time frames with 1..4 points over L3 (even) and L5 (odd),
    cycling through the closures so every corollary property is exercised."""
    out = []
    for i in range(count):
        rng = np.random.default_rng(seed0 + i)
        size = int(rng.integers(1, 5))
        out.append((build("L3" if i % 2 == 0 else "L5"),
                    random_time_frame(rng, size, 0.5, CLOSURES[i % len(CLOSURES)]), i))
    return out


def test_criterion_1_fig1_fidelity(verdict):
    start = time.perf_counter()
    E = load_bundled("fig1")
    eff = validate_effect_axioms(E)
    qax = validate_q_axioms(E)
    cls = classify(E)
    elapsed = time.perf_counter() - start

    table_ok = ({x: E.names[E.q[i]] for i, x in enumerate(E.names)} == FIG1_Q
                and {x: E.names[E.d[i]] for i, x in enumerate(E.names)} == FIG1_D)
    assert eff.verdict == "certified"
    assert table_ok
    assert cls.details["is_lattice"] is False and cls.details["no_join"] == ["a", "b"]
    assert elapsed < BUDGET[1]

    failing = [k for k, ok in qax.checks.items() if not ok]
    ok = qax.verdict == "certified"
    verdict(1, ok, f"E1-E4 certified, q/d table exact, no join of (a,b), {elapsed:.3f}s; "
                   f"q-axioms: {qax.verdict} {failing} witnesses {qax.witnesses}")
    if not ok:
        # the published q/d table breaks Q3 and Q5; see the decisions ledger
        assert failing == ["Q3 d order-preserving", "Q5 d(z) <= x.y"]
        pytest.xfail("published q/d table violates Q3 (a <= 5b, d(a)=a > d(5b)=4b) and Q5")


def test_criterion_2_threshold_grid(verdict):
    start = time.perf_counter()
    rep = verify_threshold(8)
    elapsed = time.perf_counter() - start
    failures = len(rep.witnesses)
    ok = rep.verdict == "certified" and rep.details["pairs"] == 255 * 257 and elapsed < BUDGET[2]
    verdict(2, ok, f"{rep.details['pairs']} pairs, {failures} failures, {elapsed:.2f}s")
    assert ok


def test_criterion_3_canonical_soundness(verdict):
    start = time.perf_counter()
    bad, props, modes = [], set(), set()
    for M, frame, i in _frames():
        rep = canonical_tense(M, frame).certify(seed=i)
        props.update(rep.details["properties"])
        modes.add(rep.details["mode"])
        if not rep.ok:
            bad.append((i, rep.failed))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < BUDGET[3] and props == {"reflexive", "symmetric", "transitive"}
    verdict(3, ok, f"50 frames, {len(bad)} violations, modes {sorted(modes)}, "
                   f"properties seen {sorted(props)}, {elapsed:.2f}s")
    assert ok, bad


def _round_trip(P, frame, coords_vals):
    ops = frame_operators(P, frame)
    states = enumerate_mv_morphisms(P)
    rep = verify_tense_representation(P, ops["G"], ops["H"], states, complete=True)
    if rep.verdict != "certified" or rep.details["residuals"]:
        return False
    R = np.array(rep.details["relation"], dtype=bool)
    if not np.array_equal(R, frame.R):
        return False
    # the synthesized relation's G* on coordinate vectors against the
    # generating relation's operator, via the loop oracle
    g = ops["G"].table
    for x, v in enumerate(coords_vals):
        if list(coords_vals[g[x]]) != canonical_G(list(v), R.tolist()):
            return False
    return True


def _coordinate_values(P):
    factors, coords = P.provenance[1], P.provenance[2]
    tops = [f.n - 1 for f in factors]
    return [tuple(F(int(c), t) for c, t in zip(row, tops)) for row in coords]


def test_criterion_4_representation_round_trip(verdict):
    start = time.perf_counter()
    cube = direct_power(build("L3"), 3)
    cube_vals = _coordinate_values(cube)
    results = []
    for seed in range(12):
        frame = random_time_frame(np.random.default_rng(seed), 3, 0.5, CLOSURES[seed % len(CLOSURES)])
        results.append(_round_trip(cube, frame, cube_vals))
    # on L2 x L3 a frame must keep each coordinate in its own chain: only the
    # loops at either point are admissible
    mixed = build("L2xL3")
    mixed_vals = _coordinate_values(mixed)
    for pairs in ([], [("p", "p")], [("q", "q")], [("p", "p"), ("q", "q")]):
        results.append(_round_trip(mixed, Frame.from_pairs(["p", "q"], None, pairs), mixed_vals))
    elapsed = time.perf_counter() - start
    ok = all(results) and elapsed < BUDGET[4]
    verdict(4, ok, f"{sum(results)}/{len(results)} frames round-trip exactly "
                   f"(12 on L3^3, 4 on L2xL3), zero residual, {elapsed:.2f}s")
    assert ok


SMALL_BUNDLED = ["L2", "L3", "L4", "L5", "L6", "B1", "B2", "L2xL3", "MO2", "D1", "D2"]


def test_criterion_5_state_oracles(verdict):
    mismatched = []
    for name in SMALL_BUNDLED:
        alg = load_bundled(name)
        assert alg.n <= 6
        lp = sorted(s.values for s in enumerate_extreme_q_states(alg))
        oracle = sorted(lp_extreme(grid_q_states(alg)))
        if lp != oracle:
            mismatched.append(name)

    pool = []
    for name in ["L3", "L4", "B2", "L2xL3", "MO2", "D2"]:
        alg = build(name)
        pool.append((alg, enumerate_semi_state_vertices(alg)))
    for name, k in [("L3", 2), ("L2", 3), ("L4", 2)]:
        alg = direct_power(build(name), k)
        pool.append((alg, list(enumerate_mv_morphisms(alg))))
    cases = {"n": 0, "bad": []}

    @settings(max_examples=250, derandomize=True, database=None, deadline=None,
              suppress_health_check=list(HealthCheck))
    @given(st.integers(0, len(pool) - 1), st.data())
    def check(which, data):
        alg, gens = pool[which]
        picks = data.draw(st.lists(st.sampled_from(range(len(gens))), min_size=1, max_size=4))
        t = meet_semistates([gens[i] for i in picks])
        s = gens[data.draw(st.sampled_from(range(len(gens))))]
        cases["n"] += 1
        if not check_semi_state(alg, t).ok:
            cases["bad"].append(("meet closure", alg.name, picks))
        c = compare_by_unit_sets(alg, t, s)
        if c.pointwise != c.unit_sets:
            cases["bad"].append(("unit-set comparison", alg.name, picks))
        if not verify_jp_implies_strong(alg, [t, s]).ok:
            cases["bad"].append(("Jauch-Piron implies strong", alg.name, picks))

    check()
    ok = not mismatched and not cases["bad"] and cases["n"] >= 200
    agree = len(SMALL_BUNDLED) - len(mismatched)
    verdict(5, ok, f"LP and grid oracle agree on {agree}/{len(SMALL_BUNDLED)} algebras {mismatched or ''}; "
                   f"{cases['n']} property cases, {len(cases['bad'])} counterexamples")
    assert ok, (mismatched, cases["bad"][:5])


def test_criterion_6_infimum_decomposition(verdict):
    n, bad, const_one, superadd = 0, [], 0, 0
    for M, frame, _ in _frames():
        power = direct_power(M, len(frame.S))
        states = list(enumerate_mv_morphisms(power))
        G = canonical_tense(M, frame).maps_on(power)["G"]
        for s in states:
            t = StateVector(power, tuple(s.values[int(G.table[x])] for x in range(power.n)))
            n += 1
            if not check_semi_state(power, t, "jauch_piron").details["jauch_piron"]:
                bad.append(("not Jauch-Piron", frame.name, s.label))
                continue
            if verify_infimum_decomposition(power, states, t, complete=True).verdict != "certified":
                bad.append(("infimum", frame.R.tolist(), s.label))
            if t.values[power.zero] != 0:
                const_one += 1
                if verify_constant_one(power, states, t).verdict != "certified":
                    bad.append(("constant one", frame.R.tolist(), s.label))
            else:
                superadd += 1
                if verify_superadditivity(power, t).verdict != "certified":
                    bad.append(("superadditivity", frame.R.tolist(), s.label))
    ok = not bad and const_one > 0 and superadd > 0
    verdict(6, ok, f"{n} vectors s.G*, {len(bad)} counterexamples "
                   f"({const_one} constant-one cases, {superadd} superadditivity cases)")
    assert ok, bad[:5]


def _deliberate_connections(rng):
    """Pairs known to be Galois connections, on bundled posets and beyond."""
    out = []
    for name in ["L2", "L3", "L5", "B2", "L2xL3", "MO2", "fig1v"]:
        A = build(name)
        ident = AlgebraMap.identity(A)
        out.append((ident, ident))
        # f constantly bottom is left adjoint to g constantly top
        out.append((AlgebraMap(A, A, (A.zero,) * A.n), AlgebraMap(A, A, (A.one,) * A.n)))
    for _ in range(30):
        m, k = int(rng.integers(1, 4)), int(rng.integers(1, 4))
        pair = powerset_galois([f"a{i}" for i in range(m)], [f"b{j}" for j in range(k)],
                               rng.random((m, k)) < 0.5)
        out.append((pair.f, pair.g))
    for M, frame, _ in _frames(20, seed0=2000):
        if len(frame.S) <= 3:
            pair = canonical_connection(M, frame).as_pair()
            out.append((pair.f, pair.g))
    return out


def test_criterion_7_galois_self_consistency(verdict):
    rng = np.random.default_rng(7)
    names = ["L2", "L3", "L4", "B2", "L2xL3", "MO2", "D1", "fig1v"]
    pairs = _deliberate_connections(rng)
    while len(pairs) < 600:
        A, B = build(names[rng.integers(len(names))]), build(names[rng.integers(len(names))])
        f = AlgebraMap(A, B, tuple(int(v) for v in rng.integers(0, B.n, A.n)))
        g = AlgebraMap(B, A, tuple(int(v) for v in rng.integers(0, A.n, B.n)))
        pairs.append((f, g))
    disagree, connections = [], 0
    for f, g in pairs:
        rep = check_galois_connection(f, g)
        c1, c2, c3 = rep.details["conditions"]
        brute = brute_galois(f.source.leq.tolist(), f.target.leq.tolist(), list(f.table), list(g.table))
        connections += c1
        if not (c1 == c2 == c3 == brute):
            disagree.append((f.source.name, f.target.name, f.table, g.table))
    ok = not disagree and len(pairs) >= 500 and connections > 0 and connections < len(pairs)
    verdict(7, ok, f"{len(pairs)} pairs ({connections} connections), {len(disagree)} disagreements")
    assert ok, disagree[:5]
