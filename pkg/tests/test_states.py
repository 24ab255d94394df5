"""States, q-states, the q-semi-state hierarchy and the extreme q-state
enumeration."""
from __future__ import annotations

import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtense import (Inapplicable, StateSet, StateVector, build, check_order_reflecting,
                    check_semi_state, check_state, compare_by_unit_sets, direct_power,
                    enumerate_extreme_q_states, enumerate_mv_morphisms, join_chain_semistates,
                    load_bundled, meet_semistates, verify_infimum_decomposition,
                    verify_jp_implies_strong, verify_superadditivity)
from qtense.states import enumerate_semi_state_vertices, verify_constant_one

from oracles import grid_q_states, lp_extreme


def vec(alg, *vals):
    return StateVector(alg, tuple(F(v) for v in vals))


def test_extreme_states_of_b2_and_l2xl3():
    # frozen from the grid oracle: the two coordinate projections
    B2 = build("B2")
    assert {s.values for s in enumerate_extreme_q_states(B2)} == {
        (0, 0, 1, 1), (0, 1, 0, 1)}
    P = build("L2xL3")
    assert {s.values for s in enumerate_extreme_q_states(P)} == {
        (0, 0, 0, 1, 1, 1), (0, F(1, 2), 1, 0, F(1, 2), 1)}


def test_mo2_has_one_q_state():
    MO2 = build("MO2")
    S = enumerate_extreme_q_states(MO2)
    assert [s.values for s in S] == [(0, F(1, 2), F(1, 2), F(1, 2), F(1, 2), 1)]
    rep = check_order_reflecting(MO2, S)
    assert rep.verdict == "violated"


@pytest.mark.parametrize("name", ["fig1", "fig1v"])
def test_eleven_element_algebras_have_no_q_states(name):
    # 6b = 1 forces s(b) = 1/6; the laws at a and c force s(a), s(c) into
    # {0, 1} and then below 1/2, so s(a) = s(c) = 0 and s(b) = 1, a contradiction
    alg = load_bundled(name)
    assert len(enumerate_extreme_q_states(alg)) == 0


@pytest.mark.parametrize("name", ["L3", "B2", "L2xL3", "MO2", "D1"])
def test_against_grid_oracle(name):
    alg = build(name)
    found = sorted(s.values for s in enumerate_extreme_q_states(alg))
    assert found == sorted(lp_extreme(grid_q_states(alg)))


def test_state_and_semi_state_flags():
    L3 = build("L3")
    ident = vec(L3, 0, F(1, 2), 1)
    rep = check_state(L3, ident)
    assert rep.details["state"] and rep.details["q_state"]
    # s(1/2) + s(1/2) must equal s(1)
    bad = check_state(L3, vec(L3, 0, F(1, 3), 1))
    assert not bad.details["state"]
    one = StateVector.constant(L3)
    semi = check_semi_state(L3, one, "strong")
    assert semi.details["q_semi_state"] and semi.details["jauch_piron"] and semi.details["strong"]
    assert not check_state(L3, one).details["state"]
    # the step function breaks the q law at 1/2
    step = vec(L3, 0, 0, 1)
    assert not check_semi_state(L3, step).ok


def test_jauch_piron_failure_on_b2():
    # unit set {01, 10, 11}: 01 and 10 share no lower bound with value 1
    B2 = build("B2")
    t = vec(B2, 0, 1, 1, 1)
    rep = check_semi_state(B2, t, "jauch_piron")
    assert rep.details["q_semi_state"] and not rep.details["jauch_piron"]
    assert rep.witnesses[0]["x"] in ("01", "10")


def test_semi_state_level_errors():
    with pytest.raises(ValueError):
        check_semi_state(build("L3"), vec(build("L3"), 0, F(1, 2), 1), "weak")


def test_join_needs_a_chain():
    B2 = build("B2")
    a, b = vec(B2, 0, 0, 1, 1), vec(B2, 0, 1, 0, 1)
    with pytest.raises(Inapplicable):
        join_chain_semistates([a, b])
    m = meet_semistates([a, b])
    assert m.values == (0, 0, 0, 1)
    assert meet_semistates([], B2).values == (1, 1, 1, 1)


def test_infimum_needs_order_reflection():
    MO2 = build("MO2")
    S = enumerate_extreme_q_states(MO2)
    rep = verify_infimum_decomposition(MO2, S, StateVector.constant(MO2))
    assert rep.verdict == "inapplicable"


def test_constant_one_corollary():
    P = build("L2xL3")
    S = enumerate_mv_morphisms(P)
    assert verify_constant_one(P, S, StateVector.constant(P)).verdict == "certified"


# -- generated instances -------------------------------------------------------------

POWERS = [("L3", 2), ("L2", 3), ("L5", 1), ("L4", 2), ("L3", 3)]


def _instances(name, k):
    alg = direct_power(build(name), k)
    return alg, list(enumerate_mv_morphisms(alg))


@settings(max_examples=120, deadline=None)
@given(st.sampled_from(POWERS), st.data())
def test_meets_of_morphisms(power, data):
    alg, S = _instances(*power)
    picks = data.draw(st.lists(st.sampled_from(range(len(S))), unique=True))
    t = meet_semistates([S[i] for i in picks], alg)
    rep = check_semi_state(alg, t, "strong")
    # meets of semi-states stay in the class, and Jauch-Piron implies strong
    assert rep.details["q_semi_state"] and rep.details["jauch_piron"]
    assert verify_jp_implies_strong(alg, [t]).verdict == "certified"
    assert verify_infimum_decomposition(alg, S, t, complete=True).verdict == "certified"
    if t.values[alg.zero] == 0:
        assert verify_superadditivity(alg, t).verdict == "certified"
    s = S[data.draw(st.sampled_from(range(len(S))))]
    c = compare_by_unit_sets(alg, t, s)
    assert c.pointwise == c.unit_sets


@pytest.mark.parametrize("name", ["L3", "L4", "B2", "L2xL3", "MO2", "D2"])
def test_semi_state_vertices_and_comparison(name):
    alg = build(name)
    verts = enumerate_semi_state_vertices(alg)
    for v in verts:
        assert check_semi_state(alg, v).ok
    for a, b in itertools.product(verts, repeat=2):
        assert check_semi_state(alg, meet_semistates([a, b])).ok
        c = compare_by_unit_sets(alg, a, b)
        assert c.pointwise == c.unit_sets
    assert verify_jp_implies_strong(alg, verts).ok


def test_state_set_rejects_foreign_members():
    with pytest.raises(ValueError):
        StateSet.of(build("L3"), [vec(build("L2"), 0, 1)])
