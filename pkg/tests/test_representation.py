"""Embedding into powers of [0,1], frames synthesized from maps and the
representation of q-tense operators."""
from __future__ import annotations

from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtense import (AlgebraMap, Frame, GaloisPair, Inapplicable, StateVector, build, build_embedding, canonical_connection,
                    direct_power, enumerate_extreme_q_states, enumerate_mv_morphisms,
                    load_bundled, synthesize_frame, verify_representation_g,
                    verify_representation_pair, verify_tense_representation)
from qtense.representation import (_quotient_morphisms, check_mv_morphism, default_states,
                                   frame_operators)
from qtense.tense import random_time_frame


def test_embedding_of_l2xl3():
    P = build("L2xL3")
    emb = build_embedding(P, enumerate_mv_morphisms(P))
    assert emb.order_reflecting and emb.report.ok
    assert emb("(1,1/2)") == (1, F(1, 2))
    assert emb("(0,1)") == (0, 1)


def test_embedding_rejects_non_q_states():
    L3 = build("L3")
    with pytest.raises(Inapplicable):
        build_embedding(L3, [StateVector.constant(L3)])


def test_mo2_embedding_is_not_order_reflecting():
    MO2 = build("MO2")
    emb = build_embedding(MO2, enumerate_extreme_q_states(MO2))
    assert not emb.order_reflecting
    assert emb.report.details["witness"] == ("a", "a'")


@pytest.mark.parametrize("name", ["L2", "L5", "B2", "B3", "L2xL3", "D2"])
def test_mv_morphisms_are_the_extreme_q_states(name):
    # two routes: coordinates or maximal ideals, against the polytope enumeration
    alg = build(name)
    morph = {s.values for s in enumerate_mv_morphisms(alg)}
    assert morph == {s.values for s in enumerate_extreme_q_states(alg)}
    for s in enumerate_mv_morphisms(alg):
        assert check_mv_morphism(alg, s)


def test_quotient_and_coordinate_routes_agree():
    P = direct_power(build("L3"), 2)
    coord = {s.values for s in enumerate_mv_morphisms(P)}
    assert {s.values for s in _quotient_morphisms(P)} == coord
    assert len(_quotient_morphisms(build("L3"))) == 1


def test_mv_morphisms_refuse_non_mv():
    with pytest.raises(Inapplicable):
        enumerate_mv_morphisms(build("MO2"))


def test_default_states():
    S, complete = default_states(build("L2xL3"))
    assert complete and len(S) == 2
    S, complete = default_states(build("MO2"))
    assert not complete and len(S) == 1


def test_connection_between_different_powers():
    L3 = build("L3")
    fr = Frame.from_pairs(["s1", "s2"], ["t1", "t2", "t3"], [("s1", "t1"), ("s1", "t3"), ("s2", "t2")])
    pair = canonical_connection(L3, fr).as_pair()
    SA, SB = enumerate_mv_morphisms(pair.A), enumerate_mv_morphisms(pair.B)
    rep = verify_representation_pair(pair.A, pair.B, pair, SA, SB, complete=True)
    assert rep.verdict == "certified"
    assert rep.details["relation"] == fr.R.astype(int).tolist()
    syn = synthesize_frame(SA, SB, pair.g)
    assert not syn.frame.is_time_frame


def test_non_connection_is_inapplicable():
    L3 = build("L3")
    pair = canonical_connection(L3, Frame.from_pairs(["s", "t"], None, [("s", "t")])).as_pair()
    P = pair.A
    zero = AlgebraMap(P, P, (P.zero,) * P.n)
    bad = GaloisPair(zero, zero)
    S = enumerate_mv_morphisms(P)
    assert verify_representation_g(P, P, bad, S, S).verdict == "inapplicable"
    assert verify_representation_g(P, P, pair, S, S, complete=True).verdict == "certified"


def test_fig1v_has_no_states_to_represent_with():
    E = load_bundled("fig1v")
    ident = AlgebraMap.identity(E)
    rep = verify_tense_representation(E, ident, ident)
    assert rep.verdict == "inapplicable"


def test_axiom_violation_is_classified():
    L3 = build("L3")
    zero = AlgebraMap(L3, L3, (L3.zero,) * L3.n)
    rep = verify_tense_representation(L3, zero, zero)
    assert rep.verdict == "violated"
    assert rep.details["classification"] == "axiom-violation"


def test_frames_on_l2xl3_must_respect_the_factors():
    P = build("L2xL3")
    ok = Frame.from_pairs(["p", "q"], None, [("q", "q")])
    ops = frame_operators(P, ok)
    rep = verify_tense_representation(P, ops["G"], ops["H"])
    assert rep.verdict == "certified"
    assert rep.details["relation"] == [[0, 0], [0, 1]]
    cross = Frame.from_pairs(["p", "q"], None, [("p", "q")])
    with pytest.raises(Inapplicable):
        frame_operators(P, cross)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 2**32 - 1), st.sampled_from(["raw", "reflexive", "symmetric", "transitive"]))
def test_round_trip_on_cube(seed, closure):
    L3 = build("L3")
    P = direct_power(L3, 3)
    frame = random_time_frame(np.random.default_rng(seed), 3, 0.5, closure)
    ops = frame_operators(P, frame)
    rep = verify_tense_representation(P, ops["G"], ops["H"], enumerate_mv_morphisms(P), complete=True)
    assert rep.verdict == "certified"
    assert rep.details["relation"] == frame.R.astype(int).tolist()
