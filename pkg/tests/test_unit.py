"""The standard q-effect algebra on [0,1] and the terms mu_m and t_r."""
from __future__ import annotations

from fractions import Fraction as F

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from qtense import UNIT, Term, build, eval_term, mu, std_d, std_q, threshold_term, verify_threshold
from qtense.states import StateVector
from qtense.unit import iterated_product, scan_obind, verify_obind, verify_unit_detection

unit_values = st.fractions(min_value=0, max_value=1, max_denominator=512)
dyadic_inner = st.integers(1, 12).flatmap(
    lambda k: st.integers(1, 2**k - 1).map(lambda i: F(i, 2**k)))


def test_standard_q_and_d():
    assert std_q(F(1, 3)) == F(2, 3) and std_q(F(2, 3)) == 1
    assert std_d(F(1, 3)) == 0 and std_d(F(3, 4)) == F(1, 2)
    assert UNIT.plus_value(F(1, 2), F(2, 3)) is None
    assert UNIT.plus_value(F(1, 3), F(1, 3)) == F(2, 3)
    assert UNIT.supp_value(F(1, 4)) == F(3, 4)


def test_small_threshold_terms():
    # worked by hand: t_{1/2}=q, t_{1/4}=q.q, t_{3/4}=q.d, t_{3/8}=q.d.q
    assert threshold_term(F(1, 2)) == Term.parse("q")
    assert threshold_term(F(1, 4)) == Term.parse("q.q")
    assert threshold_term(F(3, 4)) == Term.parse("q.d")
    assert threshold_term(F(3, 8)) == Term.parse("q.d.q")
    assert eval_term(Term.parse("q.d"), UNIT, F(3, 4)) == 1
    assert eval_term(Term.parse("q.d"), UNIT, F(5, 8)) == F(1, 2)


def test_term_composition_order():
    # q.d applies d first
    t = Term.parse("q.d")
    assert t.apply_value(UNIT, F(1, 3)) == std_q(std_d(F(1, 3))) == 0
    assert Term.parse("d.q").apply_value(UNIT, F(1, 3)) == std_d(std_q(F(1, 3))) == F(1, 3)
    assert Term.parse("q").after(Term.parse("d")) == t
    assert str(t) == "q.d" and len(t) == 2


def test_bad_thresholds():
    for r in (F(0), F(1), F(1, 3), F(-1, 2)):
        with pytest.raises(ValueError):
            threshold_term(r)
    with pytest.raises(ValueError):
        Term.parse("q.x")
    with pytest.raises(ValueError):
        mu(0)


@settings(max_examples=300, deadline=None)
@given(dyadic_inner, unit_values)
def test_threshold_law(r, x):
    hit = threshold_term(r).apply_value(UNIT, x) == 1
    assert hit == (r <= x)


def test_threshold_grid_k4():
    rep = verify_threshold(4)
    assert rep.verdict == "certified"
    assert rep.details["pairs"] == 15 * 17


def test_mu_is_iterated_d():
    assert mu(3) == Term.parse("d.d.d")
    assert mu(2).apply_value(UNIT, F(7, 8)) == F(1, 2)


@settings(max_examples=200, deadline=None)
@given(st.integers(1, 3), unit_values, st.lists(unit_values, max_size=8))
def test_mu_bounds_products_on_unit(k, h, raw):
    hs = [max(h, x) for x in raw][:2**k]
    # the product is partial: defined only while the running supplements stay below
    assume(iterated_product(UNIT, hs + [F(1)]) is not None)
    assert verify_obind(UNIT, h, hs, k)


def test_obind_preconditions():
    with pytest.raises(ValueError):
        verify_obind(UNIT, F(1, 2), [F(1, 4)], 1)
    with pytest.raises(ValueError):
        verify_obind(UNIT, F(0), [F(1)] * 3, 1)


@pytest.mark.parametrize("name", ["L3", "L5", "B2", "L2xL3", "fig1v"])
def test_obind_scan_on_finite_algebras(name):
    assert scan_obind(build(name), 1).verdict == "certified"


def test_unit_detection_on_chain():
    L5 = build("L5")
    s = StateVector(L5, tuple(F(i, 4) for i in range(5)))
    assert verify_unit_detection(L5, s, 3).verdict == "certified"
    assert verify_unit_detection(L5, s, 2).verdict == "inapplicable"
