"""Text formats, their error reporting, and the command line."""
from __future__ import annotations

import json
import subprocess
import sys
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qtense import (Frame, build, bundled_examples, direct_product, load_bundled, parse_algebra, parse_frame,
                    serialize_algebra)
from qtense.algebra import is_isomorphic
from qtense.cli import main
from qtense.io import (ParseError, parse_maps, parse_states, parse_workspace, quote,
                       serialize_frame, serialize_maps, serialize_states, split_list, unquote)
from qtense.representation import frame_operators
from qtense.tense import random_time_frame


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


# -- parsing -------------------------------------------------------------------------

def test_parse_errors_carry_lines():
    head = "elements: 0, a, 1\nzero: 0\none: 1\n"
    with pytest.raises(ParseError) as exc:
        parse_algebra(head + "sum: a+a=1\nbogus: 3\n", "t.alg")
    assert exc.value.errors == [("t.alg", 5, "unknown key 'bogus'")]
    with pytest.raises(ParseError) as exc:
        parse_algebra(head + "sum: a+a=1; a+b=1\n", "t.alg")
    assert [ln for _, ln, _ in exc.value.errors] == [4]


def test_missing_keys():
    with pytest.raises(ParseError):
        parse_algebra("elements: 0, 1\none: 1\n")
    with pytest.raises(ParseError):
        parse_frame("R: a~b\n")
    with pytest.raises(ParseError):
        parse_maps("G: 0->0\n")
    with pytest.raises(ParseError):
        parse_states("columns: 0, 1\nrow: 0, 2\n")


def test_q_and_d_go_together():
    with pytest.raises(ParseError):
        parse_algebra("elements: 0, 1\nzero: 0\none: 1\nq: 0->0, 1->1\n")


def test_quoting_round_trip():
    for name in ["a+b", "x,y", "p q", "a->b", "", "c~d", 'say "hi"']:
        assert unquote(quote(name)) == name
    assert split_list('"a,b", c') == ['"a,b"', "c"]


@pytest.mark.parametrize("name", bundled_examples())
def test_serialize_round_trip(name):
    alg = load_bundled(name)
    again = parse_algebra(serialize_algebra(alg))
    assert again.names == alg.names
    assert np.array_equal(again.table, alg.table)
    assert list(again.q) == list(alg.q) and list(again.d) == list(alg.d)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.sampled_from(["L2", "L3", "B1"]), min_size=1, max_size=3))
def test_product_round_trip(names):
    P = direct_product(*[build(n) for n in names])
    assert is_isomorphic(parse_algebra(serialize_algebra(P)), P)


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 2**32 - 1))
def test_frame_round_trip(size, seed):
    fr = random_time_frame(np.random.default_rng(seed), size, 0.5)
    back = parse_frame(serialize_frame(fr))
    assert back == fr


def test_states_round_trip():
    text = serialize_states(["0", "1/2", "1"], [[F(0), F(1, 2), F(1)]], algebra="L3", name="id")
    table = parse_states(text)
    assert table.rows == [[0, F(1, 2), 1]] and table.algebra == "L3"


def test_workspace_reports_unresolved(tmp_path):
    (tmp_path / "m.maps").write_text("algebra: nowhere\nG: 0->0\n")
    with pytest.raises(ParseError):
        parse_workspace([tmp_path / "m.maps"])


# -- command line --------------------------------------------------------------------

def test_exit_codes(capsys, tmp_path):
    assert run(capsys, "validate", "L3")[0] == 0
    assert run(capsys, "validate", "fig1")[0] == 1
    assert run(capsys, "validate", "no-such-algebra")[0] == 3
    bad = tmp_path / "bad.alg"
    bad.write_text("elements: 0, 1\nzero: 0\n")
    code, _, err = run(capsys, "validate", str(bad))
    assert code == 3 and "bad.alg" in err
    with pytest.raises(SystemExit) as exc:
        main(["validate"])
    assert exc.value.code == 3
    capsys.readouterr()
    # inapplicable: no q-states to represent with
    (tmp_path / "id.maps").write_text(
        "algebra: fig1v\nG: " + ", ".join(f"{quote(x)}->{quote(x)}" for x in load_bundled("fig1v").names)
        + "\nH: " + ", ".join(f"{quote(x)}->{quote(x)}" for x in load_bundled("fig1v").names) + "\n")
    assert run(capsys, "represent", "--algebra", "fig1v", "--tense", str(tmp_path / "id.maps"))[0] == 2


def test_json_and_text_agree(capsys, tmp_path):
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "validate", "fig1", "--json", str(out))
    doc = json.loads(out.read_text())
    assert doc["command"] == "validate" and doc["exit_code"] == code == 1
    rep = doc["reports"][0]
    assert rep["verdict"] == "violated" and ": violated" in text.splitlines()[0]
    for check, ok in rep["checks"].items():
        assert f"[{'pass' if ok else 'FAIL'}] {check}" in text


def test_classify_and_order(capsys):
    code, text, _ = run(capsys, "classify", "fig1", "--rdp")
    assert code == 0 and "no_join: ['a', 'b']" in text and "rdp: False" in text
    code, text, _ = run(capsys, "order", "L3")
    assert code == 0


def test_states_commands(capsys, tmp_path):
    code, text, _ = run(capsys, "states", "L2xL3", "--extreme")
    assert code == 0 and "row: 0, 1/2, 1, 0, 1/2, 1" in text
    tbl = tmp_path / "s.states"
    tbl.write_text("algebra: L3\ncolumns: 0, 1/2, 1\nrow: 0, 1/2, 1\nrow: 0, 1/3, 1\n")
    assert run(capsys, "states", "L3", "--check", str(tbl))[0] == 1
    assert run(capsys, "states", "MO2", "--order-reflecting")[0] == 1
    one = tmp_path / "one.states"
    one.write_text("columns: 0, 1/2, 1\nrow: 1, 1, 1\n")
    assert run(capsys, "semistate-check", "L3", str(one))[0] == 0


def test_galois_and_tense_commands(capsys, tmp_path):
    names = build("L3").names
    m = tmp_path / "zero.maps"
    m.write_text("algebra: L3\n" + "G: " + ", ".join(f"{quote(x)}->0" for x in names)
                 + "\nH: " + ", ".join(f"{quote(x)}->0" for x in names) + "\n")
    assert run(capsys, "tense-check", str(m))[0] == 1
    one = tmp_path / "one.maps"
    one.write_text("algebra: L3\n" + "G: " + ", ".join(f"{quote(x)}->1" for x in names)
                   + "\nH: " + ", ".join(f"{quote(x)}->1" for x in names) + "\n")
    assert run(capsys, "tense-check", str(one))[0] == 0
    pair = tmp_path / "pair.maps"
    pair.write_text("left: L3\nright: L3\nf: 0->0, 1/2->1/2, 1->1\ng: 0->0, 1/2->1/2, 1->1\n")
    assert run(capsys, "galois-check", str(pair))[0] == 0


def test_canonical_and_represent(capsys, tmp_path):
    fr = tmp_path / "f.frame"
    fr.write_text("S: s, t\nR: s~t, t~t\n")
    code, text, _ = run(capsys, "canonical", "--chain", "L3", "--frame", str(fr), "--check-tense")
    assert code == 0
    code, _, _ = run(capsys, "examples")
    assert code == 0


def test_represent_command(capsys, tmp_path):
    P = build("L2xL3")
    ops = frame_operators(P, Frame.from_pairs(["p", "q"], None, [("q", "q")]))
    maps = {k: ops[k].as_dict() for k in ("G", "H")}
    path = tmp_path / "t.maps"
    path.write_text(serialize_maps("t", "L2xL3", "L2xL3", maps))
    out = tmp_path / "r.json"
    code, text, _ = run(capsys, "represent", "--algebra", "L2xL3", "--tense", str(path), "--json", str(out))
    assert code == 0 and "certified" in text
    rep = json.loads(out.read_text())["reports"][-1]
    assert rep["details"]["relation"] == [[0, 0], [0, 1]]


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "qtense", "validate", "L2"], capture_output=True, text=True)
    assert proc.returncode == 0 and "certified" in proc.stdout
