"""Plain-text formats for algebras, frames, maps and state tables.

Every format is a sequence of ``key: value`` lines; ``#`` starts a comment
and a line without a known key continues the previous one. Element names
may contain ``+`` (``a+b`` is a perfectly good name); a name holding one of
``,;=~`` or ``->`` at top level must be wrapped in double quotes.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Any, Iterable

import numpy as np

from .algebra import EffectAlgebra, QEffectAlgebra, StructureError

ALGEBRA_KEYS = ("name", "elements", "zero", "one", "sum", "q", "d")
FRAME_KEYS = ("name", "S", "T", "R")
MAP_KEYS = ("name", "algebra", "left", "right", "G", "H", "f", "g")
STATE_KEYS = ("name", "algebra", "columns", "row")


class ParseError(ValueError):
    def __init__(self, errors: list[tuple[str, int, str]]):
        self.errors = errors
        super().__init__("; ".join(f"{p}:{ln}: {m}" if ln else f"{p}: {m}" for p, ln, m in errors))


# -- low-level splitting ---------------------------------------------------------

def _split_top(text: str, sep: str) -> list[tuple[str, int]]:
    """Split at ``sep`` outside quotes and parentheses; keep offsets."""
    out, depth, quoted, start, i = [], 0, False, 0, 0
    while i < len(text):
        ch = text[i]
        if ch == '"':
            quoted = not quoted
        elif not quoted and ch == "(":
            depth += 1
        elif not quoted and ch == ")":
            depth -= 1
        elif not quoted and depth == 0 and text.startswith(sep, i):
            out.append((text[start:i], start))
            i += len(sep)
            start = i
            continue
        i += 1
    out.append((text[start:], start))
    return out


def split_list(text: str, sep: str = ",") -> list[str]:
    return [p.strip() for p, _ in _split_top(text, sep) if p.strip()]


def unquote(token: str) -> str:
    token = token.strip()
    if len(token) >= 2 and token[0] == token[-1] == '"':
        return token[1:-1]
    return token


_SPECIAL = re.compile(r'[,;=~#"\s]|->|^$')


def quote(name: str) -> str:
    return f'"{name}"' if _SPECIAL.search(name) or not _balanced(name) else name


def _balanced(name: str) -> bool:
    depth = 0
    for ch in name:
        depth += ch == "("
        depth -= ch == ")"
        if depth < 0:
            return False
    return depth == 0


@dataclass
class _Line:
    key: str
    value: str
    line: int


def _records(text: str, keys: Iterable[str], path: str) -> list[_Line]:
    keys = tuple(keys)
    out: list[_Line] = []
    errors = []
    for ln, raw in enumerate(text.splitlines(), 1):
        body = _strip_comment(raw).strip()
        if not body:
            continue
        m = re.match(r"^([A-Za-z_]+)\s*:(.*)$", body)
        if m and m.group(1) in keys:
            out.append(_Line(m.group(1), m.group(2).strip(), ln))
        elif m:
            errors.append((path, ln, f"unknown key {m.group(1)!r}"))
        elif out:
            sep = {"sum": "; ", "name": " "}.get(out[-1].key, ", ")
            out[-1].value += sep + body
        else:
            errors.append((path, ln, f"expected one of {', '.join(keys)}"))
    if errors:
        raise ParseError(errors)
    return out


def _strip_comment(line: str) -> str:
    quoted = False
    for i, ch in enumerate(line):
        if ch == '"':
            quoted = not quoted
        elif ch == "#" and not quoted:
            return line[:i]
    return line


# -- algebras --------------------------------------------------------------------

def _resolve(name: str, known: dict[str, int], path: str, ln: int, errors: list) -> str | None:
    n = unquote(name)
    if n not in known:
        errors.append((path, ln, f"unknown element {n!r}"))
        return None
    return n


def _split_sum(lhs: str, known: dict[str, int]) -> list[tuple[str, str]]:
    parts = _split_top(lhs, "+")
    cands = []
    for k in range(1, len(parts)):
        left = lhs[:parts[k][1] - 1]
        right = lhs[parts[k][1]:]
        x, y = unquote(left), unquote(right)
        if x in known and y in known:
            cands.append((x, y))
    return cands


def parse_algebra(text: str, path: str = "<text>") -> EffectAlgebra:
    """Read one algebra; returns a :class:`QEffectAlgebra` when ``q`` and ``d``
    are both given."""
    recs = _records(text, ALGEBRA_KEYS, path)
    if not any(r.key == "elements" for r in recs):
        raise ParseError([(path, 0, "no algebra defined")])
    errors: list[tuple[str, int, str]] = []
    single: dict[str, _Line] = {}
    sums: list[_Line] = []
    for r in recs:
        if r.key == "sum":
            sums.append(r)
        elif r.key in single:
            errors.append((path, r.line, f"duplicate key {r.key!r}"))
        else:
            single[r.key] = r
    elements = [unquote(x) for x in split_list(single["elements"].value)]
    seen: dict[str, int] = {}
    for x in elements:
        if x in seen:
            errors.append((path, single["elements"].line, f"duplicate element {x!r}"))
        seen[x] = len(seen)
    for key in ("zero", "one"):
        if key not in single:
            errors.append((path, 0, f"missing {key}:"))
    if errors:
        raise ParseError(errors)
    zero = _resolve(single["zero"].value, seen, path, single["zero"].line, errors)
    one = _resolve(single["one"].value, seen, path, single["one"].line, errors)

    triples = []
    for r in sums:
        for entry in split_list(r.value, ";"):
            pieces = _split_top(entry, "=")
            if len(pieces) != 2:
                errors.append((path, r.line, f"malformed sum entry {entry!r}"))
                continue
            lhs, rhs = pieces[0][0].strip(), pieces[1][0].strip()
            z = _resolve(rhs, seen, path, r.line, errors)
            cands = _split_sum(lhs, seen)
            if not cands:
                errors.append((path, r.line, f"cannot read {lhs!r} as a sum of declared elements"))
            elif len(cands) > 1:
                errors.append((path, r.line, f"ambiguous sum {lhs!r}; quote the summands"))
            elif z is not None:
                triples.append((*cands[0], z))
    maps: dict[str, dict[str, str]] = {}
    for key in ("q", "d"):
        if key in single:
            maps[key] = _parse_map(single[key], seen, seen, path, errors)
    if ("q" in maps) != ("d" in maps):
        errors.append((path, 0, "give both q: and d: or neither"))
    if errors:
        raise ParseError(errors)
    name = single["name"].value if "name" in single else Path(path).stem
    given = {(x, y) for x, y, _ in triples}
    zero_sums = [(zero, x, x) for x in elements
                 if (zero, x) not in given and (x, zero) not in given]
    try:
        if maps:
            missing = [x for x in elements if x not in maps["q"] or x not in maps["d"]]
            if missing:
                raise ParseError([(path, single["q"].line, f"q/d not total; missing {missing[:5]}")])
            return QEffectAlgebra.from_sums(elements, zero, one, zero_sums + triples,
                                            name=name, q=maps["q"], d=maps["d"])
        return EffectAlgebra.from_sums(elements, zero, one, zero_sums + triples, name=name)
    except StructureError as exc:
        raise ParseError([(path, 0, str(exc))]) from None


def _parse_map(rec: _Line, src: dict, tgt: dict | None, path: str, errors: list) -> dict[str, Any]:
    out: dict[str, Any] = {}
    for entry in split_list(rec.value):
        pieces = _split_top(entry, "->")
        if len(pieces) != 2:
            errors.append((path, rec.line, f"malformed map entry {entry!r}"))
            continue
        x = _resolve(pieces[0][0], src, path, rec.line, errors)
        if tgt is None:
            try:
                y: Any = Fraction(unquote(pieces[1][0]))
            except (ValueError, ZeroDivisionError):
                errors.append((path, rec.line, f"malformed rational {pieces[1][0].strip()!r}"))
                continue
        else:
            y = _resolve(pieces[1][0], tgt, path, rec.line, errors)
        if x is not None and x in out:
            errors.append((path, rec.line, f"{x!r} mapped twice"))
        if x is not None and y is not None:
            out[x] = y
    return out


def serialize_algebra(algebra: EffectAlgebra) -> str:
    """Canonical text: unordered pairs once, zero sums omitted, sums ordered
    lexicographically."""
    names = algebra.names
    lines = [f"name: {algebra.name}"] if algebra.name else []
    lines.append("elements: " + ", ".join(quote(x) for x in names))
    lines.append(f"zero: {quote(names[algebra.zero])}")
    lines.append(f"one: {quote(names[algebra.one])}")
    entries = []
    for i, j in np.argwhere(algebra.table >= 0):
        if algebra.zero in (i, j) or (names[i], i) > (names[j], j):
            continue
        entries.append((names[i], names[j], names[algebra.table[i, j]]))
    def summand(x: str) -> str:
        return f'"{x}"' if "+" in x else quote(x)

    for x, y, z in sorted(entries):
        lines.append(f"sum: {summand(x)}+{summand(y)}={quote(z)}")
    if isinstance(algebra, QEffectAlgebra):
        for key, arr in (("q", algebra.q), ("d", algebra.d)):
            lines.append(f"{key}: " + ", ".join(f"{quote(x)}->{quote(names[arr[i]])}"
                                                for i, x in enumerate(names)))
    return "\n".join(lines) + "\n"


# -- frames ----------------------------------------------------------------------

def parse_frame(text: str, path: str = "<text>"):
    from .tense import Frame

    recs = {r.key: r for r in _records(text, FRAME_KEYS, path)}
    if "S" not in recs:
        raise ParseError([(path, 0, "frame needs S:")])
    S = [unquote(x) for x in split_list(recs["S"].value)]
    T = [unquote(x) for x in split_list(recs["T"].value)] if "T" in recs else list(S)
    errors: list = []
    si = {x: i for i, x in enumerate(S)}
    ti = {x: i for i, x in enumerate(T)}
    if len(si) != len(S) or len(ti) != len(T):
        errors.append((path, recs["S"].line, "duplicate index names"))
    R = np.zeros((len(S), len(T)), dtype=bool)
    if "R" in recs:
        for entry in split_list(recs["R"].value):
            pieces = _split_top(entry, "~")
            if len(pieces) != 2:
                errors.append((path, recs["R"].line, f"malformed pair {entry!r}"))
                continue
            s = _resolve(pieces[0][0], si, path, recs["R"].line, errors)
            t = _resolve(pieces[1][0], ti, path, recs["R"].line, errors)
            if s is not None and t is not None:
                R[si[s], ti[t]] = True
    if errors:
        raise ParseError(errors)
    name = recs["name"].value if "name" in recs else Path(path).stem
    return Frame(tuple(S), tuple(T), R, time="T" not in recs, name=name)


def serialize_frame(frame) -> str:
    lines = [f"name: {frame.name}"] if frame.name else []
    lines.append("S: " + ", ".join(quote(x) for x in frame.S))
    if not frame.is_time_frame:
        lines.append("T: " + ", ".join(quote(x) for x in frame.T))
    pairs = [f"{quote(frame.S[i])}~{quote(frame.T[j])}" for i, j in np.argwhere(frame.R)]
    lines.append("R: " + ", ".join(pairs))
    return "\n".join(lines) + "\n"


# -- maps (tense structures and pairs) ---------------------------------------------

@dataclass
class MapDocument:
    name: str
    left: str
    right: str
    maps: dict[str, dict[str, str]]
    lines: dict[str, int] = field(default_factory=dict)


def parse_maps(text: str, path: str = "<text>") -> MapDocument:
    """``algebra:`` (or ``left:``/``right:``) then ``G:``/``H:`` or ``f:``/``g:``
    lines of ``x->y``. Element names are resolved later, against the
    referenced algebras."""
    recs = {}
    errors = []
    for r in _records(text, MAP_KEYS, path):
        if r.key in recs:
            errors.append((path, r.line, f"duplicate key {r.key!r}"))
        recs[r.key] = r
    if errors:
        raise ParseError(errors)
    left = recs.get("left", recs.get("algebra"))
    right = recs.get("right", recs.get("algebra"))
    if left is None or right is None:
        raise ParseError([(path, 0, "maps need algebra: (or left:/right:)")])
    maps: dict[str, dict[str, str]] = {}
    for key in ("G", "H", "f", "g"):
        if key in recs:
            raw = {}
            for entry in split_list(recs[key].value):
                pieces = _split_top(entry, "->")
                if len(pieces) != 2:
                    errors.append((path, recs[key].line, f"malformed map entry {entry!r}"))
                    continue
                raw[unquote(pieces[0][0])] = unquote(pieces[1][0])
            maps[key] = raw
    if errors:
        raise ParseError(errors)
    name = recs["name"].value if "name" in recs else Path(path).stem
    return MapDocument(name, unquote(left.value), unquote(right.value), maps,
                       {k: r.line for k, r in recs.items()})


def serialize_maps(name: str, left: str, right: str, maps: dict[str, dict[str, str]]) -> str:
    lines = [f"name: {name}"]
    lines += [f"algebra: {left}"] if left == right else [f"left: {left}", f"right: {right}"]
    for key, m in maps.items():
        lines.append(f"{key}: " + ", ".join(f"{quote(x)}->{quote(y)}" for x, y in m.items()))
    return "\n".join(lines) + "\n"


# -- state tables ----------------------------------------------------------------

@dataclass
class StateTable:
    name: str
    algebra: str | None
    columns: list[str]
    rows: list[list[Fraction]]
    row_lines: list[int] = field(default_factory=list)


def parse_states(text: str, path: str = "<text>") -> StateTable:
    """``columns:`` names the elements, each ``row:`` gives one valuation."""
    recs = _records(text, STATE_KEYS, path)
    errors = []
    cols = [r for r in recs if r.key == "columns"]
    if len(cols) != 1:
        raise ParseError([(path, 0, "state table needs exactly one columns: line")])
    columns = [unquote(x) for x in split_list(cols[0].value)]
    rows, lines = [], []
    for r in recs:
        if r.key != "row":
            continue
        vals = split_list(r.value)
        if len(vals) != len(columns):
            errors.append((path, r.line, f"row has {len(vals)} entries, expected {len(columns)}"))
            continue
        try:
            row = [Fraction(v) for v in vals]
        except (ValueError, ZeroDivisionError):
            errors.append((path, r.line, "malformed rational"))
            continue
        if any(not 0 <= v <= 1 for v in row):
            errors.append((path, r.line, "value outside [0, 1]"))
            continue
        rows.append(row)
        lines.append(r.line)
    if errors:
        raise ParseError(errors)
    by = {r.key: r.value for r in recs}
    return StateTable(by.get("name", Path(path).stem), by.get("algebra"), columns, rows, lines)


def serialize_states(columns: Iterable[str], rows: Iterable[Iterable[Fraction]],
                     algebra: str | None = None, name: str | None = None) -> str:
    lines = [f"name: {name}"] if name else []
    if algebra:
        lines.append(f"algebra: {algebra}")
    lines.append("columns: " + ", ".join(quote(c) for c in columns))
    for row in rows:
        lines.append("row: " + ", ".join(str(Fraction(v)) for v in row))
    return "\n".join(lines) + "\n"


# -- workspaces --------------------------------------------------------------------

@dataclass
class WorkspaceDocument:
    algebras: dict[str, EffectAlgebra] = field(default_factory=dict)
    frames: dict[str, Any] = field(default_factory=dict)
    maps: dict[str, MapDocument] = field(default_factory=dict)
    states: dict[str, StateTable] = field(default_factory=dict)

    def algebra(self, ref: str) -> EffectAlgebra:
        from .bundled import load_bundled

        if ref in self.algebras:
            return self.algebras[ref]
        stem = Path(ref).stem
        if stem in self.algebras:
            return self.algebras[stem]
        return load_bundled(stem)


def detect_kind(text: str) -> str:
    keys = set()
    for raw in text.splitlines():
        m = re.match(r"^\s*([A-Za-z_]+)\s*:", _strip_comment(raw))
        if m:
            keys.add(m.group(1))
    if "elements" in keys:
        return "algebra"
    if "columns" in keys:
        return "states"
    if keys & {"G", "H", "f", "g"}:
        return "maps"
    if "S" in keys:
        return "frame"
    return "unknown"


def parse_workspace(files: Iterable[str | Path]) -> WorkspaceDocument:
    """Parse and cross-resolve a set of files; all errors are collected."""
    doc = WorkspaceDocument()
    errors: list = []
    for f in files:
        path = str(f)
        text = Path(f).read_text()
        kind = detect_kind(text)
        try:
            if kind == "algebra":
                obj, bucket = parse_algebra(text, path), doc.algebras
            elif kind == "frame":
                obj, bucket = parse_frame(text, path), doc.frames
            elif kind == "maps":
                obj, bucket = parse_maps(text, path), doc.maps
            elif kind == "states":
                obj, bucket = parse_states(text, path), doc.states
            else:
                errors.append((path, 0, "no algebra defined"))
                continue
        except ParseError as exc:
            errors.extend(exc.errors)
            continue
        if obj.name in bucket:
            errors.append((path, 0, f"duplicate name {obj.name!r}"))
            continue
        bucket[obj.name] = obj
    for m in doc.maps.values():
        for side in (m.left, m.right):
            try:
                doc.algebra(side)
            except KeyError:
                errors.append((m.name, 0, f"unresolved algebra {side!r}"))
    if errors:
        raise ParseError(errors)
    return doc


def load_algebra(path: str | Path) -> EffectAlgebra:
    return parse_algebra(Path(path).read_text(), str(path))
