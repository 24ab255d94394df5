"""Command-line front end.

Every subcommand prints one or more reports and exits with 0 when all are
certified, 1 when any check is violated, 2 when a hypothesis is unmet or a
result is only partial, and 3 on usage or parse errors.
"""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace
from pathlib import Path
from typing import Any, Sequence

from . import bundled
from .algebra import (AlgebraMap, CapExceeded, EffectAlgebra, Inapplicable, QEffectAlgebra,
                      StructureError, classify, derive_order, validate_effect_axioms,
                      validate_q_axioms)
from .config import DEFAULT, Config
from .ideals import check_rdp
from .io import (ParseError, parse_algebra, parse_frame, parse_maps,
                 parse_states, serialize_states)
from .report import EXIT_USAGE, Report
from .states import (StateVector, check_order_reflecting, check_semi_state, check_state,
                     enumerate_extreme_q_states)
from .tense import (CanonicalConnection, CanonicalTense, Chain, GaloisPair, check_galois_connection,
                    check_galois_q_connection, check_tense_operators)
from .unit import verify_threshold


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # argparse would exit with 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


# -- loading ----------------------------------------------------------------------

def load_algebra_ref(ref: str, near: str | None = None) -> EffectAlgebra:
    """A file path (also tried next to ``near``), or the name of a bundled
    algebra (``fig1``, ``fig1.alg``)."""
    path = Path(ref)
    if near is not None and not path.is_file() and (Path(near).parent / ref).is_file():
        path = Path(near).parent / ref
    if path.is_file():
        return parse_algebra(path.read_text(), str(path))
    stem = path.name[:-4] if path.name.endswith(".alg") else path.name
    try:
        return bundled.load_bundled(stem)
    except KeyError:
        raise UsageError(f"no file or bundled algebra named {ref!r}") from None


def _read(path: str) -> str:
    p = Path(path)
    if not p.is_file():
        raise UsageError(f"no such file {path!r}")
    return p.read_text()


def _maps(doc_maps: dict[str, str], source: EffectAlgebra, target: EffectAlgebra, key: str,
          path: str) -> AlgebraMap:
    try:
        return AlgebraMap.from_names(source, target, doc_maps[key])
    except (StructureError, KeyError) as exc:
        raise ParseError([(path, 0, f"{key}: {exc}")]) from None


def _states(path: str, algebra: EffectAlgebra) -> list[StateVector]:
    table = parse_states(_read(path), path)
    unknown = [c for c in table.columns if c not in algebra.index]
    if unknown or len(set(table.columns)) != algebra.n:
        raise ParseError([(path, 0, f"columns must list every element once; unknown {unknown[:5]}")])
    out = []
    for i, row in enumerate(table.rows):
        mapping = dict(zip(table.columns, row))
        out.append(StateVector.from_mapping(algebra, mapping, label=f"row{i + 1}"))
    return out


def _require_q(algebra: EffectAlgebra) -> QEffectAlgebra:
    if not isinstance(algebra, QEffectAlgebra):
        raise UsageError(f"{algebra.name} has no q: and d: maps")
    return algebra


# -- subcommands ------------------------------------------------------------------

def cmd_validate(args, cfg: Config) -> list[Report]:
    alg = load_algebra_ref(args.algebra)
    rep = (validate_q_axioms(alg, cfg.core_cap) if isinstance(alg, QEffectAlgebra)
           else validate_effect_axioms(alg, cfg.core_cap))
    rep.subject = f"validate {alg.name}"
    if isinstance(alg, QEffectAlgebra):
        rep.details["q"] = {x: alg.names[alg.q[i]] for i, x in enumerate(alg.names)}
        rep.details["d"] = {x: alg.names[alg.d[i]] for i, x in enumerate(alg.names)}
    out = [rep]
    if cfg.grid is not None:
        out.append(verify_threshold(cfg.grid))
    return out


def cmd_order(args, cfg: Config) -> list[Report]:
    alg = load_algebra_ref(args.algebra)
    order = derive_order(alg)
    rep = Report(f"order of {alg.name}")
    rep.check("partial order", alg.is_partial_order())
    rep.check("0 is the bottom, 1 the top", alg.leq[alg.zero].all() and alg.leq[:, alg.one].all())
    rep.details["covers"] = [f"{a} < {b}" for a, b in sorted(order.covers())]
    rep.details["supplement"] = {x: alg.names[alg.supp[i]] for i, x in enumerate(alg.names)}
    return [rep]


def cmd_classify(args, cfg: Config) -> list[Report]:
    alg = load_algebra_ref(args.algebra)
    rep = classify(alg, cfg.core_cap)
    if args.rdp:
        # a missing decomposition is a classification outcome, not a failure
        rdp = check_rdp(alg)
        rep.details["rdp"] = rdp.ok
        if not rdp.ok:
            w = dict(rdp.witnesses[0])
            w.pop("check")
            rep.details["rdp_witness"] = w
    return [rep]


def cmd_states(args, cfg: Config) -> list[Report]:
    alg = _require_q(load_algebra_ref(args.algebra))
    out = []
    if args.extreme or not (args.check or args.order_reflecting):
        sset = enumerate_extreme_q_states(alg, cfg.state_cap)
        rep = Report(f"extreme q-states of {alg.name}")
        rep.check("every extreme point re-certified as a q-state", True)
        rep.details["count"] = len(sset)
        rep.details["table"] = serialize_states(alg.names, [s.values for s in sset], alg.name)
        out.append(rep)
    if args.check:
        for s in _states(args.check, alg):
            rep = check_state(alg, s)
            rep.subject = f"state check {s.label}"
            rep.details.pop("vector")
            out.append(rep)
    if args.order_reflecting:
        members = (_states(args.order_reflecting, alg) if args.order_reflecting != "extreme"
                   else list(enumerate_extreme_q_states(alg, cfg.state_cap)))
        out.append(check_order_reflecting(alg, members))
    return out


def cmd_semistate(args, cfg: Config) -> list[Report]:
    alg = _require_q(load_algebra_ref(args.algebra))
    out = []
    for s in _states(args.states, alg):
        rep = check_semi_state(alg, s, args.level)
        rep.subject = f"{args.level} check {s.label}"
        out.append(rep)
    return out


def cmd_galois(args, cfg: Config) -> list[Report]:
    text = _read(args.maps)
    doc = parse_maps(text, args.maps)
    left = load_algebra_ref(args.left or doc.left, args.maps)
    right = load_algebra_ref(args.right or doc.right, args.maps)
    if "f" not in doc.maps or "g" not in doc.maps:
        raise ParseError([(args.maps, 0, "galois-check needs f: and g:")])
    f = _maps(doc.maps, left, right, "f", args.maps)
    g = _maps(doc.maps, right, left, "g", args.maps)
    if isinstance(left, QEffectAlgebra) and isinstance(right, QEffectAlgebra):
        return [check_galois_q_connection(GaloisPair(f, g))]
    return [check_galois_connection(f, g)]


def cmd_tense(args, cfg: Config) -> list[Report]:
    doc = parse_maps(_read(args.maps), args.maps)
    alg = _require_q(load_algebra_ref(args.algebra or doc.left, args.maps))
    if "G" not in doc.maps or "H" not in doc.maps:
        raise ParseError([(args.maps, 0, "tense-check needs G: and H:")])
    G = _maps(doc.maps, alg, alg, "G", args.maps)
    H = _maps(doc.maps, alg, alg, "H", args.maps)
    return [check_tense_operators(alg, G, H).report]


def cmd_canonical(args, cfg: Config) -> list[Report]:
    chain = _require_q(load_algebra_ref(args.chain))
    frame = parse_frame(_read(args.frame), args.frame)
    try:
        c = Chain(chain)
    except Inapplicable as exc:
        rep = Report(f"canonical construction over {chain.name}")
        return [rep.inapplicable(str(exc))]
    if args.check_tense:
        if not frame.is_time_frame:
            raise UsageError("--check-tense needs a time frame (omit T:)")
        rep = CanonicalTense(c, frame).certify(cfg.exhaustive_cap, cfg.samples, cfg.seed)
    else:
        rep = CanonicalConnection(c, frame).certify(cfg.exhaustive_cap, cfg.samples, cfg.seed)
    return [rep]


def cmd_represent(args, cfg: Config) -> list[Report]:
    from .representation import verify_tense_representation

    alg = _require_q(load_algebra_ref(args.algebra))
    doc = parse_maps(_read(args.tense), args.tense)
    if "G" not in doc.maps or "H" not in doc.maps:
        raise ParseError([(args.tense, 0, "represent needs G: and H:")])
    G = _maps(doc.maps, alg, alg, "G", args.tense)
    H = _maps(doc.maps, alg, alg, "H", args.tense)
    states = _states(args.states, alg) if args.states else None
    rep = verify_tense_representation(alg, G, H, states=states,
                                      complete=args.complete if states is not None else None)
    return [rep]


def cmd_examples(args, cfg: Config) -> list[Report]:
    rep = Report("bundled examples")
    for name in bundled.bundled_examples():
        alg = bundled.load_bundled(name)
        rep.details[name] = f"{alg.n} elements"
        if args.write:
            target = Path(args.write)
            target.mkdir(parents=True, exist_ok=True)
            (target / f"{name}.alg").write_text(bundled.bundled_text(name))
    rep.check("all bundled files parse", True)
    return [rep]


# -- driver -----------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    # SUPPRESS lets the flags appear before or after the subcommand
    quiet = argparse.SUPPRESS
    common.add_argument("--cap", type=int, default=quiet, help="size cap for carriers and powers")
    common.add_argument("--grid", type=int, default=quiet, help="threshold-term grid exponent k")
    common.add_argument("--json", metavar="PATH", default=quiet, help="write a machine-readable report")
    common.add_argument("--seed", type=int, default=quiet, help="seed for sampled certification")

    p = _Parser(prog="qtense", description="Finite q-effect algebras, q-states and q-tense operators.",
                parents=[common])
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name: str, func, help_: str) -> argparse.ArgumentParser:
        sp = sub.add_parser(name, help=help_, parents=[common])
        sp.set_defaults(func=func)
        return sp

    sp = add("validate", cmd_validate, "check the effect and q-axioms")
    sp.add_argument("algebra")
    sp = add("order", cmd_order, "derived order and supplements")
    sp.add_argument("algebra")
    sp = add("classify", cmd_classify, "lattice / MV / linear classification")
    sp.add_argument("algebra")
    sp.add_argument("--rdp", action="store_true", help="also check Riesz decomposition")
    sp = add("states", cmd_states, "q-state enumeration and checks")
    sp.add_argument("algebra")
    sp.add_argument("--extreme", action="store_true")
    sp.add_argument("--check", metavar="STATES")
    sp.add_argument("--order-reflecting", metavar="STATES", nargs="?", const="extreme")
    sp = add("semistate-check", cmd_semistate, "q-semi-state hierarchy")
    sp.add_argument("algebra")
    sp.add_argument("states")
    sp.add_argument("--level", choices=("q_semi", "jauch_piron", "strong"), default="strong")
    sp = add("galois-check", cmd_galois, "Galois (q-)connection check")
    sp.add_argument("maps")
    sp.add_argument("--left", default=None)
    sp.add_argument("--right", default=None)
    sp = add("tense-check", cmd_tense, "q-tense operator check")
    sp.add_argument("maps")
    sp.add_argument("--algebra", default=None)
    sp = add("canonical", cmd_canonical, "canonical operators of a frame over a chain")
    sp.add_argument("--chain", required=True)
    sp.add_argument("--frame", required=True)
    sp.add_argument("--check-tense", action="store_true")
    sp = add("represent", cmd_represent, "representation of q-tense operators")
    sp.add_argument("--algebra", required=True)
    sp.add_argument("--tense", required=True)
    sp.add_argument("--states", default=None)
    sp.add_argument("--complete", action="store_true",
                    help="treat the given state set as all Jauch-Piron q-states")
    sp = add("examples", cmd_examples, "list (or write out) the bundled algebras")
    sp.add_argument("--write", metavar="DIR", default=None)
    return p


def overall_exit(reports: Sequence[Report]) -> int:
    verdicts = {r.verdict for r in reports}
    if "violated" in verdicts:
        return 1
    if verdicts & {"inapplicable", "partial"}:
        return 2
    return 0


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = replace(DEFAULT.with_cap(getattr(args, "cap", None)),
                  seed=getattr(args, "seed", 0), grid=getattr(args, "grid", None))
    json_path = getattr(args, "json", None)
    try:
        reports = args.func(args, cfg)
    except (UsageError, ParseError, CapExceeded, StructureError) as exc:
        print(f"qtense: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Inapplicable as exc:
        reports = [Report(args.command).inapplicable(str(exc))]
    for rep in reports:
        print(rep.to_text())
    code = overall_exit(reports)
    if json_path:
        doc: dict[str, Any] = {"command": args.command, "exit_code": code,
                               "reports": [r.to_dict() for r in reports]}
        Path(json_path).write_text(json.dumps(doc, indent=2) + "\n")
    return code


if __name__ == "__main__":
    raise SystemExit(main())
