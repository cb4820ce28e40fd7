"""Command-line interface: ``setcong <command> ...``."""
from __future__ import annotations

import argparse
import json
import sys as _sys
from typing import Optional, Sequence

from . import _accel
from .deduction import completeness_check, designated_witnessing, sample_model
from .dsl import (
    family_to_json,
    parse_family,
    parse_system,
    parse_word,
    parse_word_list,
    render_system,
    render_word,
)
from .errors import InconsistentEvidence, ParseError, SetcongError
from .finite import Sat, WitnessAssignment, normalize_family, search_family, theoretical_bound, verify_family
from .lattice import NODES, SearchBudget, classify, render_report, to_dot
from .setgraph import build_setgraph, check_claim1, check_claim2, check_claim3
from .sphere import realize, verify_realization
from .systems import CongruenceSystem, make_unc, reduce_to_unc, check_reduction


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _witnesses(items: Optional[Sequence[str]], sys: CongruenceSystem) -> WitnessAssignment:
    words = [None] * len(sys.statements)
    for item in items or []:
        key, sep, text = item.partition("=")
        if not sep or not key.strip().isdigit():
            raise ParseError(f"witness must look like i=<word>, got {item!r}")
        i = int(key)
        if not 1 <= i <= len(words):
            raise ParseError(f"witness index {i} outside 1..{len(words)}")
        words[i - 1] = parse_word(text)
    missing = [str(i + 1) for i, w in enumerate(words) if w is None]
    if missing:
        raise ParseError(f"missing witnesses for statements {', '.join(missing)}")
    return WitnessAssignment(tuple(words))


def _emit(obj, as_json: bool, text: str) -> None:
    print(json.dumps(obj, indent=2, ensure_ascii=False) if as_json else text)


def cmd_analyze(args) -> int:
    text = _read(args.file)
    sys = parse_system(text)
    budget = SearchBudget(args.max_len, args.radius, args.m, args.max_tuples)
    rep = classify(sys, budget, use_fixtures=not args.no_fixtures)
    out = render_report(rep, render_system(sys))
    if args.json:
        _emit(out, True, "")
        return 0
    print(render_system(sys), end="")
    for n in NODES:
        st = rep.properties[n]
        note = "  (open)" if n in rep.open_nodes and st.value is None else ""
        print(f"  {n:4} {st.label():8} {st.provenance}{note}")
    for c in rep.checks:
        print(f"  - {c}")
    return 0


def cmd_search(args) -> int:
    sys = parse_system(_read(args.file))
    wit = _witnesses(args.witness, sys)
    res = search_family(sys, wit, args.radius, m=args.m, max_nodes=args.max_nodes)
    if isinstance(res, Sat):
        norm = normalize_family(res.family)
        out = {"result": "sat", "family": family_to_json(res.family), "normalized": family_to_json(norm), "nodes": res.nodes}
        text = "sat\n" + "\n".join(
            f"  A{k + 1} = {{{', '.join(render_word(w) for w in s)}}}" for k, s in enumerate(res.family.as_lists())
        )
    else:
        out = {"result": "unsat-within", "radius": res.radius, "complete": res.complete, "nodes": res.nodes}
        text = f"no family within radius {res.radius}" + (" (complete)" if res.complete else "")
    _emit(out, args.json, text)
    return 0


def cmd_verify(args) -> int:
    sys = parse_system(_read(args.file))
    wit = _witnesses(args.witness, sys)
    fam = parse_family(args.family, parse_word(args.coset) if args.coset else None)
    check = verify_family(fam, wit, sys)
    _emit({"ok": check.ok, "diagnostics": check.diagnostics}, args.json, "\n".join(check.diagnostics + [f"ok={check.ok}"]))
    return 0 if check.ok else 1


def cmd_realize(args) -> int:
    sys = parse_system(_read(args.file))
    wit = _witnesses(args.witness, sys)
    fam = parse_family(args.family, parse_word(args.coset) if args.coset else None)
    real = realize(fam, wit, sys)
    out = real.to_json()
    out["verified"] = verify_realization(real, wit, sys)
    print(json.dumps(out, indent=2))
    return 0 if out["verified"] else 1


def cmd_setgraph(args) -> int:
    P = parse_word_list(args.set)
    g = build_setgraph(P)
    out = {"vertices": g.n_vertices, "edges": g.n_edges, "good_edges": int(g.good.sum())}
    claims = [args.claim] if args.claim else [1, 2, 3]
    length = args.length if args.length is not None else 2 ** len(g.base)
    for c in claims:
        if c == 1:
            out["claim1"] = check_claim1(g)
        elif c == 2:
            out["claim2"] = check_claim2(g)
        else:
            out["claim3"] = check_claim3(g, length)
            out["claim3_length"] = length
    text = "\n".join(f"{k}: {v}" for k, v in out.items())
    _emit(out, args.json, text)
    return 0


def cmd_deduce(args) -> int:
    sys = parse_system(_read(args.file))
    mode = args.mode or sys.mode
    res = completeness_check(sys, args.depth, mode)
    out = {
        "complete": res.ok,
        "elements_checked": res.checked_elements,
        "designated_witnessing": designated_witnessing(sys, mode),
    }
    if res.counterexample:
        g, kind, L, R = res.counterexample
        out["counterexample"] = {"g": render_word(g), "kind": kind, "left": sorted(L), "right": sorted(R)}
    if args.sample:
        fibers, seed = (int(x) for x in args.sample.split(","))
        rep = sample_model(sys, min(args.depth, 4), fibers, seed, mode)
        out["sample"] = {
            "statements_hold": rep.statements_hold,
            "labels_within_reach": rep.labels_within_reach,
            "coverage": round(rep.coverage, 4),
        }
    _emit(out, args.json, "\n".join(f"{k}: {v}" for k, v in out.items()))
    return 0


def cmd_reduce(args) -> int:
    sys = parse_system(_read(args.file))
    rmap, s = reduce_to_unc(sys)
    ok = check_reduction(sys, make_unc(s), rmap)
    out = {"s": s, "pi": list(rmap.pi), "check": ok}
    text = f"reducible to the universal system on {s} sets\n  pi = {list(rmap.pi)}\n  check = {ok}"
    _emit(out, args.json, text)
    return 0


def cmd_bound(args) -> int:
    n, b = theoretical_bound(args.m, args.len, args.r)
    _emit({"N": n, "bound": str(b)}, args.json, f"N = {n}\nwords shorter than {b}")
    return 0


def cmd_lattice(args) -> int:
    print(to_dot())
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="setcong", description="Set congruence systems over free group actions.")
    p.add_argument("--version", action="version", version=f"setcong ({_accel.backend()})")
    sub = p.add_subparsers(dest="command", required=True)

    def with_json(sp):
        sp.add_argument("--json", action="store_true", help="machine-readable output")
        return sp

    a = with_json(sub.add_parser("analyze", help="classify a system against the property lattice"))
    a.add_argument("file")
    a.add_argument("--no-fixtures", action="store_true", help="do not seed statuses from the built-in catalog")
    a.add_argument("--max-len", type=int, default=2)
    a.add_argument("--radius", type=int, default=3)
    a.add_argument("--m", type=int, default=2)
    a.add_argument("--max-tuples", type=int, default=20_000)
    a.set_defaults(func=cmd_analyze)

    s = with_json(sub.add_parser("search", help="bounded search for a finite family"))
    s.add_argument("file")
    s.add_argument("--witness", action="append", metavar="i=WORD")
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--m", type=int, default=None)
    s.add_argument("--max-nodes", type=int, default=0)
    s.set_defaults(func=cmd_search)

    v = with_json(sub.add_parser("verify", help="check a family against a system"))
    v.add_argument("file")
    v.add_argument("--family", required=True, help="JSON file or inline JSON")
    v.add_argument("--witness", action="append", metavar="i=WORD")
    v.add_argument("--coset", help="subgroup generator for a coset-space family")
    v.set_defaults(func=cmd_verify)

    r = sub.add_parser("realize", help="place a family on the sphere exactly")
    r.add_argument("file")
    r.add_argument("--family", required=True)
    r.add_argument("--witness", action="append", metavar="i=WORD")
    r.add_argument("--coset")
    r.set_defaults(func=cmd_realize)

    g = with_json(sub.add_parser("setgraph", help="build the set graph of P and check its claims"))
    g.add_argument("--set", required=True, help='comma-separated words, e.g. "e, a, b"')
    g.add_argument("--claim", type=int, choices=[1, 2, 3])
    g.add_argument("--length", type=int, default=None, help="path length for claim 3 (default 2^|P|)")
    g.set_defaults(func=cmd_setgraph)

    d = with_json(sub.add_parser("deduce", help="test completeness of the deduction rules"))
    d.add_argument("file")
    d.add_argument("--depth", type=int, required=True)
    d.add_argument("--mode", choices=["partition", "family"])
    d.add_argument("--sample", help="fibers,seed for the randomized model")
    d.set_defaults(func=cmd_deduce)

    u = with_json(sub.add_parser("reduce", help="reduce a numerically consistent system to a universal one"))
    u.add_argument("file")
    u.set_defaults(func=cmd_reduce)

    b = with_json(sub.add_parser("bound", help="search-length bound for fixed witnesses"))
    b.add_argument("--m", type=int, required=True)
    b.add_argument("--len", type=int, required=True)
    b.add_argument("--r", type=int, required=True)
    b.set_defaults(func=cmd_bound)

    lt = sub.add_parser("lattice", help="print the implication digraph as DOT")
    lt.set_defaults(func=cmd_lattice)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=_sys.stderr)
        return 2
    except InconsistentEvidence as exc:
        print(f"inconsistent evidence: {exc}", file=_sys.stderr)
        return 3
    except (SetcongError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=_sys.stderr)
        return 1


if __name__ == "__main__":
    raise SystemExit(main())
