"""Command-line interface: ``heisen <command> ...``."""

from __future__ import annotations

import argparse
import json
import sys

from . import __version__
from .classify import classify_heisenberg
from .errors import DegenerateFormError, HeisenError
from .finab import parse_group
from .forms import AlternatingForm, enumerate_forms
from .heisenberg import commutator_form, from_form, verify_weyl_relations, weyl_operators
from .reduction import Decomposition, exists_nondegenerate, symplectic_reduce, verify_decomposition

EXIT_OK, EXIT_FALSE, EXIT_INPUT = 0, 1, 2


def dumps(obj) -> str:
    """JSON with floats written to 17 significant digits."""
    if isinstance(obj, bool) or obj is None:
        return json.dumps(obj)
    if isinstance(obj, float):
        return format(obj, ".17g")
    if isinstance(obj, (int, str)):
        return json.dumps(obj)
    if isinstance(obj, dict):
        return "{" + ", ".join(f"{json.dumps(str(k))}: {dumps(v)}" for k, v in obj.items()) + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(dumps(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def cmd_check(args) -> int:
    k = parse_group(args.group)
    if exists_nondegenerate(k):
        base = " x ".join(f"Z/{d}" for d in k.factors[0::2]) or "1"
        print(f"yes: invariant factors pair up; K = A x A^ with A = {base}")
        return EXIT_OK
    print("no: invariant factors do not pair up")
    return EXIT_FALSE


def cmd_enumerate(args) -> int:
    k = parse_group(args.group)
    for e in enumerate_forms(k, nondegenerate_only=args.nondegenerate):
        print(dumps(e.to_json()))
    return EXIT_OK


def cmd_reduce(args) -> int:
    e = AlternatingForm.from_json(_read(args.form))
    try:
        d = symplectic_reduce(e)
    except DegenerateFormError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_FALSE
    print(dumps(d.to_json()))
    return EXIT_OK


def cmd_verify(args) -> int:
    e = AlternatingForm.from_json(_read(args.form))
    d = Decomposition.from_json(_read(args.decomposition))
    v = verify_decomposition(e, d)
    out = {"ok": v.ok}
    if not v.ok:
        out["reason"] = v.reason
        if v.counterexample is not None:
            out["counterexample"] = [list(c) for c in v.counterexample]
    print(dumps(out))
    return EXIT_OK if v.ok else EXIT_FALSE


def cmd_construct(args) -> int:
    e = AlternatingForm.from_json(_read(args.form))
    try:
        g = from_form(e)
    except DegenerateFormError as exc:
        print(f"degenerate: {exc}", file=sys.stderr)
        return EXIT_FALSE
    summary = g.summary()
    summary["commutator_matches"] = commutator_form(g) == e
    print(dumps(summary))
    return EXIT_OK if summary["commutator_matches"] else EXIT_FALSE


def cmd_classify(args) -> int:
    rec = classify_heisenberg(args.order, check_orbits=args.check_orbits)
    print(dumps(rec.to_json()))
    return EXIT_OK


def cmd_weyl(args) -> int:
    report = verify_weyl_relations(weyl_operators(parse_group(args.group)))
    print(dumps(report.to_json()))
    return EXIT_OK if report.ok else EXIT_FALSE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="heisen", description=__doc__)
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="does the group carry a non-degenerate alternating form")
    p.add_argument("group", help="group literal such as 'Z/4 x Z/2'")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("enumerate", help="stream alternating forms as JSON lines")
    p.add_argument("group")
    p.add_argument("--nondegenerate", action="store_true")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("reduce", help="symplectic decomposition of a form file")
    p.add_argument("form", help="form JSON file, or - for stdin")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("verify", help="check a decomposition against a form")
    p.add_argument("form")
    p.add_argument("decomposition")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("construct", help="build the Heisenberg group of a form")
    p.add_argument("form")
    p.set_defaults(func=cmd_construct)

    p = sub.add_parser("classify", help="count Heisenberg groups with |A| = n")
    p.add_argument("--order", type=int, required=True)
    p.add_argument("--check-orbits", action="store_true",
                   help="also reduce every form to confirm a single orbit per phase group")
    p.set_defaults(func=cmd_classify)

    p = sub.add_parser("weyl", help="build and verify Weyl operators on L^2(A)")
    p.add_argument("group")
    p.set_defaults(func=cmd_weyl)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (HeisenError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
