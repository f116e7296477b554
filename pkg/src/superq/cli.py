"""``superq``: construct, report, verify, convert.

Exit codes: 0 ok, 1 validation failure, 2 parse error, 3 field extension needed.
"""
from __future__ import annotations

import argparse
import json
import os
import sys

from . import exactla as la
from . import repn
from .catalog import FamilySpec, construct, parse_spec
from .liealg import SuperLieAlgebra

OK, INVALID, PARSE, EXTENSION = 0, 1, 2, 3


class ParseError(Exception):
    pass


def _read_json(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{path}: {exc}") from exc


def load_algebra(arg: str, field=None) -> SuperLieAlgebra:
    """Spec shorthand, FamilySpec JSON or algebra JSON, base-changed to ``field``."""
    from .verify import over_field
    try:
        if os.path.isfile(arg):
            d = _read_json(arg)
            if isinstance(d, dict) and "family" in d:
                g = construct(FamilySpec.from_json(d))
            elif isinstance(d, dict) and "basis" in d:
                g = SuperLieAlgebra.from_json(d)
            else:
                raise ParseError(f"{arg}: neither an algebra nor a family spec")
        else:
            g = construct(parse_spec(arg))
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    return over_field(g, field) if field is not None else g


def _field():
    try:
        return la.session_field()
    except (ValueError, TypeError) as exc:
        raise ParseError(f"SUPERQ_FIELD: {exc}") from exc


def _emit(text, path=None):
    if path:
        with open(path, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _violations(rep):
    s = rep.summary()
    for kind in ("parity", "antisymmetry", "jacobi", "realization"):
        for t in s[kind]:
            print(f"violation {kind} {tuple(t)}", file=sys.stderr)
    print(f"counts parity/antisymmetry/jacobi/realization = {s['counts']}", file=sys.stderr)


# ---------------------------------------------------------------------------
# subcommands


def cmd_construct(a):
    g = load_algebra(a.spec, _field())
    rep = g.validate()
    if not rep.ok:
        _violations(rep)
        return INVALID
    if a.module:
        M = {"adjoint": repn.adjoint, "standard": repn.standard, "trivial": repn.trivial}[a.module](g)
        text = json.dumps(M.to_json(inline_algebra=True), sort_keys=True, indent=1)
    else:
        text = g.dumps()
    _emit(text, a.output)
    return OK


def cmd_report(a):
    from .report import build
    g = load_algebra(a.spec, _field())
    skip = [s for s in (a.skip or "").split(",") if s]
    try:
        r = build(g, a.seed, skip)
    except ValueError as exc:
        if "unknown sections" in str(exc):
            raise ParseError(str(exc)) from exc
        raise
    text = r.dumps()
    if a.json:
        _emit(text, a.json)
    else:
        print(text)
    if not r.data["validation"]["ok"]:
        _violations(g.validate())
        return INVALID
    if not r.ok:
        print("failed checks: " + ", ".join(r.failed()), file=sys.stderr)
        return INVALID
    return OK


def cmd_verify(a):
    from .verify import LEMMAS, run
    if a.lemma not in LEMMAS:
        raise ParseError(f"unknown lemma id {a.lemma!r}; known: {', '.join(sorted(LEMMAS))}")
    weight = None
    if a.weight:
        try:
            weight = [la.parse_q(x) for x in a.weight.split(",")]
        except ValueError as exc:
            raise ParseError(f"bad weight {a.weight!r}") from exc
    try:
        inst = [str(parse_spec(s)) for s in a.algebra] if a.algebra else None
    except ValueError as exc:
        raise ParseError(str(exc)) from exc
    print(f"# {a.lemma}: {LEMMAS[a.lemma][0]} (seed {a.seed})")
    suite = run(a.lemma, inst, a.seed, weight, _field(), echo=print)
    n = len(suite.verdicts)
    bad = [v for v in suite.verdicts if not v.ok]
    print(f"# {n - len(bad)}/{n} passed")
    for v in bad:
        print(f"witness {v.instance}: {json.dumps(v.to_json()['detail'], sort_keys=True)}",
              file=sys.stderr)
    if a.json:
        _emit(json.dumps(suite.to_json(), sort_keys=True, indent=1), a.json)
    return OK if suite.ok else INVALID


def cmd_convert(a):
    d = _read_json(a.input)
    try:
        if isinstance(d, dict) and "family" in d:
            spec = FamilySpec.from_json(d)
            spec.check()
            out = spec.to_json()
        elif isinstance(d, dict) and "action" in d:
            M = repn.SuperModule.from_json(d)
            bad = M.validate()
            if not bad["ok"]:
                for k in ("parity", "representation"):
                    for t in bad[k][:20]:
                        print(f"violation {k} {tuple(t)}", file=sys.stderr)
                return INVALID
            out = M.to_json(inline_algebra=isinstance(d.get("algebra"), dict))
        elif isinstance(d, dict) and "basis" in d:
            g = SuperLieAlgebra.from_json(d)
            rep = g.validate()
            if not rep.ok:
                _violations(rep)
                return INVALID
            out = g.to_json()
        else:
            raise ParseError(f"{a.input}: unrecognized document")
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ParseError(str(exc)) from exc
    _emit(json.dumps(out, sort_keys=True, indent=1), a.output)
    return OK


def parser():
    p = argparse.ArgumentParser(prog="superq", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("construct", help="build an algebra (or a module over it) as JSON")
    c.add_argument("spec")
    c.add_argument("-o", "--output")
    c.add_argument("--module", choices=["adjoint", "standard", "trivial"])
    c.add_argument("--seed", type=int, default=0)
    c.set_defaults(fn=cmd_construct)

    r = sub.add_parser("report", help="structure report")
    r.add_argument("spec", help="shorthand like osp(3,2) or a JSON file")
    r.add_argument("--json", help="write the report here instead of stdout")
    r.add_argument("--skip", help="comma separated: structure,dercoh,rootsys,repn")
    r.add_argument("--seed", type=int, default=0)
    r.set_defaults(fn=cmd_report)

    v = sub.add_parser("verify", help="run a lemma suite")
    v.add_argument("lemma")
    v.add_argument("--algebra", action="append", help="instance spec (repeatable)")
    v.add_argument("--weight", help="comma separated weight for cartan/kac")
    v.add_argument("--json")
    v.add_argument("--seed", type=int, default=0)
    v.set_defaults(fn=cmd_verify)

    k = sub.add_parser("convert", help="canonicalize algebra, module or spec JSON")
    k.add_argument("input")
    k.add_argument("output", nargs="?")
    k.set_defaults(fn=cmd_convert)
    return p


def main(argv=None):
    p = parser()
    try:
        a = p.parse_args(argv)
    except SystemExit as exc:
        return PARSE if exc.code else OK
    try:
        return a.fn(a)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return PARSE
    except la.ExtensionNeeded as exc:
        coeffs = ",".join(la.fmt_q(c) for c in exc.polynomial)
        print(f"extension needed: {la.poly_str(exc.polynomial)}", file=sys.stderr)
        print(f"polynomial {la.poly_str(exc.polynomial)}")
        print(f"rerun with SUPERQ_FIELD={coeffs}", file=sys.stderr)
        return EXTENSION


if __name__ == "__main__":
    sys.exit(main())
