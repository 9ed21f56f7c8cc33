"""Command-line front end: ``hrg build | verify | spectrum | degrees | dot``.

Exit codes: 0 pass, 1 check failed, 2 capacity exceeded, 3 invalid
parameters, 4 informational (verdict passed but the trickling-down bound is
undefined).
"""
from __future__ import annotations

import argparse
import datetime as _dt
import json
import os
import sys
import warnings

from . import __version__
from .cosetgeom import check_sgs_axioms, quotient_complex
from .degrees import FAMILIES, degree_profile_for
from .errors import CapacityExceeded, Disconnected, HRGError, InvalidParams, NotPure
from .fileio import read_graph, to_dot, write_graph
from .lattice import stair_graph, three_level_graph
from .multipartite import (
    complete_multipartite,
    degree_profile,
    is_connected,
    is_pure,
    is_strongly_gallery_connected,
    type_regularity,
)
from .product import PermGroup, partite_product, symmetrize, vertex_cap
from .spectral import hdx_certificate

EXIT_PASS, EXIT_FAIL, EXIT_CAPACITY, EXIT_INVALID, EXIT_INFO = 0, 1, 2, 3, 4

CONSTRUCTIONS = ("el", "affine", "affine-3r", "knight", "stair", "three-level",
                 "complete", "symmetrize", "product")
CHECKS = ("regularity", "type", "gallery", "pure", "connected", "sgs")


def _timestamp() -> str:
    epoch = os.environ.get("SOURCE_DATE_EPOCH")
    t = (_dt.datetime.fromtimestamp(int(epoch), _dt.timezone.utc) if epoch
         else _dt.datetime.now(_dt.timezone.utc))
    return t.replace(microsecond=0).isoformat()


def manifest(command: str, args: argparse.Namespace) -> dict:
    params = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "command")}
    return {
        "command": command,
        "parameters": params,
        "seed": 0,
        "caps": {"HRG_CAP": vertex_cap()},
        "version": __version__,
        "timestamp": _timestamp(),
    }


def parse_group(spec: str, degree: int) -> PermGroup:
    """``sN``, ``aN``, ``cN``, ``dN`` or explicit cycles ``"(0 1 2)(3 4);(0 1)"``."""
    spec = spec.strip()
    kind, num = spec[:1].lower(), spec[1:]
    if num.isdigit():
        n = int(num)
        if n != degree:
            raise InvalidParams(f"group degree {n} does not match {degree} parts")
        makers = {"s": PermGroup.symmetric, "a": PermGroup.alternating,
                  "c": PermGroup.cyclic, "d": PermGroup.dihedral}
        if kind in makers:
            return makers[kind](n)
    if "(" in spec:
        return PermGroup(degree, [g for g in spec.split(";") if g.strip()])
    raise InvalidParams(f"unknown group {spec!r}")


def _load(path):
    with open(path, encoding="utf-8") as fh:
        return read_graph(fh)


def build_graph(args):
    c = args.construction
    if c == "el":
        return quotient_complex("el", m=args.n + 1, q=args.q, s=args.s).host
    if c == "affine":
        return quotient_complex("affine", m=args.n + 1, k=args.k).host
    if c == "affine-3r":
        return quotient_complex("affine-3r", r=args.r, k=args.k).host
    if c == "knight":
        return quotient_complex("knight", k=args.k, r=args.r).host
    if c == "stair":
        return stair_graph(args.n, args.k, full_torus=args.full_torus)
    if c == "three-level":
        return three_level_graph(args.r, args.k, full_torus=args.full_torus)
    if c == "complete":
        return complete_multipartite([int(x) for x in args.sizes.split(",")])
    if c == "symmetrize":
        if not args.inp or not args.group:
            raise InvalidParams("symmetrize needs --in and --group")
        G, _ = _load(args.inp)
        return symmetrize(G, parse_group(args.group, G.n_parts))
    if c == "product":
        if not args.inp or not args.inp2:
            raise InvalidParams("product needs --in and --in2")
        return partite_product(_load(args.inp)[0], _load(args.inp2)[0])
    raise InvalidParams(f"unknown construction {c!r}")


def cmd_build(args) -> int:
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        G = build_graph(args)
    man = manifest("build", args)
    out = sys.stdout if args.out in (None, "-") else open(args.out, "w", encoding="utf-8")
    try:
        write_graph(G, out, man)
    finally:
        if out is not sys.stdout:
            out.close()
    if args.out not in (None, "-"):
        _emit({"check": "build", "verdict": "pass",
               "values": {"vertices": G.n_vertices, "edges": G.n_edges, "parts": list(G.sizes)},
               "witness": None, "tolerance": None, "manifest": man})
    return EXIT_PASS


def _emit(report: dict):
    print(json.dumps(report, indent=2, sort_keys=True, default=str))


def _face(f):
    return None if f is None else {"vertices": list(f.vertices), "types": list(f.types)}


def run_check(name: str, G, args):
    """Return ``(passed, value, witness)`` for one named check."""
    if name == "regularity":
        try:
            return True, list(degree_profile(G)), None
        except HRGError as exc:
            w = getattr(exc, "witness", None)
            return False, None, [[_face(f), s] for f, s in w] if w else str(exc)
    if name == "type":
        try:
            tr = type_regularity(G)
            return True, {",".join(map(str, sorted(J))) or "-": d for J, d in tr.items()}, None
        except HRGError as exc:
            return False, None, str(exc)
    if name == "gallery":
        res = is_strongly_gallery_connected(G)
        return res.connected, {"links_checked": res.checked}, _face(res.witness)
    if name == "pure":
        return is_pure(G), None, None
    if name == "connected":
        return is_connected(G), None, None
    if name == "sgs":
        if not args.system:
            raise InvalidParams("the sgs check needs --system")
        X = quotient_complex(args.system, m=args.n + 1, q=args.q, s=args.s, k=args.k, r=args.r)
        rep = check_sgs_axioms(X.group, X.subgroups, full_a1=args.full_a1)
        return rep.passed, rep.as_dict(), None
    raise InvalidParams(f"unknown check {name!r}")


def cmd_verify(args) -> int:
    G, _ = _load(args.inp)
    names = [c.strip() for c in args.checks.split(",") if c.strip()]
    values, witnesses, verdicts = {}, {}, {}
    for name in names:
        ok, val, wit = run_check(name, G, args)
        verdicts[name] = "pass" if ok else "fail"
        values[name] = val
        witnesses[name] = wit
    passed = all(v == "pass" for v in verdicts.values())
    _emit({"check": "verify", "verdict": "pass" if passed else "fail",
           "values": {"verdicts": verdicts, **values}, "witness": witnesses,
           "tolerance": None, "manifest": manifest("verify", args)})
    return EXIT_PASS if passed else EXIT_FAIL


def cmd_spectrum(args) -> int:
    G, _ = _load(args.inp)
    try:
        cert = hdx_certificate(G, args.target, tol=args.tol, jobs=args.jobs)
    except (NotPure, Disconnected) as exc:
        _emit({"check": "spectrum", "verdict": "fail", "values": None,
               "witness": f"{type(exc).__name__}: {exc}", "tolerance": args.tol,
               "manifest": manifest("spectrum", args)})
        return EXIT_FAIL
    d = cert.as_dict()
    _emit({"check": "spectrum", "verdict": d["verdict"], "values": d,
           "witness": {"worst_link": d["worst_link"]}, "tolerance": args.tol,
           "manifest": manifest("spectrum", args)})
    if not cert.verdict:
        return EXIT_FAIL
    if G.n_parts > 2 and cert.trickle_mu is None:
        return EXIT_INFO
    return EXIT_PASS


def cmd_degrees(args) -> int:
    prof = degree_profile_for(args.family, n=args.n, q=args.q, r=args.r, route=args.route)
    _emit({"check": "degrees", "verdict": "pass", "values": {"profile": list(prof)},
           "witness": None, "tolerance": 0, "manifest": manifest("degrees", args)})
    return EXIT_PASS


def cmd_dot(args) -> int:
    G, _ = _load(args.inp)
    sys.stdout.write(to_dot(G))
    return EXIT_PASS


def _common(p, n=2, q=2, s=2, k=2, r=1):
    p.add_argument("--n", type=int, default=n, help="dimension (parts minus one)")
    p.add_argument("--q", type=int, default=q)
    p.add_argument("--s", type=int, default=s)
    p.add_argument("--k", type=int, default=k)
    p.add_argument("--r", type=int, default=r)


def make_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hrg", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    b = sub.add_parser("build", help="construct a graph and write it")
    b.add_argument("--construction", required=True, choices=CONSTRUCTIONS)
    _common(b)
    b.add_argument("--sizes", default="1,1", help="part sizes for 'complete'")
    b.add_argument("--full-torus", action="store_true")
    b.add_argument("--in", dest="inp")
    b.add_argument("--in2", dest="inp2")
    b.add_argument("--group", help="sN, aN, cN, dN or cycles separated by ';'")
    b.add_argument("--out", "-o")
    b.set_defaults(func=cmd_build)

    v = sub.add_parser("verify", help="run structural checks on a graph file")
    v.add_argument("--in", dest="inp", required=True)
    v.add_argument("--checks", default="regularity,gallery")
    v.add_argument("--system", help="family for the sgs check: affine, el, affine-3r, knight")
    v.add_argument("--full-a1", action="store_true")
    _common(v)
    v.set_defaults(func=cmd_verify)

    s = sub.add_parser("spectrum", help="certify lambda_2 of the complex and its links")
    s.add_argument("--in", dest="inp", required=True)
    s.add_argument("--target", "--lambda", dest="target", type=float, required=True)
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--jobs", type=int, default=1)
    s.set_defaults(func=cmd_spectrum)

    d = sub.add_parser("degrees", help="closed-form degree profiles")
    d.add_argument("--family", required=True, choices=FAMILIES)
    d.add_argument("--route", choices=("closed", "generic"), default="closed")
    _common(d, n=None)
    d.set_defaults(func=cmd_degrees)

    x = sub.add_parser("dot", help="Graphviz export (fewer than 2000 vertices)")
    x.add_argument("--in", dest="inp", required=True)
    x.set_defaults(func=cmd_dot)
    return parser


def _default_n(args):
    if getattr(args, "n", 0) is None:
        args.n = 4 if "adhoc" in args.family else 2


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    _default_n(args)
    try:
        return args.func(args)
    except CapacityExceeded as exc:
        print(f"capacity exceeded: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (InvalidParams, ValueError, OSError) as exc:
        print(f"invalid parameters: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
