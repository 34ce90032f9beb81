"""Command-line interface. JSON goes to stdout, diagnostics to stderr.

Exit codes: 0 success / verification pass, 1 verification fail,
2 usage, parse, resource or undecided.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .cofinite import CofiniteSet, parametrize_cofinite
from .decompose import decompose_to_integer_vectors
from .errors import ParseError, PolyParamError
from .intval import find_non_integer_point, is_integer_valued, to_binomial_form
from .oracle import check_containment, check_coverage, default_jobs, set_from_json
from .param import ParamObject
from .rangeparam import EmptyRange, parametrize_integer_range
from .residue import ResidueUnion, param_residue_intersection, param_residue_union
from .textform import format_value, parse_poly, parse_vector, poly_to_text

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _json_arg(text: str, what: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON for {what}: {exc.msg}", text, exc.pos) from None


def parse_reps(text: str, k: int | None = None) -> list:
    """Accepts ``[1],[3]``, ``[[1],[3]]``, ``1,3`` or, with k > 1, a single flat point."""
    text = text.strip()
    try:
        reps = json.loads(text)
    except json.JSONDecodeError:
        reps = _json_arg("[" + text + "]", "--reps")
    if not isinstance(reps, list):
        reps = [reps]
    if k and k > 1 and len(reps) == k and all(isinstance(r, int) for r in reps):
        reps = [reps]
    return reps


def load_param(spec: str) -> ParamObject:
    if spec == "-":
        text = sys.stdin.read()
    elif spec.lstrip().startswith("{"):
        text = spec
    else:
        text = Path(spec).read_text()
    return ParamObject.from_json(_json_arg(text, "--param"))


def _emit(obj, args) -> None:
    indent = 2 if args.format == "pretty" else None
    sys.stdout.write(json.dumps(obj, indent=indent) + "\n")


def _note(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- subcommands ------------------------------------------------------------------------


def cmd_residues(args) -> int:
    u = ResidueUnion.make(args.q, parse_reps(args.reps, args.k), args.k)
    _emit(param_residue_union(u).to_json(), args)
    return EXIT_OK


def cmd_intersect(args) -> int:
    parts = []
    for part in args.part:
        q, sep, reps = part.partition(":")
        if not sep:
            raise UsageError(f"--part must look like q:reps, got {part!r}")
        parts.append(ResidueUnion.make(int(q), parse_reps(reps, args.k), args.k))
    _emit(param_residue_intersection(parts).to_json(), args)
    return EXIT_OK


def cmd_lemma2(args) -> int:
    h = parse_vector(args.vector)
    result = parametrize_integer_range(h)
    if isinstance(result, EmptyRange):
        _note(f"denominator {result.c}: no admissible residue classes mod {result.modulus}")
        _emit(result.to_json(), args)
        return EXIT_OK
    pr = result.provenance.params
    fac = " * ".join(f"{p}^{e}" for p, e in pr["factorization"]) or "1"
    _note(f"common denominator c = {pr['c']} = {fac}; residue classes per prime power: {pr['class_counts']}")
    _emit(result.to_json(), args)
    return EXIT_OK


def cmd_decompose(args) -> int:
    g = parse_vector(args.vector)
    parts = decompose_to_integer_vectors(g)
    moduli = parts[0].provenance.params["moduli"]
    _emit({"moduli": moduli, "vectors": [p.to_json() for p in parts]}, args)
    return EXIT_OK


def cmd_cofinite(args) -> int:
    excluded = _json_arg(args.exclude, "--exclude")
    s = CofiniteSet.make(args.k, excluded)
    _emit(parametrize_cofinite(s).to_json(), args)
    return EXIT_OK


def cmd_check_intval(args) -> int:
    p = parse_poly(args.poly)
    ok = is_integer_valued(p)
    point = None if ok else find_non_integer_point(p)
    out = {"poly": poly_to_text(p), "integer_valued": ok,
           "binomial_form": to_binomial_form(p).to_json(),
           "counterexample": None if point is None else
           {"point": list(point), "value": format_value(p.evaluate(point))}}
    _emit(out, args)
    return EXIT_OK


def cmd_verify(args) -> int:
    param = load_param(args.param)
    desc = set_from_json(_json_arg(args.set, "--set"))
    if args.mode == "containment":
        report = check_containment(param, desc, samples=args.samples, bound=args.bound,
                                   seed=args.seed, jobs=args.jobs)
    else:
        if args.window is None:
            raise UsageError("coverage needs --window")
        report = check_coverage(param, desc, _json_arg(args.window, "--window"))
    _emit(report.to_json(timing=args.timing), args)
    return {"pass": EXIT_OK, "fail": EXIT_FAIL}.get(report.verdict, EXIT_USAGE)


def cmd_eval(args) -> int:
    param = load_param(args.param)
    point = parse_reps(args.point)
    if point and all(isinstance(v, list) for v in point):
        (point,) = point
    value = param.vector.evaluate(tuple(int(v) for v in point))
    _emit({"vars": list(param.vars), "point": list(point), "value": [format_value(v) for v in value]}, args)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=["json", "pretty"], default="json")

    ap = argparse.ArgumentParser(prog="polyparam", parents=[common],
                                 description="Polynomial parametrizations of sets of integer points.")
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("residues", parents=[common], help="union of residue classes mod a prime power")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--reps", required=True, help='e.g. "[1],[3]"')
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_residues)

    p = sub.add_parser("intersect", parents=[common], help="intersection over distinct prime powers")
    p.add_argument("--part", action="append", required=True, help='q:reps, e.g. "4:[1]"')
    p.add_argument("--k", type=int)
    p.set_defaults(func=cmd_intersect)

    p = sub.add_parser("lemma2", parents=[common], help="integer points in the range of a rational vector")
    p.add_argument("--vector", required=True, help='components separated by ";", e.g. "1/4*x1^2"')
    p.set_defaults(func=cmd_lemma2)

    p = sub.add_parser("decompose", parents=[common], help="split an integer-valued vector")
    p.add_argument("--vector", required=True)
    p.set_defaults(func=cmd_decompose)

    p = sub.add_parser("cofinite", parents=[common], help="Z^k minus a finite set")
    p.add_argument("--exclude", required=True, help='JSON list of points, e.g. "[[0,1]]"')
    p.add_argument("-k", "--k", type=int, required=True)
    p.set_defaults(func=cmd_cofinite)

    p = sub.add_parser("check-intval", parents=[common], help="decide integer-valuedness")
    p.add_argument("--poly", required=True)
    p.set_defaults(func=cmd_check_intval)

    p = sub.add_parser("verify", parents=[common], help="containment or coverage check")
    p.add_argument("mode", choices=["containment", "coverage"])
    p.add_argument("--param", required=True, help="ParamObject JSON file, inline JSON, or -")
    p.add_argument("--set", required=True, help="set description JSON")
    p.add_argument("--window", help='coverage window, e.g. "[-20,20]"')
    p.add_argument("--samples", type=int, default=100_000)
    p.add_argument("--bound", type=int, default=1000)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default $POLYPARAM_JOBS or 1)")
    p.add_argument("--timing", action="store_true", help="include wall time (breaks byte-identical output)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("eval", parents=[common], help="evaluate a ParamObject at a point")
    p.add_argument("--param", required=True)
    p.add_argument("--point", required=True)
    p.set_defaults(func=cmd_eval)
    return ap


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if getattr(args, "jobs", None) is None and args.command == "verify":
        args.jobs = default_jobs()
    try:
        return args.func(args)
    except ParseError as exc:
        _note(f"parse error: {exc}")
        return EXIT_USAGE
    except (PolyParamError, UsageError, OSError, KeyError, TypeError, ValueError) as exc:
        _note(f"error: {exc}")
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
