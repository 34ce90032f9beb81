"""Independent verification of constructed parametrizations.

Membership is decided from set descriptions alone and never looks at the
constructed polynomials. Coverage is shown constructively: a witness argument
is rebuilt from the construction trace and re-evaluated.
"""
from __future__ import annotations

import itertools
import json
import math
import os
import random
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any, Sequence

from .cofinite import BoxSpec
from .errors import DimensionError, DomainError, UndecidedError, WitnessNotFound
from .ntheory import bezout
from .param import ParamObject
from .polycore import PolyVector
from .residue import ResidueUnion
from .textform import format_value, vector_from_json, vector_to_json

SEARCH_BUDGET = 200_000
MAX_STORED_FAILURES = 50


# -- four squares ----------------------------------------------------------------


def four_squares(v: int) -> tuple[int, int, int, int]:
    """Lexicographically greatest (a, b, c, d), a >= b >= c >= d >= 0, with a^2+b^2+c^2+d^2 = v."""
    if v < 0:
        raise DomainError("four_squares needs a non-negative integer")
    for a in range(math.isqrt(v), -1, -1):
        ra = v - a * a
        for b in range(min(a, math.isqrt(ra)), -1, -1):
            rb = ra - b * b
            for c in range(min(b, math.isqrt(rb)), -1, -1):
                rc = rb - c * c
                d = math.isqrt(rc)
                if d * d == rc and d <= c:
                    return a, b, c, d
    raise AssertionError(f"no four-square decomposition of {v}")  # Lagrange: unreachable


# -- set descriptions --------------------------------------------------------------


def _as_point(p) -> tuple:
    if isinstance(p, (list, tuple)):
        return tuple(p)
    return (p,)


def _is_int(x) -> bool:
    return isinstance(x, int) or (isinstance(x, Fraction) and x.denominator == 1)


@dataclass(frozen=True)
class ResidueUnionSet:
    union: ResidueUnion

    @property
    def k(self):
        return self.union.k

    def _contains(self, p):
        return self.union.contains(p)

    def to_json(self):
        return {"residue": self.union.to_json()}


@dataclass(frozen=True)
class IntersectionSet:
    parts: tuple

    @property
    def k(self):
        return self.parts[0].k

    def _contains(self, p):
        return all(contains(d, p) for d in self.parts)

    def to_json(self):
        return {"intersection": [d.to_json() for d in self.parts]}


@dataclass(frozen=True)
class CofiniteDesc:
    k: int
    excluded: frozenset

    def _contains(self, p):
        return p not in self.excluded

    def to_json(self):
        return {"cofinite": {"k": self.k, "F": [list(p) for p in sorted(self.excluded)]}}


@dataclass(frozen=True)
class BoxComplementDesc:
    box: BoxSpec

    @property
    def k(self):
        return self.box.k

    def _contains(self, p):
        return not self.box.contains(p)

    def to_json(self):
        return {"box_complement": {"bounds": list(self.box.bounds)}}


@dataclass(frozen=True)
class FullSpace:
    k: int

    def _contains(self, p):
        return True

    def to_json(self):
        return {"full": {"k": self.k}}


@dataclass(frozen=True)
class IntegerPointsOfRange:
    """Integer points of h(arg_window), trusted as the full answer inside value_window.

    The caller is responsible for choosing arg_window large enough that every
    integer point of range(h) inside value_window has a preimage there.
    """

    vector: PolyVector
    arg_window: tuple
    value_window: tuple
    _points: frozenset = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if len(self.arg_window) != len(self.vector.vars):
            raise DimensionError("argument window does not match the vector's variables")
        if len(self.value_window) != self.vector.k:
            raise DimensionError("value window does not match the vector's dimension")
        fn = self.vector.evaluator()
        pts = set()
        for a in itertools.product(*(range(lo, hi + 1) for lo, hi in self.arg_window)):
            v = fn(a)
            if all(_is_int(x) for x in v):
                pts.add(tuple(int(x) for x in v))
        object.__setattr__(self, "_points", frozenset(pts))

    @property
    def k(self):
        return self.vector.k

    def in_window(self, p) -> bool:
        return all(lo <= c <= hi for c, (lo, hi) in zip(p, self.value_window))

    def _contains(self, p):
        if not self.in_window(p):
            raise UndecidedError(f"{p} lies outside the declared value window {self.value_window}")
        return p in self._points

    def to_json(self):
        return {"integer_points": {"vector": vector_to_json(self.vector),
                                   "arg_window": [list(w) for w in self.arg_window],
                                   "value_window": [list(w) for w in self.value_window]}}


SetDescription = Any


def contains(d: SetDescription, point) -> bool:
    p = _as_point(point)
    if len(p) != d.k:
        raise DimensionError(f"point {p} is not in Z^{d.k}")
    if not all(_is_int(c) for c in p):
        return False
    return d._contains(tuple(int(c) for c in p))


def _window(obj, k: int) -> tuple:
    obj = list(obj)
    if len(obj) == 2 and all(isinstance(v, int) for v in obj):
        return tuple((obj[0], obj[1]) for _ in range(k))
    if len(obj) != k:
        raise DimensionError(f"window {obj} does not have {k} dimensions")
    return tuple((int(lo), int(hi)) for lo, hi in obj)


def set_from_json(obj) -> SetDescription:
    if isinstance(obj, str):
        obj = json.loads(obj)
    if not isinstance(obj, dict) or len(obj) != 1:
        raise DomainError('set description must be a single-key object such as {"full": {"k": 2}}')
    (tag, body), = obj.items()
    if tag == "residue":
        return ResidueUnionSet(ResidueUnion.from_json(body))
    if tag == "intersection":
        return IntersectionSet(tuple(set_from_json(b) for b in body))
    if tag == "cofinite":
        k = int(body["k"])
        pts = frozenset(_as_point(p) for p in body.get("F", []))
        if any(len(p) != k for p in pts):
            raise DimensionError(f"excluded points must lie in Z^{k}")
        return CofiniteDesc(k, pts)
    if tag == "box_complement":
        return BoxComplementDesc(BoxSpec(tuple(body["bounds"])))
    if tag == "full":
        return FullSpace(int(body["k"]))
    if tag == "integer_points":
        vec = vector_from_json(body["vector"])
        return IntegerPointsOfRange(vec, _window(body["arg_window"], len(vec.vars)),
                                    _window(body["value_window"], vec.k))
    raise DomainError(f"unknown set description {tag!r}")


# -- reports -----------------------------------------------------------------------


@dataclass
class VerificationReport:
    mode: str
    attempted: int = 0
    failures: list = field(default_factory=list)
    failure_count: int = 0
    undecided: int = 0
    witnesses: list = field(default_factory=list)
    non_members: int = 0
    wall_time: float = 0.0

    @property
    def verdict(self) -> str:
        if self.failure_count:
            return "fail"
        if self.attempted and self.undecided == self.attempted:
            return "undecided"
        return "pass"

    @property
    def passed(self) -> bool:
        return self.verdict == "pass"

    def record_failure(self, item: dict):
        self.failure_count += 1
        if len(self.failures) < MAX_STORED_FAILURES:
            self.failures.append(item)

    def merge(self, other: "VerificationReport") -> "VerificationReport":
        self.attempted += other.attempted
        self.undecided += other.undecided
        self.non_members += other.non_members
        self.witnesses.extend(other.witnesses)
        for f in other.failures:
            if len(self.failures) < MAX_STORED_FAILURES:
                self.failures.append(f)
        self.failure_count += other.failure_count
        return self

    def to_json(self, timing: bool = False) -> dict:
        out = {"mode": self.mode, "verdict": self.verdict, "attempted": self.attempted,
               "failure_count": self.failure_count, "failures": self.failures,
               "undecided": self.undecided}
        if self.mode == "coverage":
            out["non_members"] = self.non_members
            out["witnesses"] = self.witnesses
        if timing:
            out["wall_time"] = round(self.wall_time, 6)
        return out


# -- containment ---------------------------------------------------------------------

GRID_FULL_LIMIT = 4096


def deterministic_grid(nvars: int) -> list[tuple]:
    """All of {-1,0,1}^n when small, else every point with at most two nonzero entries in {-2..2}."""
    if 3**nvars <= GRID_FULL_LIMIT:
        return list(itertools.product((-1, 0, 1), repeat=nvars))
    pts = [(0,) * nvars]
    vals = (-2, -1, 1, 2)
    for i in range(nvars):
        for a in vals:
            p = [0] * nvars
            p[i] = a
            pts.append(tuple(p))
    for i, j in itertools.combinations(range(nvars), 2):
        for a, b in itertools.product(vals, repeat=2):
            p = [0] * nvars
            p[i], p[j] = a, b
            pts.append(tuple(p))
    return pts


def _check_chunk(param_json: dict, desc_json: dict, args: list) -> VerificationReport:
    param = ParamObject.from_json(param_json)
    desc = set_from_json(desc_json)
    return _containment_on(param, desc, args)


def _containment_on(param: ParamObject, desc: SetDescription, args: list) -> VerificationReport:
    rep = VerificationReport("containment")
    fn = param.vector.evaluator()
    for a in args:
        rep.attempted += 1
        value = fn(a)
        try:
            ok = contains(desc, value)
        except UndecidedError:
            rep.undecided += 1
            continue
        if not ok:
            rep.record_failure({"args": list(a), "value": [format_value(x) for x in value]})
    return rep


def sample_arguments(nvars: int, samples: int, bound: int, seed: int) -> list[tuple]:
    rng = random.Random(seed)
    out = deterministic_grid(nvars)
    for _ in range(samples):
        out.append(tuple(rng.randint(-bound, bound) for _ in range(nvars)))
    return out


def default_jobs() -> int:
    try:
        return max(1, int(os.environ.get("POLYPARAM_JOBS", "1")))
    except ValueError:
        return 1


def check_containment(param: ParamObject, desc: SetDescription, samples: int = 100_000,
                      bound: int = 1000, seed: int = 0, jobs: int | None = None) -> VerificationReport:
    start = time.perf_counter()
    if desc.k != param.k:
        raise DimensionError(f"vector has {param.k} components, set lives in Z^{desc.k}")
    args = sample_arguments(len(param.vars), samples, bound, seed)
    jobs = jobs or default_jobs()
    if jobs <= 1 or len(args) < 2 * jobs:
        rep = _containment_on(param, desc, args)
    else:
        size = -(-len(args) // jobs)
        chunks = [args[i:i + size] for i in range(0, len(args), size)]
        pj, dj = param.to_json(), desc.to_json()
        rep = VerificationReport("containment")
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            for part in ex.map(_check_chunk, [pj] * len(chunks), [dj] * len(chunks), chunks):
                rep.merge(part)
    rep.wall_time = time.perf_counter() - start
    return rep


# -- witnesses -------------------------------------------------------------------------


def _search(vector: PolyVector, target: tuple, budget: int = SEARCH_BUDGET) -> dict:
    """Shell-by-shell search of the argument space by max-norm; bounded by ``budget`` evaluations."""
    fn = vector.evaluator()
    n = len(vector.vars)
    if n == 0:
        if fn(()) == target:
            return {}
        raise WitnessNotFound(f"constant vector never equals {target}")
    spent = 0
    r = 0
    while spent < budget:
        for a in itertools.product(range(-r, r + 1), repeat=n):
            if r and max(abs(c) for c in a) != r:
                continue
            spent += 1
            if fn(a) == target:
                return dict(zip(vector.vars, a))
            if spent >= budget:
                break
        r += 1
    raise WitnessNotFound(f"no preimage of {target} found within {budget} evaluations")


def _remap(args: dict, mapping: dict) -> dict:
    return {mapping.get(v, v): x for v, x in args.items()}


def _residue_class_index(params: dict, target: tuple) -> int:
    q = params["q"]
    for l, rep in enumerate(params["table"]):
        if all((v - a) % q == 0 for v, a in zip(target, rep)):
            return l
    raise DomainError(f"{list(target)} lies in no residue class of the union")


def _w_residue(param: ParamObject, target: tuple, budget: int) -> dict:
    pr = param.provenance.params
    l = _residue_class_index(pr, target)
    rep = pr["table"][l]
    args = {x: (l >> i) & 1 for i, x in enumerate(pr["x_vars"])}
    for y, v, a in zip(pr["y_vars"], target, rep):
        args[y] = (v - a) // pr["q"]
    return args


def _w_crt(param: ParamObject, target: tuple, budget: int) -> dict:
    pr = param.provenance.params
    children = param.provenance.children
    if len(children) == 1:
        return _remap(_witness(children[0], target, budget), pr["renamings"][0])
    moduli, cs, us = pr["moduli"], pr["multipliers"], pr["factors"]
    total = math.prod(moduli)
    g, lam = bezout(us)
    if g != 1:
        raise DomainError("CRT factors are not coprime; adjustment lattice is not full")
    picks = []
    base = [0] * len(target)
    for child, c in zip(children, cs):
        cp = child.provenance.params
        l = _residue_class_index(cp, target)
        picks.append(l)
        for j, a in enumerate(cp["table"][l]):
            base[j] += c * a
    resid = []
    for v, b in zip(target, base):
        if (v - b) % total:
            raise DomainError(f"{list(target)} is not in the intersection")
        resid.append((v - b) // total)
    args = {}
    for i, (child, l) in enumerate(zip(children, picks)):
        cp = child.provenance.params
        local = {x: (l >> b) & 1 for b, x in enumerate(cp["x_vars"])}
        # sum_i c_i q_i y_i = total * sum_i u_i y_i, so y_i = lam_i * resid solves it
        for y, r in zip(cp["y_vars"], resid):
            local[y] = lam[i] * r
        args.update(_remap(local, pr["renamings"][i]))
    return args


def _w_lemma2(param: ParamObject, target: tuple, budget: int) -> dict:
    children = param.provenance.children
    source = children[0].vector
    pre = _search(source, target, budget)
    if len(children) == 1:
        return pre
    a = tuple(pre[v] for v in source.vars)
    return _witness(children[1], a, budget)


def _w_base(param: ParamObject, target: tuple, budget: int) -> dict:
    pr = param.provenance.params
    n = pr["n"]
    (v,) = target
    if v > n:
        sel, total = 0, v - n - 1
    elif v < 0:
        sel, total = 1, -v - 1
    else:
        raise DomainError(f"{v} lies in the excluded interval [0, {n}]")
    args = dict(zip(pr["sum_vars"], four_squares(total)))
    args[pr["selector"]] = sel
    return args


def _w_box(param: ParamObject, target: tuple, budget: int) -> dict:
    pr = param.provenance.params
    inner, last = param.provenance.children
    inner_map, last_map = pr["renamings"]
    bounds = pr["bounds"]
    head, tail = target[:-1], target[-1]
    if not 0 <= tail <= bounds[-1]:
        # z = 1, y = 0 gives (x_1, ..., x_{k-1}, f)
        args = _remap(_witness(last, (tail,), budget), last_map)
        args.update(dict(zip(pr["x_vars"], head)))
        args[pr["z_var"]] = 1
        args[pr["y_var"]] = 0
        return args
    if all(0 <= c <= n for c, n in zip(head, bounds)):
        raise DomainError(f"{list(target)} lies in the excluded box")
    # z = 0, x = 0 gives (f_1, ..., f_{k-1}, y)
    args = _remap(_witness(inner, head, budget), inner_map)
    args.update({x: 0 for x in pr["x_vars"]})
    args[pr["z_var"]] = 0
    args[pr["y_var"]] = tail
    return args


def _w_add(param: ParamObject, target: tuple, budget: int) -> dict:
    pr = param.provenance.params
    if list(target) == pr["c"]:
        return {pr["w_var"]: 0}
    args = _witness(param.provenance.children[0], target, budget)
    args[pr["w_var"]] = 1
    return args


def _w_cofinite(param: ParamObject, target: tuple, budget: int) -> dict:
    shift = param.provenance.params["shift"]
    return _witness(param.provenance.children[0], tuple(v - s for v, s in zip(target, shift)), budget)


def _w_identity(param: ParamObject, target: tuple, budget: int) -> dict:
    return dict(zip(param.vars, target))


def _w_search(param: ParamObject, target: tuple, budget: int) -> dict:
    return _search(param.vector, target, budget)


_WITNESS = {
    "residue_union": _w_residue,
    "crt": _w_crt,
    "lemma2": _w_lemma2,
    "base_interval": _w_base,
    "box_complement": _w_box,
    "add_value": _w_add,
    "cofinite": _w_cofinite,
    "identity": _w_identity,
    "affine_shift": _w_search,
    "given": _w_search,
}


def _structural(param: ParamObject) -> bool:
    """True when witnesses come from the trace alone, with no search anywhere below."""
    if param.provenance.tag not in _STRUCTURAL:
        return False
    return all(_structural(c) for c in param.provenance.children)


_STRUCTURAL = {"residue_union", "crt", "base_interval", "box_complement", "add_value", "cofinite", "identity"}


def _witness(param: ParamObject, target: tuple, budget: int) -> dict:
    handler = _WITNESS.get(param.provenance.tag, _w_search)
    return handler(param, target, budget)


def find_witness(param: ParamObject, target, budget: int = SEARCH_BUDGET) -> tuple[int, ...]:
    """Arguments at which ``param`` evaluates exactly to ``target``.

    Raises DomainError when the trace shows the target is not in the range and
    WitnessNotFound when a bounded fallback search gives up.
    """
    target = _as_point(target)
    if len(target) != param.k:
        raise DimensionError(f"target {target} is not in Z^{param.k}")
    args = _witness(param, target, budget)
    out = tuple(args.get(v, 0) for v in param.vars)
    value = param.vector.evaluate(out)
    if value != target:
        raise AssertionError(f"witness {out} evaluates to {value}, not {target}")
    return out


def window_points(window: Sequence[tuple[int, int]]):
    return itertools.product(*(range(lo, hi + 1) for lo, hi in window))


def check_coverage(param: ParamObject, desc: SetDescription, window, budget: int = SEARCH_BUDGET,
                   record_witnesses: bool = True) -> VerificationReport:
    start = time.perf_counter()
    window = _window(window, desc.k)
    if desc.k != param.k:
        raise DimensionError(f"vector has {param.k} components, set lives in Z^{desc.k}")
    rep = VerificationReport("coverage")
    for p in window_points(window):
        try:
            member = contains(desc, p)
        except UndecidedError:
            rep.undecided += 1
            rep.attempted += 1
            continue
        if not member:
            rep.non_members += 1
            if not _structural(param):
                continue
            # the trace must refuse to produce a non-member
            try:
                args = find_witness(param, p, budget)
            except (DomainError, WitnessNotFound):
                continue
            rep.record_failure({"target": list(p), "reason": "non-member has a witness", "args": list(args)})
            continue
        rep.attempted += 1
        try:
            args = find_witness(param, p, budget)
        except (DomainError, WitnessNotFound) as exc:
            rep.record_failure({"target": list(p), "reason": str(exc)})
            continue
        if record_witnesses:
            rep.witnesses.append({"target": list(p), "args": list(args)})
    rep.wall_time = time.perf_counter() - start
    return rep


def described_set(param: ParamObject) -> SetDescription | None:
    """The set a constructed parametrization claims as its range, read from its trace."""
    prov = param.provenance
    pr = prov.params
    if prov.tag == "residue_union":
        return ResidueUnionSet(ResidueUnion.make(pr["q"], pr["reps"], pr["k"]))
    if prov.tag == "crt":
        return IntersectionSet(tuple(described_set(c) for c in prov.children))
    if prov.tag == "base_interval":
        return BoxComplementDesc(BoxSpec((pr["n"],)))
    if prov.tag == "box_complement":
        return BoxComplementDesc(BoxSpec(tuple(pr["bounds"])))
    if prov.tag == "cofinite":
        return CofiniteDesc(pr["k"], frozenset(tuple(p) for p in pr["excluded"]))
    if prov.tag == "identity":
        return FullSpace(pr["k"])
    return None
