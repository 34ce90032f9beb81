"""Integer-coefficient parametrizations of co-finite subsets of Z^k.

Pipeline: translate the excluded set F into a box prod [0, n_i], parametrize
the complement of the box by induction on k, put back the box points that are
not in F one at a time (the origin last), then translate back.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Sequence

from .errors import DomainError
from .param import ParamObject, Provenance, VarAllocator
from .polycore import Polynomial, PolyVector, identity_vector, make_var

# grid used to double-check the proven choice of the step exponent
Z_MAX = 50
XY_MAX = 1000


@dataclass(frozen=True)
class BoxSpec:
    bounds: tuple[int, ...]

    def __post_init__(self):
        b = tuple(int(n) for n in self.bounds)
        if not b:
            raise DomainError("box needs at least one dimension")
        if any(n < 0 for n in b):
            raise DomainError(f"box bounds must be non-negative, got {b}")
        object.__setattr__(self, "bounds", b)

    @property
    def k(self) -> int:
        return len(self.bounds)

    def contains(self, point: Sequence[int]) -> bool:
        return all(0 <= c <= n for c, n in zip(point, self.bounds))

    def points(self):
        return itertools.product(*(range(n + 1) for n in self.bounds))


@dataclass(frozen=True)
class CofiniteSet:
    k: int
    excluded: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, k: int, excluded: Iterable) -> "CofiniteSet":
        pts = sorted({tuple(p) if isinstance(p, (list, tuple)) else (p,) for p in excluded})
        if any(len(p) != k for p in pts):
            raise DomainError(f"excluded points must lie in Z^{k}")
        return cls(k, tuple(pts))


def base_interval_complement(n: int) -> ParamObject:
    """The 5-variable polynomial with range Z minus [0, n]."""
    if n < 0:
        raise DomainError("n must be non-negative")
    xs = [Polynomial.var(make_var("x", i)) for i in range(1, 6)]
    s = xs[0] ** 2 + xs[1] ** 2 + xs[2] ** 2 + xs[3] ** 2
    sel = xs[4] ** 2
    f = -sel * (s + 1) + (1 - sel) * (s + n + 1)
    prov = Provenance("base_interval", {"n": n, "sum_vars": ["x1", "x2", "x3", "x4"], "selector": "x5"})
    return ParamObject(PolyVector([f]), prov)


def step_m_rule(n: int) -> int:
    """Least m >= 1 with 4^m > n.

    For |z| >= 2 and integers x, y:
      (z^2-1)^2 >= (9/4) z^2, so (1+x^2)(z^2-1)^(2m) >= (|x|+1)(9/4) z^2 9^(m-1)
                 >= z^2|x| + 9^m > z^2|x| + n;
      (1+y^2) z^(2m) >= (|y|+1) 4^(m-1) z^2 >= (z^2-1)|y| + 4^m > (z^2-1)|y| + n.
    At z = 2, y = 0 the second inequality reads 4^m > n, so the rule is also minimal.
    """
    m = 1
    while 4**m <= n:
        m += 1
    return m


def validate_step_m(n: int, m: int, z_max: int = Z_MAX, xy_max: int = XY_MAX) -> bool:
    """Check both dominance inequalities on |z| in [2, z_max], |x|, |y| in [0, xy_max].

    Both sides depend on x, y, z only through |x|, |y|, z^2. Outside the grid
    the bound chain in :func:`step_m_rule` is what carries the claim.
    """
    for z in range(2, z_max + 1):
        a = (z * z - 1) ** (2 * m)
        b = z ** (2 * m)
        for x in range(xy_max + 1):
            if not (1 + x * x) * a > z * z * x + n:
                return False
            if not (1 + x * x) * b > (z * z - 1) * x + n:
                return False
    return True


@lru_cache(maxsize=None)
def choose_step_m(n: int) -> int:
    m = step_m_rule(n)
    if not validate_step_m(n, m):
        raise AssertionError(f"step exponent {m} failed grid validation for n={n}")
    return m


def box_complement(b: BoxSpec | Sequence[int]) -> ParamObject:
    if not isinstance(b, BoxSpec):
        b = BoxSpec(tuple(b))
    if b.k == 1:
        return base_interval_complement(b.bounds[0])
    inner = box_complement(BoxSpec(b.bounds[:-1]))
    last = base_interval_complement(b.bounds[-1])
    alloc = VarAllocator()
    inner_map = alloc.rename_apart(inner.vars)
    last_map = alloc.rename_apart(last.vars)
    x_vars = [alloc.fresh("x") for _ in range(b.k - 1)]
    y_var, z_var = alloc.fresh("y"), alloc.fresh("z")
    m = choose_step_m(max(b.bounds))
    fs = inner.vector.rename(inner_map).components
    f = last.vector.rename(last_map).components[0]
    z, y = Polynomial.var(z_var), Polynomial.var(y_var)
    z2 = z ** 2
    damp = (1 - z2) ** (2 * m)
    comps = []
    for fi, xv in zip(fs, x_vars):
        x = Polynomial.var(xv)
        comps.append((1 + x ** 2) * damp * fi + z2 * x)
    comps.append((1 + y ** 2) * z ** (2 * m) * f + (1 - z2) * y)
    prov = Provenance("box_complement", {
        "bounds": list(b.bounds), "m": m, "x_vars": x_vars, "y_var": y_var, "z_var": z_var,
        "renamings": [inner_map, last_map]}, (inner, last))
    return ParamObject(PolyVector(comps), prov)


def add_value_exponent(max_n: int) -> int:
    """Least t >= 1 with 2^(2t-2) > max_n."""
    t = 1
    while 2 ** (2 * t - 2) <= max_n:
        t += 1
    return t


def range_certificate(g: ParamObject) -> dict:
    """What the construction trace guarantees about range(g).

    Returns ``{"box": bounds, "added": [...], "zero_free": bool}`` meaning
    range(g) = (Z^k minus box) together with the added points.
    """
    prov = g.provenance
    if prov.tag == "base_interval":
        return {"box": [prov.params["n"]], "added": [], "zero_free": True}
    if prov.tag == "box_complement":
        return {"box": list(prov.params["bounds"]), "added": [], "zero_free": True}
    if prov.tag == "add_value":
        cert = range_certificate(prov.children[0])
        c = prov.params["c"]
        added = cert["added"] + [c]
        return {"box": cert["box"], "added": added, "zero_free": cert["zero_free"] and any(c)}
    raise DomainError(f"no box-complement certificate for provenance {prov.tag!r}")


def add_value(g: ParamObject, c: Sequence[int], b: BoxSpec | Sequence[int]) -> ParamObject:
    if not isinstance(b, BoxSpec):
        b = BoxSpec(tuple(b))
    c = tuple(int(v) for v in c)
    if len(c) != b.k or not b.contains(c):
        raise DomainError(f"value {c} is not in the box {b.bounds}")
    cert = range_certificate(g)
    if tuple(cert["box"]) != b.bounds:
        raise DomainError(f"vector certifies box {cert['box']}, not {list(b.bounds)}")
    if not cert["zero_free"]:
        raise DomainError("the range already contains 0; the origin must be added last")
    t = add_value_exponent(max(b.bounds))
    alloc = VarAllocator(g.vars)
    w_var = alloc.fresh("w")
    w = Polynomial.var(w_var)
    lead = w ** (2 * t)
    tail = 1 - w ** 2
    comps = [lead * gi + tail * ci for gi, ci in zip(g.vector.components, c)]
    prov = Provenance("add_value", {"c": list(c), "t": t, "w_var": w_var, "bounds": list(b.bounds)}, (g,))
    return ParamObject(PolyVector(comps, g.vars + (w_var,)), prov)


def parametrize_cofinite(s: CofiniteSet) -> ParamObject:
    k = s.k
    if not s.excluded:
        vars = [make_var("x", i + 1) for i in range(k)]
        return ParamObject(identity_vector(vars), Provenance("identity", {"k": k}))
    shift = [min(p[i] for p in s.excluded) for i in range(k)]
    bounds = [max(p[i] for p in s.excluded) - shift[i] for i in range(k)]
    box = BoxSpec(tuple(bounds))
    moved = {tuple(a - o for a, o in zip(p, shift)) for p in s.excluded}
    order = [pt for pt in box.points() if pt not in moved]
    origin = (0,) * k
    if origin in order:
        order.remove(origin)
        order.append(origin)
    g = box_complement(box)
    for pt in order:
        g = add_value(g, pt, box)
    comps = [gi + o for gi, o in zip(g.vector.components, shift)]
    prov = Provenance("cofinite", {"k": k, "excluded": [list(p) for p in s.excluded], "shift": shift,
                                   "bounds": bounds, "added": [list(p) for p in order]}, (g,))
    return ParamObject(PolyVector(comps, g.vars), prov)


def validate_certificates(param: ParamObject) -> list[dict]:
    """Walk the add_value chain and re-check the zero-last discipline.

    Returns one record per link, innermost first. Raises DomainError on a violation.
    """
    node = param
    if node.provenance.tag == "cofinite":
        node = node.provenance.children[0]
    chain = []
    while node.provenance.tag == "add_value":
        chain.append(node)
        node = node.provenance.children[0]
    records = []
    cert = range_certificate(node)
    if not cert["zero_free"] or cert["added"]:
        raise DomainError("chain does not start at a box complement")
    for link in reversed(chain):
        c = link.provenance.params["c"]
        if not cert["zero_free"]:
            raise DomainError(f"value {c} added after the origin")
        if link.provenance.params["t"] != add_value_exponent(max(cert["box"])):
            raise DomainError(f"wrong dominance exponent at value {c}")
        cert = {"box": cert["box"], "added": cert["added"] + [c], "zero_free": cert["zero_free"] and any(c)}
        records.append({"c": c, "t": link.provenance.params["t"], "zero_free_after": cert["zero_free"]})
    return records
