"""Integer-coefficient parametrizations of unions and intersections of residue classes.

A union of classes a_0 + qZ^k, ..., a_s + qZ^k (q a prime power) is the range of

    (q*y1, ..., q*yk) + sum_l a_l * prod_i e_i^(l)(x_i)

where e_i^(l) is x_i^m or 1 - x_i^m according to bit i of l and x^m is always
0 or 1 mod q. Intersections over distinct primes are spliced together with
CRT multipliers.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import DimensionError, DomainError, ResourceError
from .ntheory import carmichael_lambda, is_prime, prime_power
from .param import ParamObject, Provenance, VarAllocator
from .polycore import Polynomial, PolyVector, make_var

PRIME_SEARCH_CAP = 10**6


@dataclass(frozen=True)
class ResidueUnion:
    q: int
    p: int
    e: int
    k: int
    reps: tuple[tuple[int, ...], ...]

    @classmethod
    def make(cls, q: int, reps: Iterable, k: int | None = None) -> "ResidueUnion":
        p, e = prime_power(q)
        pts = [tuple(r) if isinstance(r, (list, tuple)) else (r,) for r in reps]
        if k is None:
            if not pts:
                raise DimensionError("dimension k is required when there are no representatives")
            k = len(pts[0])
        if k < 1:
            raise DimensionError("dimension must be at least 1")
        for r in pts:
            if len(r) != k:
                raise DimensionError(f"representative {r} is not in Z^{k}")
        reduced = sorted({tuple(c % q for c in r) for r in pts})
        return cls(q, p, e, k, tuple(reduced))

    def contains(self, point: Sequence[int]) -> bool:
        return tuple(c % self.q for c in point) in set(self.reps)

    def to_json(self) -> dict:
        return {"q": self.q, "k": self.k, "reps": [list(r) for r in self.reps]}

    @classmethod
    def from_json(cls, obj) -> "ResidueUnion":
        return cls.make(int(obj["q"]), obj["reps"], obj.get("k"))


def selector_exponent(q: int) -> int:
    """Least m >= 1 with z^m = 0 or 1 (mod q) for every integer z.

    Units need m to be a multiple of the unit group exponent; p itself needs m >= e.
    """
    p, e = prime_power(q)
    lam = carmichael_lambda(p, e)
    return lam * -(-e // lam)


def selector_bits(s: int) -> int:
    """Number of selector variables t+1: least with 2^(t+1) >= s."""
    return max(1, (s - 1).bit_length())


def param_residue_union(u: ResidueUnion) -> ParamObject:
    if not u.reps:
        raise DomainError("cannot parametrize an empty union of residue classes")
    q, k = u.q, u.k
    m = selector_exponent(q)
    nbits = selector_bits(len(u.reps))
    size = 2 ** nbits
    # pad with a_0 so that every bit pattern selects a class of the union
    table = list(u.reps) + [u.reps[0]] * (size - len(u.reps))
    y_vars = [make_var("y", j + 1) for j in range(k)]
    x_vars = [make_var("x", i) for i in range(nbits)]
    on = [Polynomial.var(x) ** m for x in x_vars]
    off = [1 - s for s in on]
    comps = [Polynomial.var(y) * q for y in y_vars]
    for l, rep in enumerate(table):
        if not any(rep):
            continue
        sel = Polynomial.const(1)
        for i in range(nbits):
            sel = sel * (on[i] if (l >> i) & 1 else off[i])
        for j in range(k):
            if rep[j]:
                comps[j] = comps[j] + sel * rep[j]
    vec = PolyVector(comps, y_vars + x_vars)
    prov = Provenance("residue_union", {
        "q": q, "p": u.p, "e": u.e, "k": k, "m": m, "t": nbits - 1,
        "reps": [list(r) for r in u.reps], "table": [list(r) for r in table],
        "y_vars": y_vars, "x_vars": x_vars})
    return ParamObject(vec, prov)


def _least_prime_in_progression(b: int, q: int, avoid: set[int], cap: int) -> int:
    cand = b % q
    if cand == 0:
        cand = q
    while cand <= cap:
        if cand not in avoid and is_prime(cand):
            return cand
        cand += q
    raise ResourceError(f"no suitable prime = {b} mod {q} below {cap}")


def crt_multipliers(moduli: Sequence[int], cap: int = PRIME_SEARCH_CAP) -> tuple[list[int], list[int]]:
    """Return ``(c, u)``: c_i = 1 mod q_i, c_i = 0 mod q_j (j != i), c_i = u_i * prod_{j!=i} q_j.

    Each u_i is the least prime = (prod_{j!=i} q_j)^-1 mod q_i that is distinct from
    the previously chosen ones and coprime to every q_j, so gcd(u_1..u_r) = 1
    whenever r >= 2.
    """
    if not moduli:
        raise DomainError("need at least one modulus")
    bases = [prime_power(q)[0] for q in moduli]
    if len(set(bases)) != len(bases):
        raise DomainError(f"moduli {list(moduli)} are not powers of distinct primes")
    total = math.prod(moduli)
    avoid = set(bases)
    cs, us = [], []
    for q in moduli:
        cof = total // q
        b = pow(cof, -1, q) if q > 1 else 0
        p = _least_prime_in_progression(b, q, avoid, cap)
        avoid.add(p)
        us.append(p)
        cs.append(p * cof)
    return cs, us


def param_residue_intersection(parts: Sequence[ResidueUnion], cap: int = PRIME_SEARCH_CAP) -> ParamObject:
    if not parts:
        raise DomainError("need at least one residue union")
    k = parts[0].k
    if any(u.k != k for u in parts):
        raise DomainError("all residue unions must live in the same Z^k")
    if len({u.p for u in parts}) != len(parts):
        raise DomainError("residue unions must be over pairwise distinct primes")
    children = [param_residue_union(u) for u in parts]
    moduli = [u.q for u in parts]
    if len(parts) == 1:
        cs, us = [1], [1]
    else:
        cs, us = crt_multipliers(moduli, cap)
    alloc = VarAllocator()
    renamings = []
    total = None
    for c, child in zip(cs, children):
        mapping = alloc.rename_apart(child.vars)
        renamings.append(mapping)
        g = child.vector.rename(mapping).scale(c)
        total = g if total is None else total + g
    prov = Provenance("crt", {"moduli": moduli, "multipliers": cs, "factors": us,
                              "renamings": renamings}, children)
    return ParamObject(total, prov)
