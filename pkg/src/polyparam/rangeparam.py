"""Integer-valued parametrization of the integer points in the range of a rational vector."""
from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError, IntegralityError, ResourceError
from .intval import is_integer_valued
from .ntheory import factorize, prime_power
from .param import ParamObject, Provenance, given
from .polycore import PolyVector
from .residue import ResidueUnion, param_residue_intersection

ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class RationalVector:
    """h = g / c with g integral and c the least common denominator of all components."""

    vector: PolyVector

    @property
    def c(self) -> int:
        return self.vector.denominator()

    @property
    def numerators(self) -> PolyVector:
        return self.vector.scale(self.c)


@dataclass(frozen=True)
class EmptyRange:
    """No integer point lies in the range; ``modulus`` is a prime power with no admissible class."""

    c: int
    modulus: int

    def to_json(self) -> dict:
        return {"empty_range": True, "denominator": self.c, "modulus": self.modulus}


def integer_preimage_classes(g: PolyVector, q: int, cap: int = ENUMERATION_CAP) -> ResidueUnion:
    """All a mod q (a in Z^n, n = number of variables) with every g_j(a) = 0 mod q."""
    prime_power(q)
    if not g.vars:
        raise DomainError("need at least one variable")
    if g.denominator() != 1:
        raise DomainError("integer_preimage_classes needs integer coefficients")
    n = len(g.vars)
    if q ** n > cap:
        raise ResourceError(f"{q}^{n} residue tuples exceed the enumeration cap {cap}")
    fn = g.evaluator()
    reps = [a for a in itertools.product(range(q), repeat=n)
            if all(v % q == 0 for v in fn(a))]
    return ResidueUnion.make(q, reps, n)


def parametrize_integer_range(h: PolyVector | RationalVector, cap: int = ENUMERATION_CAP) -> ParamObject | EmptyRange:
    if isinstance(h, RationalVector):
        h = h.vector
    source = given(h)
    c = h.denominator()
    if c == 1:
        return ParamObject(h, Provenance("lemma2", {"c": 1, "factorization": [], "class_counts": [],
                                                    "source_vars": list(h.vars)}, (source,)))
    g = h.scale(c)
    parts = []
    fac = factorize(c)
    if not h.vars:
        # a non-integral rational constant
        p, e = fac[0]
        return EmptyRange(c, p**e)
    for p, e in fac:
        classes = integer_preimage_classes(g, p**e, cap)
        if not classes.reps:
            return EmptyRange(c, p**e)
        parts.append(classes)
    inner = param_residue_intersection(parts)
    # inner component i parametrizes the i-th variable of h
    assignment = dict(zip(h.vars, inner.vector.components))
    p_vec = PolyVector([comp.substitute(assignment) for comp in h.components], inner.vars)
    if not is_integer_valued(p_vec):
        raise IntegralityError("composition is not integer-valued")
    prov = Provenance("lemma2", {
        "c": c, "factorization": [[p, e] for p, e in fac],
        "class_counts": [len(u.reps) for u in parts], "source_vars": list(h.vars)}, (source, inner))
    return ParamObject(p_vec, prov)
