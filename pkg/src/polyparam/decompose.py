"""Split an integer-valued vector into finitely many integer-coefficient vectors.

Substituting x_i -> c_i*y_i + j_i with c_i = lcm(1..d_i) turns every binomial
polynomial C(x_i, n), n <= d_i, into an integer polynomial in y_i; the shifts
0 <= j_i < c_i partition Z, so the images together cover the original image.
"""
from __future__ import annotations

import itertools

from .errors import DomainError, IntegralityError
from .intval import is_integer_valued
from .ntheory import lcm_upto
from .param import ParamObject, Provenance, given
from .polycore import Polynomial, PolyVector, make_var


def _as_vector(g) -> PolyVector:
    if isinstance(g, ParamObject):
        return g.vector
    if isinstance(g, Polynomial):
        return PolyVector([g])
    return g


def shift_moduli(g) -> tuple[int, ...]:
    g = _as_vector(g)
    if not is_integer_valued(g):
        raise DomainError("vector is not integer-valued")
    return tuple(lcm_upto(g.degree(v)) for v in g.vars)


def decompose_to_integer_vectors(g) -> list[ParamObject]:
    g = _as_vector(g)
    moduli = shift_moduli(g)
    new_vars = [make_var("y", i + 1) for i in range(len(g.vars))]
    source = given(g)
    out = []
    for offsets in itertools.product(*(range(c) for c in moduli)):
        assignment = {x: Polynomial.var(y) * c + j
                      for x, y, c, j in zip(g.vars, new_vars, moduli, offsets)}
        vec = PolyVector([comp.substitute(assignment) for comp in g.components], new_vars)
        if vec.denominator() != 1:
            raise IntegralityError(f"shift {offsets} produced non-integer coefficients")
        prov = Provenance("affine_shift", {"moduli": list(moduli), "offsets": list(offsets),
                                           "source_vars": list(g.vars), "target_vars": new_vars}, (source,))
        out.append(ParamObject(vec, prov))
    return out
