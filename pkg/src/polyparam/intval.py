"""The binomial basis of Int(Z^n) and the exact integer-valuedness test.

Every polynomial in Q[x1..xn] has a unique expansion

    sum_nu a_nu * C(x1, nu_1) * ... * C(xn, nu_n)

and it maps Z^n into Z exactly when every a_nu is an integer. The coefficients
are the iterated forward differences of the polynomial at the origin.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Mapping, Sequence

from .errors import DimensionError
from .polycore import Coeff, Polynomial, PolyVector, _norm, sort_vars


@dataclass(frozen=True)
class BinomialForm:
    vars: tuple[str, ...]
    coeffs: Mapping[tuple[int, ...], Coeff] = field(default_factory=dict)

    def __post_init__(self):
        vars = tuple(self.vars)
        canon = sort_vars(vars)
        if len(canon) != len(vars):
            raise DimensionError(f"duplicate variables in {vars}")
        coeffs = self.coeffs
        if canon != vars:
            # canonical variable order so that equal forms compare equal
            order = [vars.index(v) for v in canon]
            coeffs = {tuple(idx[i] for i in order): c for idx, c in coeffs.items()}
            vars = canon
        clean = {}
        for idx, c in coeffs.items():
            if len(idx) != len(vars):
                raise DimensionError(f"multi-index {idx} does not match {len(vars)} variables")
            c = _norm(c)
            if c != 0:
                clean[tuple(idx)] = c
        object.__setattr__(self, "vars", vars)
        object.__setattr__(self, "coeffs", clean)

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.coeffs.values())

    def evaluate(self, point: Sequence[int]) -> Coeff:
        total = 0
        for idx, c in self.coeffs.items():
            t = c
            for x, n in zip(point, idx):
                t *= binom_int(x, n)
            total += t
        return _norm(total) if isinstance(total, Fraction) else total

    def to_json(self) -> dict[str, Any]:
        return {"vars": list(self.vars),
                "coeffs": [{"index": list(i), "value": str(self.coeffs[i])} for i in sorted(self.coeffs)]}

    @classmethod
    def from_json(cls, obj) -> "BinomialForm":
        return cls(tuple(obj["vars"]), {tuple(e["index"]): Fraction(str(e["value"])) for e in obj["coeffs"]})


def binom_int(x: int, n: int) -> int:
    """C(x, n) for any integer x, including negative x."""
    if n < 0:
        return 0
    num = 1
    for j in range(n):
        num *= x - j
    return num // math.factorial(n)


@lru_cache(maxsize=None)
def binomial_poly(var: str, n: int) -> Polynomial:
    """C(var, n) = var (var-1) ... (var-n+1) / n! in monomial form."""
    x = Polynomial.var(var)
    p = Polynomial.const(1, (var,))
    for j in range(n):
        p = p * (x - j)
    return p / math.factorial(n)


def _difference_table(values: dict, degs: Sequence[int]) -> dict:
    """Replace grid values by iterated forward differences at the origin, axis by axis."""
    n = len(degs)
    table = dict(values)
    for axis in range(n):
        d = degs[axis]
        others = [range(degs[i] + 1) if i != axis else (0,) for i in range(n)]
        for base in itertools.product(*others):
            line = []
            for j in range(d + 1):
                idx = list(base)
                idx[axis] = j
                line.append(table[tuple(idx)])
            # line[j] := (Delta^j f)(0)
            for level in range(1, d + 1):
                for j in range(d, level - 1, -1):
                    line[j] = line[j] - line[j - 1]
            for j in range(d + 1):
                idx = list(base)
                idx[axis] = j
                table[tuple(idx)] = line[j]
    return table


def _scaled_grid(p: Polynomial) -> tuple[list[int], int, dict]:
    """Degrees, common denominator D and the integer values of D*p on the degree box."""
    degs = [p.degree(v) for v in p.vars]
    den = p.denominator()
    fn = PolyVector([p.scale(den)], p.vars).evaluator()
    values = {pt: fn(pt)[0] for pt in itertools.product(*(range(d + 1) for d in degs))}
    return degs, den, values


def grid_values(p: Polynomial) -> tuple[list[int], dict]:
    degs, den, values = _scaled_grid(p)
    return degs, {pt: _norm(Fraction(v, den)) for pt, v in values.items()}


def to_binomial_form(p: Polynomial) -> BinomialForm:
    degs, den, values = _scaled_grid(p)
    table = _difference_table(values, degs)
    return BinomialForm(p.vars, {idx: Fraction(v, den) for idx, v in table.items()})


def from_binomial_form(b: BinomialForm) -> Polynomial:
    acc: dict = {}
    for idx, c in b.coeffs.items():
        term = Polynomial.const(c)
        for v, n in zip(b.vars, idx):
            if n:
                term = term * binomial_poly(v, n)
        for m, tc in term.terms.items():
            acc[m] = acc.get(m, 0) + tc
    return Polynomial(acc, b.vars)


def is_integer_valued(p: Polynomial | PolyVector) -> bool:
    if isinstance(p, PolyVector):
        return all(is_integer_valued(c) for c in p.components)
    if p.is_integral():
        return True
    return to_binomial_form(p).is_integral()


def find_non_integer_point(p: Polynomial) -> tuple[int, ...] | None:
    """A point of the degree box {0..d1} x ... x {0..dn} where p is not an integer.

    Returns None exactly when p is integer-valued: integer values on that box
    force integer forward differences, hence integer binomial coefficients.
    """
    degs, den, values = _scaled_grid(p)
    for pt in sorted(values):
        if values[pt] % den:
            return pt
    return None
