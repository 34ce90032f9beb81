"""Exact sparse multivariate polynomials over Q.

A :class:`Polynomial` keeps a declared, canonically ordered variable list and
a map from sparse monomials to nonzero coefficients. Coefficients are Python
ints when integral and :class:`fractions.Fraction` otherwise, so integer
polynomials never pay for rational arithmetic.
"""
from __future__ import annotations

import itertools
import math
import re
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Iterable, Mapping, Sequence, Union

from .errors import DimensionError, DomainError, VariableError

Coeff = Union[int, Fraction]
# sparse monomial: ((var, exp), ...) with exp > 0, sorted by var_key
Mono = tuple

VAR_RE = re.compile(r"[a-z][0-9]+\Z")


@lru_cache(maxsize=None)
def var_key(name: str) -> tuple:
    """Total order on variable names: tag, then numeric index."""
    if not isinstance(name, str) or not VAR_RE.match(name):
        raise VariableError(f"invalid variable name {name!r}")
    return name[0], int(name[1:]), name


def sort_vars(names: Iterable[str]) -> tuple[str, ...]:
    return tuple(sorted(set(names), key=var_key))


def make_var(tag: str, index: int) -> str:
    return f"{tag}{index}"


def _norm(c) -> Coeff:
    if isinstance(c, Fraction):
        return c.numerator if c.denominator == 1 else c
    if isinstance(c, int):
        return c
    if isinstance(c, str):
        return _norm(Fraction(c))
    raise TypeError(f"unsupported coefficient {c!r}")


def _mono_mul(a: Mono, b: Mono) -> Mono:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        d[v] = d.get(v, 0) + e
    return tuple(sorted(d.items(), key=lambda it: var_key(it[0])))


class Polynomial:
    """Immutable polynomial with exact rational coefficients."""

    __slots__ = ("vars", "terms", "_hash")

    def __init__(self, terms: Mapping[Mono, Coeff] | None = None, vars: Iterable[str] = ()):
        clean = {}
        used = set()
        for mono, c in (terms or {}).items():
            c = _norm(c)
            if c == 0:
                continue
            mono = tuple(sorted(((v, e) for v, e in mono if e), key=lambda it: var_key(it[0])))
            for v, e in mono:
                if not isinstance(e, int) or e < 0:
                    raise DomainError(f"bad exponent {e!r} for {v}")
                used.add(v)
            clean[mono] = _norm(clean.get(mono, 0) + c)
            if clean[mono] == 0:
                del clean[mono]
        self.terms: dict[Mono, Coeff] = clean
        self.vars: tuple[str, ...] = sort_vars(itertools.chain(vars, used))
        self._hash = None

    # -- constructors -----------------------------------------------------
    @classmethod
    def const(cls, c, vars: Iterable[str] = ()) -> "Polynomial":
        return cls({(): c}, vars)

    @classmethod
    def var(cls, name: str) -> "Polynomial":
        var_key(name)
        return cls({((name, 1),): 1})

    @classmethod
    def from_exponents(cls, vars: Sequence[str], terms: Mapping[tuple, Coeff]) -> "Polynomial":
        """Build from dense exponent vectors aligned with ``vars``."""
        vars = list(vars)
        if len(set(vars)) != len(vars):
            raise VariableError(f"duplicate variables in {vars}")
        out = {}
        for exps, c in terms.items():
            if len(exps) != len(vars):
                raise DimensionError(f"exponent vector {exps} does not match {len(vars)} variables")
            mono = tuple((v, e) for v, e in zip(vars, exps) if e)
            out[mono] = out.get(mono, 0) + _norm(c)
        return cls(out, vars)

    @staticmethod
    def coerce(x) -> "Polynomial":
        if isinstance(x, Polynomial):
            return x
        if isinstance(x, (int, Fraction)):
            return Polynomial.const(x)
        return NotImplemented

    # -- views ----------------------------------------------------------------
    def exponent_terms(self) -> dict[tuple, Coeff]:
        """Dense exponent vectors aligned with ``self.vars``."""
        idx = {v: i for i, v in enumerate(self.vars)}
        out = {}
        for mono, c in self.terms.items():
            exps = [0] * len(self.vars)
            for v, e in mono:
                exps[idx[v]] = e
            out[tuple(exps)] = c
        return out

    def degree(self, var: str) -> int:
        return max((e for mono in self.terms for v, e in mono if v == var), default=0)

    def total_degree(self) -> int:
        return max((sum(e for _, e in mono) for mono in self.terms), default=0)

    def used_vars(self) -> tuple[str, ...]:
        return sort_vars(v for mono in self.terms for v, _ in mono)

    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> Coeff:
        return self.terms.get((), 0)

    def with_vars(self, vars: Iterable[str]) -> "Polynomial":
        p = Polynomial.__new__(Polynomial)
        p.terms = self.terms
        p.vars = sort_vars(itertools.chain(self.vars, vars))
        p._hash = None
        return p

    # -- equality ------------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Polynomial.const(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(frozenset(self.terms.items()))
        return self._hash

    # -- ring operations -----------------------------------------------------
    def __add__(self, other):
        other = Polynomial.coerce(other)
        if other is NotImplemented:
            return other
        terms = dict(self.terms)
        for m, c in other.terms.items():
            terms[m] = terms.get(m, 0) + c
        return Polynomial(terms, self.vars + other.vars)

    __radd__ = __add__

    def __neg__(self):
        return Polynomial({m: -c for m, c in self.terms.items()}, self.vars)

    def __sub__(self, other):
        other = Polynomial.coerce(other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        if not isinstance(other, Polynomial):
            return NotImplemented
        terms: dict = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = _mono_mul(m1, m2)
                terms[m] = terms.get(m, 0) + c1 * c2
        return Polynomial(terms, self.vars + other.vars)

    __rmul__ = __mul__

    def scale(self, c) -> "Polynomial":
        c = _norm(c)
        return Polynomial({m: v * c for m, v in self.terms.items()}, self.vars)

    def __truediv__(self, c):
        if not isinstance(c, (int, Fraction)):
            return NotImplemented
        return self.scale(Fraction(1) / c)

    def __pow__(self, n: int):
        if not isinstance(n, int) or n < 0:
            raise DomainError(f"integer_power needs a non-negative int exponent, got {n!r}")
        result = Polynomial.const(1, self.vars)
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    # -- evaluation & substitution ------------------------------------------
    def evaluate(self, point: Sequence) -> Coeff:
        if len(point) != len(self.vars):
            raise DimensionError(f"point has {len(point)} coordinates, polynomial has {len(self.vars)} variables")
        return self.evaluate_at(dict(zip(self.vars, point)))

    def evaluate_at(self, values: Mapping[str, Coeff]) -> Coeff:
        total = 0
        for mono, c in self.terms.items():
            t = c
            for v, e in mono:
                t = t * values[v] ** e
            total += t
        return _norm(total) if isinstance(total, Fraction) else total

    def substitute(self, assignment: Mapping[str, "Polynomial"]) -> "Polynomial":
        """Simultaneous substitution; variables absent from ``assignment`` map to themselves."""
        for v in assignment:
            if v not in self.vars:
                raise VariableError(f"variable {v!r} does not occur in the polynomial's variable list")
        images = {v: Polynomial.coerce(assignment.get(v, Polynomial.var(v))) for v in self.vars}
        target_vars = sort_vars(itertools.chain.from_iterable(p.vars for p in images.values()))
        cache: dict = {}

        def power(v, e):
            key = (v, e)
            if key not in cache:
                cache[key] = images[v] if e == 1 else power(v, e - 1) * images[v]
            return cache[key]

        acc: dict = {}
        for mono, c in self.terms.items():
            t = Polynomial.const(c)
            for v, e in mono:
                t = t * power(v, e)
            for m, tc in t.terms.items():
                acc[m] = acc.get(m, 0) + tc
        return Polynomial(acc, target_vars)

    def rename(self, mapping: Mapping[str, str]) -> "Polynomial":
        """Injective relabelling of variables (cheaper than substitute)."""
        if len(set(mapping.values())) != len(mapping):
            raise VariableError("renaming is not injective")
        terms = {tuple((mapping.get(v, v), e) for v, e in mono): c for mono, c in self.terms.items()}
        return Polynomial(terms, [mapping.get(v, v) for v in self.vars])

    # -- coefficients ----------------------------------------------------------
    def denominator(self) -> int:
        """Least positive c with c*self in Z[vars]."""
        return math.lcm(1, *(c.denominator for c in self.terms.values() if isinstance(c, Fraction)))

    def is_integral(self) -> bool:
        return all(isinstance(c, int) for c in self.terms.values())

    def __str__(self):
        from .textform import poly_to_text
        return poly_to_text(self)

    def __repr__(self):
        return f"Polynomial({str(self)!r}, vars={list(self.vars)})"


def denominator(p: Polynomial) -> int:
    return p.denominator()


def evaluate(p: Polynomial, point: Sequence) -> Coeff:
    return p.evaluate(point)


def substitute(p: Polynomial, assignment: Mapping[str, Polynomial]) -> Polynomial:
    return p.substitute(assignment)


class PolyVector:
    """A k-tuple of polynomials over one shared variable list."""

    __slots__ = ("components", "vars", "_fn")

    def __init__(self, components: Iterable[Polynomial], vars: Iterable[str] = ()):
        comps = [Polynomial.coerce(c) for c in components]
        if not comps:
            raise DimensionError("a PolyVector needs at least one component")
        self.vars = sort_vars(itertools.chain(vars, *(c.vars for c in comps)))
        self.components: tuple[Polynomial, ...] = tuple(c.with_vars(self.vars) for c in comps)
        self._fn = None

    @property
    def k(self) -> int:
        return len(self.components)

    def __len__(self):
        return len(self.components)

    def __iter__(self):
        return iter(self.components)

    def __getitem__(self, i):
        return self.components[i]

    def __eq__(self, other):
        if not isinstance(other, PolyVector):
            return NotImplemented
        return self.vars == other.vars and self.components == other.components

    def __hash__(self):
        return hash((self.vars, self.components))

    def __repr__(self):
        return f"PolyVector({[str(c) for c in self.components]}, vars={list(self.vars)})"

    def evaluate(self, point: Sequence) -> tuple:
        if len(point) != len(self.vars):
            raise DimensionError(f"point has {len(point)} coordinates, vector has {len(self.vars)} variables")
        values = dict(zip(self.vars, point))
        return tuple(c.evaluate_at(values) for c in self.components)

    def evaluator(self) -> Callable[[Sequence], tuple]:
        """Compiled fast path for repeated evaluation; agrees with :meth:`evaluate`."""
        if self._fn is None:
            self._fn = compile_vector(self.vars, self.components)
        return self._fn

    def substitute(self, assignment: Mapping[str, Polynomial]) -> "PolyVector":
        return PolyVector([c.substitute(assignment) for c in self.components])

    def rename(self, mapping: Mapping[str, str]) -> "PolyVector":
        return PolyVector([c.rename(mapping) for c in self.components],
                          [mapping.get(v, v) for v in self.vars])

    def denominator(self) -> int:
        return math.lcm(*(c.denominator() for c in self.components))

    def degree(self, var: str) -> int:
        return max(c.degree(var) for c in self.components)

    def total_degree(self) -> int:
        return max(c.total_degree() for c in self.components)

    def n_terms(self) -> int:
        return sum(len(c.terms) for c in self.components)

    def __add__(self, other: "PolyVector") -> "PolyVector":
        if len(other) != len(self):
            raise DimensionError("vector lengths differ")
        return PolyVector([a + b for a, b in zip(self, other)])

    def scale(self, c) -> "PolyVector":
        return PolyVector([p.scale(c) for p in self.components], self.vars)


def identity_vector(vars: Sequence[str]) -> PolyVector:
    return PolyVector([Polynomial.var(v) for v in vars], vars)


# ---------------------------------------------------------------------------
# compiled evaluation: multivariate Horner scheme emitted as flat statements


def compile_vector(vars: Sequence[str], components: Sequence[Polynomial]) -> Callable[[Sequence], tuple]:
    index = {v: i for i, v in enumerate(vars)}
    consts: list = []
    lines: list[str] = []
    counter = itertools.count()

    def lit(c) -> str:
        if isinstance(c, int):
            return f"({c})"
        consts.append(c)
        return f"K[{len(consts) - 1}]"

    def pw(vi: int, e: int) -> str:
        return f"a{vi}" if e == 1 else f"a{vi}**{e}"

    def emit(terms: list) -> str:
        # terms: list of (mono as tuple of (var_index, exp) ascending, coeff)
        if not terms:
            return "0"
        heads = [m[0][0] for m, _ in terms if m]
        if not heads:
            return lit(sum(c for _, c in terms))
        v = min(heads)
        groups: dict[int, list] = {}
        for m, c in terms:
            if m and m[0][0] == v:
                groups.setdefault(m[0][1], []).append((m[1:], c))
            else:
                groups.setdefault(0, []).append((m, c))
        exps = sorted(groups, reverse=True)
        acc = emit(groups[exps[0]])
        for prev, e in zip(exps, exps[1:]):
            sub = emit(groups[e])
            name = f"t{next(counter)}"
            lines.append(f"    {name} = {acc}*{pw(v, prev - e)} + {sub}")
            acc = name
        if exps[-1] > 0:
            name = f"t{next(counter)}"
            lines.append(f"    {name} = {acc}*{pw(v, exps[-1])}")
            acc = name
        return acc

    outs = []
    for comp in components:
        terms = [(tuple(sorted((index[v], e) for v, e in mono)), c) for mono, c in comp.terms.items()]
        outs.append(emit(terms))
    n = len(vars)
    header = ["def _f(a):",
              f"    if len(a) != {n}: raise DimensionError('expected {n} arguments')"]
    if n:
        header.append("    " + ", ".join(f"a{i}" for i in range(n)) + ", = a")
    src = "\n".join(header + lines + [f"    return ({', '.join(outs)},)"])
    ns = {"K": consts, "DimensionError": DimensionError}
    exec(compile(src, "<polyvector>", "exec"), ns)
    raw = ns["_f"]
    if not consts:
        return raw

    def fn(a):
        return tuple(_norm(x) if isinstance(x, Fraction) else x for x in raw(a))
    return fn
