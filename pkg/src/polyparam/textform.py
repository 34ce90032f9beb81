"""Text grammar and JSON forms for polynomials and polynomial vectors.

Grammar (whitespace is insignificant)::

    poly   := term (("+"|"-") term)*      a leading sign is also accepted
    term   := coeff ("*" factor)* | factor ("*" factor)*
    factor := var ("^" nat)?
    coeff  := int ("/" posint)?
    var    := [a-z][0-9]+
"""
from __future__ import annotations

import json
from fractions import Fraction
from typing import Any

from .errors import ParseError
from .polycore import Polynomial, PolyVector, var_key


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def error(self, msg: str, pos: int | None = None):
        raise ParseError(msg, self.text, self.pos if pos is None else pos)

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self) -> str:
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def take(self, ch: str) -> bool:
        if self.peek() == ch:
            self.pos += 1
            return True
        return False

    def number(self) -> int:
        self.skip()
        start = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if start == self.pos:
            self.error("expected a number")
        return int(self.text[start:self.pos])

    def factor(self) -> tuple[str, int]:
        self.skip()
        start = self.pos
        if not (self.pos < len(self.text) and "a" <= self.text[self.pos] <= "z"):
            self.error("expected a variable")
        self.pos += 1
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        name = self.text[start:self.pos]
        if len(name) < 2:
            self.error(f"variable {name!r} needs a numeric index", start)
        exp = 1
        if self.take("^"):
            exp = self.number()
        return name, exp

    def term(self) -> tuple[Fraction, dict[str, int]]:
        coeff = Fraction(1)
        mono: dict[str, int] = {}
        if self.peek().isdigit():
            num = self.number()
            if self.take("/"):
                at = self.pos
                den = self.number()
                if den == 0:
                    self.error("zero denominator", at)
                coeff = Fraction(num, den)
            else:
                coeff = Fraction(num)
            if not self.take("*"):
                return coeff, mono
        while True:
            name, exp = self.factor()
            mono[name] = mono.get(name, 0) + exp
            if not self.take("*"):
                return coeff, mono

    def poly(self) -> Polynomial:
        terms: dict = {}
        sign = 1
        if self.take("-"):
            sign = -1
        else:
            self.take("+")
        while True:
            if self.peek() == "":
                self.error("unexpected end of input")
            c, mono = self.term()
            key = tuple(sorted(mono.items()))
            terms[key] = terms.get(key, 0) + sign * c
            ch = self.peek()
            if ch == "":
                break
            if ch == "+":
                sign = 1
            elif ch == "-":
                sign = -1
            else:
                self.error(f"unexpected character {ch!r}")
            self.pos += 1
        return Polynomial(terms)


def parse_poly(text: str) -> Polynomial:
    return _Parser(text).poly()


def parse_vector(text: str) -> PolyVector:
    """Components separated by ``,`` or ``;``; a JSON list of strings also works."""
    s = text.strip()
    if s.startswith("["):
        items = json.loads(s)
    else:
        items = [part for part in s.replace(";", ",").split(",")]
    polys = []
    offset = 0
    for item in items:
        try:
            polys.append(parse_poly(item))
        except ParseError as exc:
            if s.startswith("["):
                raise
            raise ParseError(exc.message, text, offset + exc.pos) from None
        offset += len(item) + 1
    return PolyVector(polys)


def _fmt_coeff(c) -> str:
    return str(c) if isinstance(c, int) else f"{c.numerator}/{c.denominator}"


def _mono_sort_key(mono):
    # descending total degree, then by exponents in canonical variable order
    return (-sum(e for _, e in mono), [(var_key(v), -e) for v, e in mono])


def poly_to_text(p: Polynomial) -> str:
    if not p.terms:
        return "0"
    parts = []
    for mono in sorted(p.terms, key=_mono_sort_key):
        c = p.terms[mono]
        neg = c < 0
        mag = -c if neg else c
        factors = [v if e == 1 else f"{v}^{e}" for v, e in mono]
        if not factors:
            body = _fmt_coeff(mag)
        elif mag == 1:
            body = "*".join(factors)
        else:
            body = "*".join([_fmt_coeff(mag)] + factors)
        parts.append(("-" if neg else "+", body))
    first_sign, first = parts[0]
    out = ("-" if first_sign == "-" else "") + first
    for sign, body in parts[1:]:
        out += sign + body
    return out


# -- JSON ----------------------------------------------------------------------


def poly_to_json(p: Polynomial) -> dict[str, Any]:
    exps = p.exponent_terms()
    order = sorted(exps, reverse=True)
    return {"vars": list(p.vars),
            "terms": [{"coeff": _fmt_coeff(exps[e]), "exps": list(e)} for e in order]}


def poly_from_json(obj) -> Polynomial:
    if isinstance(obj, str):
        return parse_poly(obj)
    return Polynomial.from_exponents(obj["vars"], {tuple(t["exps"]): Fraction(str(t["coeff"])) for t in obj["terms"]})


def vector_to_json(v: PolyVector) -> dict[str, Any]:
    return {"vars": list(v.vars),
            "components": [poly_to_json(c) for c in v.components],
            "text": [poly_to_text(c) for c in v.components]}


def vector_from_json(obj) -> PolyVector:
    if isinstance(obj, str):
        return parse_vector(obj)
    if isinstance(obj, list):
        return PolyVector([poly_from_json(c) for c in obj])
    return PolyVector([poly_from_json(c) for c in obj["components"]], obj.get("vars", ()))


def format_value(x):
    """JSON-safe rendering of an exact value: ints stay ints, fractions become strings."""
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
    return x
