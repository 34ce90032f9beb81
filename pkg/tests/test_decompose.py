import itertools
import random

import pytest

from polyparam.decompose import decompose_to_integer_vectors, shift_moduli
from polyparam.errors import DomainError
from polyparam.intval import binom_int, binomial_poly
from polyparam.polycore import Polynomial, PolyVector
from polyparam.textform import parse_vector

x1, x2, y1 = (Polynomial.var(v) for v in ("x1", "x2", "y1"))
C2 = binomial_poly("x1", 2)


def test_shift_moduli_examples():
    assert shift_moduli(PolyVector([C2])) == (2,)
    assert shift_moduli(PolyVector([x1])) == (1,)
    assert shift_moduli(PolyVector([binomial_poly("x1", 3) * x2])) == (6, 1)
    with pytest.raises(DomainError):
        shift_moduli(PolyVector([x1 / 2]))


def test_triangular_decomposition():
    parts = decompose_to_integer_vectors(PolyVector([C2]))
    assert [p.vector[0] for p in parts] == [2 * y1**2 - y1, 2 * y1**2 + y1]
    assert all(p.vector.denominator() == 1 for p in parts)
    union = set()
    for p in parts:
        union |= {p.vector.evaluate((y,))[0] for y in range(-20, 21)}
    tri = {binom_int(a, 2) for a in range(-40, 42)}
    window = range(0, 211)
    assert union & set(window) == tri & set(window)


def test_identity_decomposition():
    parts = decompose_to_integer_vectors(PolyVector([x1]))
    assert len(parts) == 1 and parts[0].vector == PolyVector([y1])


def test_planar_decomposition():
    parts = decompose_to_integer_vectors(PolyVector([C2, x1]))
    assert [p.vector for p in parts] == [PolyVector([2 * y1**2 - y1, 2 * y1]),
                                         PolyVector([2 * y1**2 + y1, 2 * y1 + 1])]
    union = set()
    for p in parts:
        union |= {p.vector.evaluate((y,)) for y in range(-10, 11)}
    truth = {(binom_int(a, 2), a) for a in range(-20, 22)}
    assert union == truth


def test_partition_reconstruction():
    g = parse_vector("1/6*x1^3 - 1/6*x1 + 1/2*x1*x2^2 - 1/2*x1*x2; 1/2*x2^2 + 1/2*x2")
    parts = decompose_to_integer_vectors(g)
    moduli = parts[0].provenance.params["moduli"]
    assert tuple(moduli) == (6, 2)
    by_offset = {tuple(p.provenance.params["offsets"]): p for p in parts}
    assert list(by_offset) == sorted(by_offset)  # lexicographic output order
    rng = random.Random(11)
    for _ in range(300):
        a = tuple(rng.randint(-10**4, 10**4) for _ in g.vars)
        j = tuple(v % c for v, c in zip(a, moduli))
        y = tuple(v // c for v, c in zip(a, moduli))
        assert by_offset[j].vector.evaluate(y) == g.evaluate(a)


def test_union_equals_image_on_window():
    g = parse_vector("1/2*x1^2 - 1/2*x1 + x2; 1/2*x2^2 - 1/2*x2")
    parts = decompose_to_integer_vectors(g)
    W = set(itertools.product(range(-10, 11), repeat=2))
    image = {g.evaluate(a) for a in itertools.product(range(-25, 26), repeat=2)} & W
    union = set()
    for p in parts:
        union |= {p.vector.evaluate(y) for y in itertools.product(range(-13, 14), repeat=2)}
    assert union & W == image
