import itertools
import random

import pytest

from polyparam.cofinite import (BoxSpec, CofiniteSet, add_value, add_value_exponent, base_interval_complement,
                                box_complement, choose_step_m, parametrize_cofinite, range_certificate,
                                step_m_rule, validate_certificates, validate_step_m)
from polyparam.errors import DomainError
from polyparam.oracle import BoxComplementDesc, CofiniteDesc, check_containment, check_coverage, find_witness
from polyparam.polycore import Polynomial, PolyVector


def _at(param, **values):
    args = {v: 0 for v in param.vars}
    args.update(values)
    return param.vector.evaluate(tuple(args[v] for v in param.vars))


def test_base_examples():
    assert _at(base_interval_complement(0)) == (1,)
    assert _at(base_interval_complement(2), x1=1, x5=1) == (-2,)
    assert _at(base_interval_complement(2), x5=2) == (-13,)


def test_base_trichotomy_symbolic():
    f = base_interval_complement(3).vector[0]
    s = sum(Polynomial.var(f"x{i}") ** 2 for i in range(1, 5))
    assert f.substitute({"x5": Polynomial.const(0)}) == s + 4
    assert f.substitute({"x5": Polynomial.const(1)}) == -(s + 1)
    assert f.substitute({"x5": Polynomial.const(-1)}) == -(s + 1)


def test_base_trichotomy_grid():
    n = 3
    g = base_interval_complement(n)
    fn = g.vector.evaluator()
    for a in itertools.product(range(-3, 4), repeat=5):
        (v,) = fn(a)
        x5 = a[4]
        if x5 == 0:
            assert v >= n + 1
        else:
            assert v <= -1


@pytest.mark.parametrize("n, m", [(0, 1), (1, 1), (3, 1), (4, 2), (100, 4)])
def test_choose_step_m(n, m):
    assert choose_step_m(n) == m
    assert validate_step_m(n, m, z_max=20, xy_max=200)


def test_step_m_is_minimal():
    for n in range(1, 300):
        m = step_m_rule(n)
        if m > 1:
            # z = 2, y = 0 violates the second inequality with m - 1
            assert not (2 ** (2 * (m - 1)) > n)
            assert not validate_step_m(n, m - 1, z_max=3, xy_max=3)


def test_dominance_sampled():
    rng = random.Random(3)
    for n in (0, 1, 5, 40):
        m = choose_step_m(n)
        for _ in range(2000):
            z = rng.choice([-1, 1]) * rng.randint(2, 50)
            x, y = rng.randint(-1000, 1000), rng.randint(-1000, 1000)
            assert abs((1 + x * x) * (1 - z * z) ** (2 * m)) > abs(z * z * x) + n
            assert abs((1 + y * y) * z ** (2 * m)) > abs((1 - z * z) * y) + n


def test_box_specializations_exact():
    for bounds in ([1, 1], [2, 0], [1, 2, 1]):
        b = box_complement(bounds)
        pr = b.provenance.params
        inner, last = b.provenance.children
        f_inner = inner.vector.rename(pr["renamings"][0])
        f_last = last.vector.rename(pr["renamings"][1])
        zero = Polynomial.const(0)
        at_origin = {pr["z_var"]: zero, **{x: zero for x in pr["x_vars"]}}
        got = b.vector.substitute(at_origin)
        assert list(got.components) == list(f_inner.components) + [Polynomial.var(pr["y_var"])]
        for zval in (1, -1):
            got = b.vector.substitute({pr["z_var"]: Polynomial.const(zval), pr["y_var"]: zero})
            expected = [Polynomial.var(x) for x in pr["x_vars"]] + [f_last[0]]
            assert list(got.components) == expected


def test_box_complement_examples():
    b = box_complement([1, 1])
    pr = b.provenance.params
    assert len(b.vars) == 13
    last_sel = pr["renamings"][1]["x5"]
    inner_x1 = pr["renamings"][0]["x1"]
    # z = 0: (1 + x^2) f1, y ; inner f1 at its (1,0,0,0,1) point is -2
    v = _at(b, **{pr["y_var"]: 7, inner_x1: 1, pr["renamings"][0]["x5"]: 1})
    assert v == (-2, 7)
    v = _at(b, **{pr["z_var"]: 1, pr["x_vars"][0]: 5, pr["renamings"][1]["x1"]: 1, last_sel: 1})
    assert v == (5, -2)
    assert box_complement([0]).provenance.tag == "base_interval"


def test_box_complement_range_k2_window():
    b = box_complement([1, 2])
    desc = BoxComplementDesc(BoxSpec((1, 2)))
    rep = check_coverage(b, desc, [[-4, 4], [-4, 5]])
    assert rep.passed and rep.attempted == 9 * 10 - 6 and rep.non_members == 6
    assert check_containment(b, desc, samples=3000, bound=50, seed=1).passed


def test_box_complement_k3():
    b = box_complement([1, 0, 1])
    desc = BoxComplementDesc(BoxSpec((1, 0, 1)))
    rep = check_coverage(b, desc, [[-2, 2]] * 3)
    assert rep.passed and rep.non_members == 4
    assert check_containment(b, desc, samples=1000, bound=20, seed=2).passed


@pytest.mark.parametrize("max_n, t", [(0, 1), (1, 2), (2, 2), (3, 2), (4, 3), (16, 4)])
def test_add_value_exponent(max_n, t):
    assert add_value_exponent(max_n) == t
    assert 2 ** (2 * t - 2) > max_n and not (t > 1 and 2 ** (2 * t - 4) > max_n)


def test_add_value_specializations():
    g = box_complement([2])
    h = add_value(g, (1,), [2])
    w = h.provenance.params["w_var"]
    assert h.vector.substitute({w: Polynomial.const(0)})[0] == Polynomial.const(1)
    assert h.vector.substitute({w: Polynomial.const(1)})[0] == g.vector[0]
    with pytest.raises(DomainError):
        add_value(g, (3,), [2])


def test_add_value_dominance_sampled():
    box = BoxSpec((2, 3))
    g = box_complement(box.bounds)
    for c in [(1, 0), (2, 3)]:
        g = add_value(g, c, box)
    h = add_value(g, (2, 2), box)
    t = h.provenance.params["t"]
    rng = random.Random(8)
    fn = g.vector.evaluator()
    for _ in range(500):
        v = fn(tuple(rng.randint(-3, 3) for _ in g.vars))
        for w in (2, -2, 3, 7):
            img = tuple(w ** (2 * t) * vi + (1 - w * w) * ci for vi, ci in zip(v, (2, 2)))
            assert not box.contains(img)


def test_zero_must_be_last():
    box = BoxSpec((1,))
    g = add_value(box_complement(box.bounds), (0,), box)
    assert range_certificate(g)["zero_free"] is False
    with pytest.raises(DomainError):
        add_value(g, (1,), box)


def test_cofinite_empty():
    p = parametrize_cofinite(CofiniteSet.make(3, []))
    assert p.vector == PolyVector([Polynomial.var(v) for v in ("x1", "x2", "x3")])


def test_cofinite_single_point():
    p = parametrize_cofinite(CofiniteSet.make(1, [5]))
    assert p.provenance.params["shift"] == [5] and p.provenance.params["added"] == []
    base = base_interval_complement(0).vector[0]
    assert p.vector[0] == base + 5
    rep = check_coverage(p, CofiniteDesc(1, frozenset({(5,)})), [-20, 30])
    assert rep.passed and rep.attempted == 50


def test_cofinite_two_points():
    p = parametrize_cofinite(CofiniteSet.make(1, [0, 2]))
    assert p.provenance.params["added"] == [[1]]
    chain = validate_certificates(p)
    assert chain == [{"c": [1], "t": 2, "zero_free_after": True}]
    desc = CofiniteDesc(1, frozenset({(0,), (2,)}))
    rep = check_coverage(p, desc, [-50, 50])
    assert rep.passed and rep.attempted == 99
    assert check_containment(p, desc, samples=20000, bound=100).passed


def test_cofinite_origin_added_last():
    p = parametrize_cofinite(CofiniteSet.make(2, [(3, 5), (4, 4)]))
    added = p.provenance.params["added"]
    assert added[-1] == [0, 0] and len(added) == 2
    chain = validate_certificates(p)
    assert [r["zero_free_after"] for r in chain] == [True, False]
    desc = CofiniteDesc(2, frozenset({(3, 5), (4, 4)}))
    rep = check_coverage(p, desc, [[1, 6], [2, 7]])
    assert rep.passed and rep.non_members == 2
    assert check_containment(p, desc, samples=3000, bound=3, seed=4).passed


def test_cofinite_witness_for_added_value():
    p = parametrize_cofinite(CofiniteSet.make(1, [0, 2]))
    args = dict(zip(p.vars, find_witness(p, 1)))
    assert args[p.provenance.children[0].provenance.params["w_var"]] == 0
