"""BV-algebra axioms: brute-force oracles on small models, failure paths."""

import itertools
import random
from fractions import Fraction

import pytest

from bvhy.bv import BVAlgebra, check_bv_axioms
from bvhy.graded import Bidegree, GradedMap, koszul_sign
from bvhy.models import build_torus_model, build_trivial_model

F = Fraction


def _item(report, name):
    for it in report.items:
        if it.name == name:
            return it
    raise KeyError(name)


def test_trivial_model_passes_all_axioms():
    report = check_bv_axioms(build_trivial_model(2).algebra)
    assert report.passed, [i.to_dict() for i in report.failures()]


def test_torus_model_passes_and_matches_bruteforce_associativity():
    a = build_torus_model(1, 1).algebra
    assert check_bv_axioms(a).passed
    # oracle: brute force over every basis triple, no pruning
    names = a.space.names
    for x, y, z in itertools.product(names, repeat=3):
        ex, ey, ez = (a.space.basis_element(n) for n in (x, y, z))
        assert a.multiply(a.multiply(ex, ey), ez) == \
            a.multiply(ex, a.multiply(ey, ez))


def test_bracket_matches_three_term_formula_term_by_term():
    a = build_torus_model(1, 1).algebra
    rng = random.Random(3)
    names = a.space.names
    for _ in range(50):
        x = a.space.basis_element(rng.choice(names))
        y = a.space.basis_element(rng.choice(names))
        # oracle: evaluate each of the three terms independently
        t1 = a.delta(a.multiply(x, y))
        t2 = a.multiply(a.delta(x), y)
        t3 = a.multiply(x, a.delta(y)).scale(koszul_sign(1, x.total_degree))
        assert a.bracket(x, y) == t1 - t2 - t3


def test_bracket_graded_symmetry_on_torus():
    a = build_torus_model(1, 1).algebra
    for x in a.space.names:
        for y in a.space.names:
            ex, ey = a.space.basis_element(x), a.space.basis_element(y)
            sign = koszul_sign(ex.total_degree, ey.total_degree)
            assert a.bracket(ex, ey) == a.bracket(ey, ex).scale(sign)


def test_bracket_vanishes_when_delta_is_zero():
    a = build_trivial_model(3).algebra
    for x in a.space.names[:4]:
        for y in a.space.names[:4]:
            assert a.bracket(a.space.basis_element(x),
                             a.space.basis_element(y)).is_zero


def test_order_three_operator_fails_the_leibniz_check():
    # exterior algebra on three generators with "delta" = contraction by
    # the top trivector: a third-order operator, so the order-2 item fails
    m = build_trivial_model(3)
    a = m.algebra
    bad_delta = GradedMap.zero(a.space, a.space, Bidegree(-1, 0))
    bad_delta.set_entry("x123", "x", F(1))
    broken = BVAlgebra(a.space, a.d, bad_delta, a.product, "x")
    report = check_bv_axioms(broken)
    assert not report.passed
    assert not _item(report, "delta has order <= 2 (bracket Leibniz)").passed
    assert not _item(report, "delta has shift (-1,0)").passed


def test_broken_associativity_detected():
    m = build_trivial_model(2)
    a = m.algebra
    product = {k: dict(v) for k, v in a.product.items()}
    product[("x1", "x2")] = {"x12": F(2)}   # breaks (x1 x2) x vs x1 (x2 x)
    broken = BVAlgebra(a.space, a.d, a.delta, product, "x")
    report = check_bv_axioms(broken)
    commut = _item(report, "graded commutativity")
    assoc = _item(report, "associativity")
    assert not (commut.passed and assoc.passed)


def test_broken_derivation_detected():
    m = build_torus_model(1, 1)
    a = m.algebra
    d = GradedMap(a.space, a.space, a.d.shift,
                  {s: dict(c) for s, c in a.d.entries.items()})
    src = "m1|f|v"          # mode 1, no form letters, no polyvector letters
    tgt = "m1|f1|v"
    assert d.entry(src, tgt) == F(1)
    d.set_entry(src, tgt, F(5))
    broken = BVAlgebra(a.space, d, a.delta, a.product, a.unit)
    report = check_bv_axioms(broken)
    assert not _item(report, "d is a derivation of the product").passed


def test_unit_must_sit_at_origin():
    m = build_trivial_model(1)
    with pytest.raises(ValueError):
        BVAlgebra(m.algebra.space, m.algebra.d, m.algebra.delta,
                  m.algebra.product, "x1")
    with pytest.raises(ValueError):
        BVAlgebra(m.algebra.space, m.algebra.d, m.algebra.delta,
                  m.algebra.product, "nope")


def test_symmetrized_product_and_odd_squares():
    a = build_trivial_model(2).algebra
    # mirror entries carry the Koszul sign of the two odd generators
    assert a.product[("x1", "x2")] == {"x12": F(1)}
    assert a.product[("x2", "x1")] == {"x12": F(-1)}
    assert ("x1", "x1") not in a.product
