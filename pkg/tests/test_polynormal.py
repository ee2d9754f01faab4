import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from polycirc.circuit import ADD, COMPARE, COPY, IDENTITY, MUL, NEGATE, TWIST, Par, Seq, const, seq_all
from polycirc.errors import IndexOutOfRange, NonPolynomialGenerator, ShapeMismatch, UnsupportedGenerator
from polycirc.evaluate import all_inputs, evaluate, evaluate_batch, extensionally_equal
from polycirc.polynormal import (
    PolyMap,
    Polynomial,
    formal_partial,
    from_poly,
    jt_apply,
    poly_equal,
    to_poly,
)
from polycirc.rdiff import reverse
from polycirc.semiring import make_semiring

from conftest import circuits, finite_semirings

Z2 = make_semiring("zmod:2")
Z3 = make_semiring("zmod:3")
Z5 = make_semiring("zmod:5")


def test_to_poly():
    assert to_poly(Z2, Seq(COPY, MUL)).polys[0].terms == {(2,): 1}
    assert to_poly(Z3, Seq(Par(const(2), const(2)), ADD)).polys[0].terms == {(): 1}
    assert to_poly(Z3, NEGATE).polys[0].terms == {(1,): 2}
    with pytest.raises(NonPolynomialGenerator):
        to_poly(Z3, COMPARE)
    with pytest.raises(UnsupportedGenerator):
        to_poly(make_semiring("sat:3"), NEGATE)


def test_formal_partial():
    square = to_poly(Z2, Seq(COPY, MUL)).polys[0]
    assert formal_partial(square, 0).terms == {}
    product = to_poly(Z3, MUL).polys[0]
    assert formal_partial(product, 0).terms == {(0, 1): 1}
    assert formal_partial(Polynomial.constant(Z3, 1, 2), 0).terms == {}
    with pytest.raises(IndexOutOfRange):
        formal_partial(product, 2)


def test_jt_apply():
    assert jt_apply(to_poly(Z5, MUL), (2, 3), (1,)) == (3, 2)
    assert jt_apply(to_poly(Z5, MUL), (2, 3), (0,)) == (0, 0)
    assert jt_apply(to_poly(Z5, ADD), (4, 1), (3,)) == (3, 3)
    with pytest.raises(ShapeMismatch):
        jt_apply(to_poly(Z5, ADD), (4,), (3,))


def test_jt_apply_with_large_natural_coefficient():
    nat = make_semiring("nat")
    c = Seq(Par(const(2**63), IDENTITY), MUL)
    assert formal_partial(to_poly(nat, c).polys[0], 0).terms == {(0,): 2**63}
    assert jt_apply(to_poly(nat, c), (5,), (1,)) == (2**63,)
    assert evaluate(nat, reverse(c), (5, 1)) == (2**63,)


def test_poly_equal_is_formal():
    square = to_poly(Z2, Seq(COPY, MUL))
    ident = to_poly(Z2, IDENTITY)
    assert not poly_equal(square, ident)
    assert extensionally_equal(Z2, Seq(COPY, MUL), IDENTITY)
    assert poly_equal(to_poly(Z3, Seq(COPY, MUL)), to_poly(Z3, seq_all([COPY, TWIST, MUL])))
    with pytest.raises(ShapeMismatch):
        poly_equal(square, to_poly(Z2, MUL))


def test_nat_normal_form_decides_equality():
    nat = make_semiring("nat")
    lhs = Seq(Par(IDENTITY, ADD), MUL)
    rhs = seq_all([Par(COPY, Par(IDENTITY, IDENTITY)), Par(IDENTITY, Par(TWIST, IDENTITY)), Par(MUL, MUL), ADD])
    assert poly_equal(to_poly(nat, lhs), to_poly(nat, rhs))
    assert not poly_equal(to_poly(nat, Seq(COPY, MUL)), to_poly(nat, Seq(COPY, ADD)))


def test_render():
    assert to_poly(Z2, Seq(COPY, MUL)).render() == "y0 = x0^2"
    pm = PolyMap(Z5, 2, [Polynomial(Z5, 2, {(1, 1): 2, (0, 0): 3}), Polynomial(Z5, 2)])
    assert pm.render() == "y0 = 2·x0·x1 + 3\ny1 = 0"


@settings(max_examples=60, deadline=None)
@given(finite_semirings.flatmap(lambda d: st.tuples(st.just(d), circuits(d, max_arity=3, max_gens=12))))
def test_normal_form_is_sound(pair):
    desc, c = pair
    rows = all_inputs(desc, c.arity)
    assert np.array_equal(to_poly(desc, c).evaluate_batch(rows), evaluate_batch(desc, c, rows))


@settings(max_examples=60, deadline=None)
@given(finite_semirings.flatmap(lambda d: st.tuples(st.just(d), circuits(d, max_arity=3, max_gens=12))))
def test_from_poly_inverts_to_poly(pair):
    desc, c = pair
    pm = to_poly(desc, c)
    back = from_poly(pm)
    assert back.shape == c.shape
    assert poly_equal(to_poly(desc, back), pm)


def polynomials(desc, arity=2):
    monomials = st.tuples(*[st.integers(0, 3)] * arity)
    return st.dictionaries(monomials, st.integers(0, desc.size - 1), max_size=4).map(
        lambda terms: Polynomial(desc, arity, terms)
    )


@given(st.data())
def test_leibniz_rule(data):
    desc = data.draw(finite_semirings)
    p = data.draw(polynomials(desc))
    q = data.draw(polynomials(desc))
    i = data.draw(st.integers(0, 1))
    assert formal_partial(p * q, i) == formal_partial(p, i) * q + p * formal_partial(q, i)
