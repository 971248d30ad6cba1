from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from lndkit.algebra import (LinearSpan, Polynomial, RationalMatrix, lex_leading_monomial, monomials_up_to,
                            nullspace, partial_derivative, poly_arith, rank, variables)
from lndkit.errors import StructuralError

x, y, z = variables(3)


def polys(nvars=3, max_deg=3):
    term = st.tuples(st.tuples(*[st.integers(0, max_deg)] * nvars),
                     st.fractions(min_value=-5, max_value=5, max_denominator=4))
    return st.lists(term, max_size=5).map(lambda ts: Polynomial(nvars, dict(ts)))


def to_sympy(p, syms):
    return sum((sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
                for e, c in p.terms.items()), sympy.Integer(0))


def test_spec_examples():
    assert poly_arith("add", x + 1, x - 1) == 2 * x
    assert poly_arith("mul", x + y, x - y) == x ** 2 - y ** 2
    assert lex_leading_monomial(2 * x * z - y ** 2) == (1, 0, 1)
    assert lex_leading_monomial(Polynomial.zero(3)) is None
    assert partial_derivative(2 * x * z - y ** 2, 1) == -2 * y


def test_lex_prefers_later_variables():
    # x < y < z, so any power of x is below y
    assert lex_leading_monomial(x ** 5 + y) == (0, 1, 0)
    assert lex_leading_monomial(x ** 5 + y, precedence=[2, 1, 0]) == (5, 0, 0)


def test_printing():
    assert str(2 * x * z - y ** 2) == "2*x*z - y^2"
    assert str(x.scale(Fraction(3, 2))) == "3/2*x"
    assert str(-(x + 1)) == "-x - 1"
    assert str(Polynomial.zero(2)) == "0"


def test_mismatched_rings():
    with pytest.raises(StructuralError):
        x + Polynomial.variable(2, 0)


@given(polys(), polys(), polys())
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert (p * q) * r == p * (q * r)
    assert p * (q + r) == p * q + p * r
    assert p - p == 0


@given(polys(), polys())
def test_product_against_sympy(p, q):
    syms = sympy.symbols("x y z")
    assert sympy.expand(to_sympy(p * q, syms) - to_sympy(p, syms) * to_sympy(q, syms)) == 0


@given(polys(), polys())
def test_leading_monomial_multiplicative(p, q):
    if p.is_zero() or q.is_zero():
        return
    lp, lq = lex_leading_monomial(p), lex_leading_monomial(q)
    assert lex_leading_monomial(p * q) == tuple(a + b for a, b in zip(lp, lq))


@given(polys(), polys(), st.integers(0, 2))
def test_derivative_product_rule(p, q, i):
    assert (p * q).derivative(i) == p.derivative(i) * q + p * q.derivative(i)


@given(polys(), polys(), polys())
def test_substitution_is_a_homomorphism(p, q, a):
    images = [a, x + 1, z]
    assert (p * q).substitute(images) == p.substitute(images) * q.substitute(images)
    assert (p + q).substitute(images) == p.substitute(images) + q.substitute(images)


def test_monomials_up_to_count():
    # C(n + d, d)
    assert len(monomials_up_to(3, 2)) == 10
    assert len(monomials_up_to(4, 3)) == 35


def test_nullspace_example():
    m = RationalMatrix.from_rows([[1, 2], [2, 4]])
    assert nullspace(m) == [(Fraction(-2), Fraction(1))]
    assert rank(m) == 1


@given(st.lists(st.lists(st.integers(-3, 3), min_size=4, max_size=4), min_size=1, max_size=4))
def test_rank_nullity(rows):
    m = RationalMatrix.from_rows(rows, 4)
    ns = nullspace(m)
    assert rank(m) + len(ns) == 4
    assert rank(m) == sympy.Matrix(rows).rank()
    for v in ns:
        assert all(c == 0 for c in m @ v)


def test_linear_span_express():
    span = LinearSpan()
    assert span.add({0: 1, 1: 1})
    assert span.add({1: 2})
    assert not span.add({0: 2, 1: 5})
    combo = span.express({0: 2, 1: 5})
    assert combo == {0: 2, 1: Fraction(3, 2)}
    assert span.express({2: 1}) is None


def test_more_examples():
    assert poly_arith("add", x, -x) == 0
    assert poly_arith("pow", x + 1, 0) == 1
    assert lex_leading_monomial(x ** 2 * z + y ** 3) == (2, 0, 1)
    assert lex_leading_monomial(x + 1) == (1, 0, 0)
    assert partial_derivative(Polynomial.constant(3, 4), 0) == 0
    assert partial_derivative(2 * x * z - y ** 2, 2) == 2 * x
    with pytest.raises(StructuralError):
        partial_derivative(x, 3)
    eye = RationalMatrix.from_rows([[1, 0, 0], [0, 1, 0], [0, 0, 1]])
    assert rank(eye) == 3 and nullspace(eye) == []
    zero = RationalMatrix.from_rows([[0, 0], [0, 0]])
    assert rank(zero) == 0 and len(nullspace(zero)) == 2
