import random
from fractions import Fraction

import pytest
import sympy

from lndkit.algebra import Polynomial, monomials_up_to, variables
from lndkit.derivations import Derivation, Inconclusive, apply, bracket, is_triangular
from lndkit.errors import CertificationInconsistency, UsageError
from lndkit.groebner import subalgebra, subalgebra_membership
from lndkit.lnd_sets import (DerivationSet, Overflow, SetNilpotencyCertificate, certify_lnd_set, derived_series,
                             descend_to_boundary, kernel_up_to_degree, lie_closure, select_kernel_cutset,
                             span_basis)
from lndkit.testing import random_triangular

x, y, z = variables(3)
dx, dy, dz = (Derivation.partial(3, i) for i in range(3))
X, Y = variables(2)
ddx, ddy = Derivation.partial(2, 0), Derivation.partial(2, 1)


def kernel_oracle(members, n, degree):
    """Kernel slice via sympy's nullspace on the coefficient matrix of all images."""
    monos = monomials_up_to(n, degree)
    images = [[apply(D, Polynomial.monomial(e)) for e in monos] for D in members]
    rows = sorted({(k, e) for k, col in enumerate(images) for img in col for e in img.terms})
    matrix = sympy.Matrix([[images[k][j].terms.get(e, 0) for j in range(len(monos))] for k, e in rows]) \
        if rows else sympy.zeros(1, len(monos))
    out = []
    for v in matrix.nullspace():
        out.append(Polynomial(n, {monos[j]: Fraction(int(c.p), int(c.q)) for j, c in enumerate(v) if c}))
    return out


def same_span(a, b, n):
    return span_basis(list(a), n) == span_basis(list(b), n)


def test_kernel_of_counterexample_matches_oracle():
    basis = kernel_up_to_degree([x * dy + y * dz], 2)
    assert len(basis) == 4
    assert same_span(basis, [Polynomial.constant(3, 1), x, x ** 2, 2 * x * z - y ** 2], 3)
    assert same_span(basis, kernel_oracle([x * dy + y * dz], 3, 2), 3)


@pytest.mark.parametrize("case", range(20))
def test_kernel_random_against_oracle(case):
    rng = random.Random(5000 + case)
    n = rng.randint(1, 3)
    members = [random_triangular(rng, n, 2, max_terms=2) for _ in range(rng.randint(1, 2))]
    got = kernel_up_to_degree(members, 2, n)
    assert same_span(got, kernel_oracle(members, n, 2), n)
    for f in got:
        assert all(apply(D, f).is_zero() for D in members)


@pytest.mark.parametrize("case", range(10))
def test_kernel_monotone(case):
    rng = random.Random(5100 + case)
    n = 3
    S = [random_triangular(rng, n, 2, max_terms=2) for _ in range(3)]
    dims = [len(kernel_up_to_degree(S[:k], 2, n)) for k in range(4)]
    assert dims == sorted(dims, reverse=True)
    low = kernel_up_to_degree(S, 1, n)
    high = kernel_up_to_degree(S, 2, n)
    assert same_span(low + high, high, n)


def test_cutsets():
    assert select_kernel_cutset([dz, x * dz, x ** 2 * dz], 2) == [dz]
    assert select_kernel_cutset([ddx, ddy], 3) == [ddx, ddy]


@pytest.mark.parametrize("case", range(10))
def test_cutset_size_bounded(case):
    rng = random.Random(5200 + case)
    n = rng.randint(1, 3)
    S = [random_triangular(rng, n, 2, max_terms=2) for _ in range(5)]
    cut = select_kernel_cutset(S, 2, n)
    assert len(cut) <= n
    assert same_span(kernel_up_to_degree(cut, 2, n), kernel_up_to_degree(S, 2, n), n)


def test_set_certification():
    cert = certify_lnd_set([ddx, X * ddy])
    assert isinstance(cert, SetNilpotencyCertificate)
    assert cert.verify(DerivationSet([ddx, X * ddy]))
    assert isinstance(certify_lnd_set([ddx, X * ddy, Y * ddx], depth_bound=10), Inconclusive)


@pytest.mark.parametrize("case", range(15))
def test_triangular_sets_certify(case):
    rng = random.Random(5300 + case)
    n = rng.randint(1, 3)
    S = [random_triangular(rng, n, 2, max_terms=2) for _ in range(3)]
    cert = certify_lnd_set(S, nvars=n)
    assert isinstance(cert, SetNilpotencyCertificate)
    assert cert.verify(DerivationSet(S, n))


def test_descent():
    E = -2 * Y * ddx + ddy
    trace = []
    assert descend_to_boundary([ddx, E], subalgebra([], 2), X, trace=trace) == -2 * Y
    assert trace == [X, -2 * Y]
    with pytest.raises(UsageError):
        descend_to_boundary([ddx], subalgebra([X], 2), X)
    with pytest.raises(CertificationInconsistency):
        descend_to_boundary([Derivation([Polynomial.zero(2), Y])], subalgebra([], 2), Y, max_steps=5)


def test_descent_lands_on_boundary():
    rng = random.Random(5400)
    for _ in range(10):
        S = [random_triangular(rng, 3, 2, max_terms=2) for _ in range(2)]
        sub = subalgebra([x], 3)
        v = z ** 2 + y
        b = descend_to_boundary(S, sub, v)
        assert subalgebra_membership(b, sub) is None
        for D in S:
            assert subalgebra_membership(apply(D, b), sub) is not None


def test_lie_closure_and_series():
    span = lie_closure([ddx, X ** 2 * ddy], 2, 10)
    assert span.basis == (ddx, X ** 2 * ddy, 2 * X * ddy, 2 * ddy)
    assert span.verify()
    series = derived_series(lie_closure([ddx, ddy, X * ddy, X ** 2 * ddy], 2, 10))
    assert series.dimensions == (4, 2, 0)
    assert series.solvability_degree == 2
    assert isinstance(lie_closure([X * ddy, Y * ddx], 1, 2), Overflow)
    sl2 = derived_series(lie_closure([X * ddy, Y * ddx], 1, 5))
    assert sl2.dimensions == (3, 3) and not sl2.solvable


def test_n3_family():
    span = lie_closure([dx, dy, dz, x * dy, x * dz, y * dz, x * y * dz], 2, 20)
    assert span.dimension == 8
    series = derived_series(span)
    assert series.dimensions == (8, 5, 1, 0)
    assert series.solvability_degree == 3


@pytest.mark.parametrize("case", range(10))
def test_closure_table_is_exact(case):
    rng = random.Random(5500 + case)
    gens = [random_triangular(rng, 2, 1, max_terms=2) for _ in range(2)]
    span = lie_closure(gens, 3, 30)
    if isinstance(span, Overflow):
        return
    assert span.verify()
    assert all(is_triangular(b) for b in span.basis)
    for i, a in enumerate(span.basis):
        for j, b in enumerate(span.basis):
            combo = sum((b_.__mul__(c) for b_, c in zip(span.basis, span.bracket_table[i][j]) if c),
                        Derivation.zero(2))
            assert combo == bracket(a, b)


def _derived_algebra(basis):
    out = []
    for i, a in enumerate(basis):
        for b in basis[i + 1:]:
            c = bracket(a, b)
            if not c.is_zero():
                out.append(c)
    return out


@pytest.mark.parametrize("case", range(10))
def test_adjoining_bracket_closed_members_keeps_certificate(case):
    # S = [A, A] for a closed triangular span A; every bracket of A lands in span S
    rng = random.Random(5600 + case)
    n = rng.randint(2, 3)
    span = lie_closure([random_triangular(rng, n, 1, max_terms=2) for _ in range(3)], 3, 40)
    if isinstance(span, Overflow):
        pytest.skip("closure overflowed its bounds")
    derived = _derived_algebra(list(span.basis))
    S = derived or [Derivation.zero(n)]
    assert isinstance(certify_lnd_set(S, nvars=n), SetNilpotencyCertificate)
    assert isinstance(certify_lnd_set(S + list(span.basis), nvars=n), SetNilpotencyCertificate)


def _rank_over_fraction_field(members, n, rng):
    point = [Fraction(rng.randint(-50, 50)) for _ in range(n)]
    rows = [[c.evaluate(point) for c in D.coefficients] for D in members]
    return sympy.Matrix(rows).rank() if rows else 0


@pytest.mark.parametrize("case", range(10))
def test_commuting_lnds_have_rank_at_most_n(case):
    # (ker D) D is a commutative family of LNDs
    rng = random.Random(5700 + case)
    n = rng.randint(2, 3)
    D = random_triangular(rng, n, 2, max_terms=2)
    family = [a * D for a in kernel_up_to_degree([D], 2, n)]
    for i, A in enumerate(family):
        for B in family[i + 1:]:
            assert bracket(A, B).is_zero()
    assert _rank_over_fraction_field(family, n, rng) <= n


def test_commuting_lnds_can_exceed_n_over_q():
    # dy, x*dy, x^2*dy commute and are LNDs, yet span a 3-dimensional space over Q in 2 variables;
    # the bound holds over the fraction field of the kernel, where all three are proportional
    family = [ddy, X * ddy, X ** 2 * ddy]
    span = lie_closure(family, 2, 10)
    assert span.is_abelian() and span.dimension == 3
    assert _rank_over_fraction_field(family, 2, random.Random(0)) == 1


def test_edge_cases():
    cert = certify_lnd_set(DerivationSet([], 2))
    assert isinstance(cert, SetNilpotencyCertificate) and cert.depth == 1
    assert len(kernel_up_to_degree(DerivationSet([], 2), 1)) == 3
    assert kernel_up_to_degree([dx, dy, dz], 3) == [Polynomial.constant(3, 1)]
    assert select_kernel_cutset([Derivation.zero(3)], 2) == []
    pair = lie_closure([ddx, ddy], 1, 4)
    assert pair.basis == (ddx, ddy) and pair.is_abelian()
    assert derived_series(pair).dimensions == (2, 0) and derived_series(pair).solvability_degree == 1
    zero = lie_closure([Derivation.zero(2)], 1, 4)
    assert derived_series(zero).dimensions == (0,) and derived_series(zero).solvability_degree == 0


def test_trivial_descents():
    assert descend_to_boundary([ddx], subalgebra([], 2), X) == X
    assert descend_to_boundary([ddx, X * ddy], subalgebra([X], 2), Y) == Y
