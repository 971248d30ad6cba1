import random

import pytest

from lndkit.algebra import Polynomial, lex_key, variables
from lndkit.derivations import (Derivation, Inconclusive, NilpotencyCertificate, apply, bracket, certify_lnd,
                                compare_ad_order, conjugate, height_key, is_triangular, theorem2_check)
from lndkit.errors import PreconditionViolated
from lndkit.testing import (elementary, random_derivation, random_elementary, random_polynomial,
                            random_triangular)

x, y, z = variables(3)
dx, dy, dz = (Derivation.partial(3, i) for i in range(3))
D = x * dy + y * dz


def test_apply_and_printing():
    assert apply(D, 2 * x * z - y ** 2) == 0
    assert apply(D, z) == y
    assert D.to_string() == "x*dy + y*dz"
    assert ((x + 1) * dy).to_string() == "(x + 1)*dy"
    assert Derivation.zero(3).to_string() == "0*dx"


def test_bracket_examples():
    assert bracket(D, D).is_zero()
    assert bracket(dx, D) == dy
    assert bracket(dy, D) == dz


def test_chains():
    cert = certify_lnd(D)
    assert isinstance(cert, NilpotencyCertificate)
    assert cert.chains == ((x, 0), (y, x, 0), (z, y, x, 0))
    assert cert.max_length == 3
    assert cert.verify(D)


def test_non_nilpotent_is_inconclusive():
    X, Y = variables(2)
    E = Derivation([Y, X])
    result = certify_lnd(E, step_bound=20)
    assert isinstance(result, Inconclusive)
    euler = Derivation([X, Polynomial.zero(2)])
    assert isinstance(certify_lnd(euler, step_bound=10), Inconclusive)


def test_triangularity():
    assert is_triangular(D)
    assert is_triangular(dx)
    assert not is_triangular(x * dx)
    assert not is_triangular(z * dy)


@pytest.mark.parametrize("case", range(30))
def test_leibniz(case):
    rng = random.Random(500 + case)
    n = rng.randint(1, 4)
    E = random_derivation(rng, n, 2)
    f = random_polynomial(rng, n, 3)
    g = random_polynomial(rng, n, 3)
    assert apply(E, f * g) == apply(E, f) * g + f * apply(E, g)


@pytest.mark.parametrize("case", range(30))
def test_jacobi_and_antisymmetry(case):
    rng = random.Random(600 + case)
    n = rng.randint(1, 3)
    A, B, C = (random_derivation(rng, n, 2) for _ in range(3))
    assert bracket(A, B) == -bracket(B, A)
    total = bracket(A, bracket(B, C)) + bracket(B, bracket(C, A)) + bracket(C, bracket(A, B))
    assert total.is_zero()
    # the bracket acts as the commutator of operators
    f = random_polynomial(rng, n, 3)
    assert apply(bracket(A, B), f) == apply(A, apply(B, f)) - apply(B, apply(A, f))


@pytest.mark.parametrize("case", range(30))
def test_triangular_bracket_closed(case):
    rng = random.Random(700 + case)
    n = rng.randint(1, 4)
    A, B = random_triangular(rng, n, 3), random_triangular(rng, n, 3)
    assert is_triangular(bracket(A, B))


@pytest.mark.parametrize("case", range(30))
def test_triangular_lowers_leading_monomial(case):
    rng = random.Random(800 + case)
    n = rng.randint(1, 4)
    T = random_triangular(rng, n, 3)
    f = random_polynomial(rng, n, 4)
    image = apply(T, f)
    assert image.is_constant() or lex_key(image.leading_monomial()) < lex_key(f.leading_monomial())


@pytest.mark.parametrize("case", range(20))
def test_triangular_certified_and_replayable(case):
    rng = random.Random(900 + case)
    n = rng.randint(1, 4)
    T = random_triangular(rng, n, 2)
    cert = certify_lnd(T)
    assert isinstance(cert, NilpotencyCertificate)
    assert cert.verify(T)


@pytest.mark.parametrize("case", range(20))
def test_conjugation_preserves_nilpotency(case):
    rng = random.Random(1000 + case)
    n = rng.randint(2, 3)
    T = random_triangular(rng, n, 2)
    phi = random_elementary(rng, n)
    C = phi.conjugate(T)
    assert isinstance(certify_lnd(C), NilpotencyCertificate)
    # conjugating back with the inverse recovers T
    assert conjugate(C, phi.inverse_images, phi.images) == T


def test_elementary_rejects_own_variable():
    with pytest.raises(ValueError):
        elementary(2, 0, variables(2)[0])


def test_theorem2_examples():
    verdict = theorem2_check(D, 2)
    assert not verdict.hypothesis_holds
    assert not verdict.conclusion_holds
    assert verdict.witness == 2 * x * z - y ** 2
    good = theorem2_check((x ** 2 - y) * dz, 2)
    assert good.hypothesis_holds and good.conclusion_holds and good.consistent
    with pytest.raises(PreconditionViolated):
        theorem2_check(z * dz, 2)


def test_height_order():
    hk = height_key(D)
    assert hk.height == 2 and hk.leading_coordinate_order == (1, 0, 0)
    X, Y = variables(2)
    ddx, ddy = Derivation.partial(2, 0), Derivation.partial(2, 1)
    assert compare_ad_order(bracket(ddx, X * ddy), X * ddy) == "less"
    # same height: the leading coefficient monomial decides
    assert compare_ad_order(ddy, X * ddy) == "less"
    assert compare_ad_order(X * ddy, ddy) == "not_less"
    assert compare_ad_order(ddy, ddy) == "not_less"
    assert height_key(Derivation.zero(2)).height == 3


@pytest.mark.parametrize("case", range(20))
def test_theorem2_false_positives_only_from_truncated_kernels(case):
    rng = random.Random(1100 + case)
    n = rng.randint(2, 4)
    T = random_triangular(rng, n, 2)
    for bound in (1, 2, 3):
        v = theorem2_check(T, bound)
        assert v.consistent
        if v.hypothesis_holds and not v.conclusion_holds:
            assert not v.kernel_captured


def test_theorem2_truncated_slice():
    # 2*dx + x*dy has kernel Q[x^2 - 4y, z]; at bound 1 only z is seen
    T = Derivation([Polynomial.constant(3, 2), x, Polynomial.zero(3)])
    low = theorem2_check(T, 1)
    assert low.kernel_transcendence == 1 and not low.kernel_captured
    high = theorem2_check(T, 2)
    assert high.kernel_captured and not high.hypothesis_holds


def test_more_examples():
    assert apply(D, Polynomial.constant(3, 1)) == 0
    X, Y = variables(2)
    assert bracket(Derivation.partial(2, 0), X * Derivation.partial(2, 1)) == Derivation.partial(2, 1)
