import random

import pytest

from lndkit.algebra import Polynomial, variables
from lndkit.derivations import Derivation, apply, is_triangular
from lndkit.errors import PreconditionViolated
from lndkit.testing import random_elementary, random_triangular_set
from lndkit.triangularize import counterexample_facts, triangularize

X, Y = variables(2)
ddx, ddy = Derivation.partial(2, 0), Derivation.partial(2, 1)


def test_single_variable():
    T = Polynomial.variable(1, 0)
    tp = triangularize([Derivation.partial(1, 0)])
    assert tp.coordinates == (T,)
    assert tp.expressions == ((Polynomial.constant(1, 1),),)


def test_golden_two_variable_case():
    E = -2 * Y * ddx + ddy
    tp = triangularize([ddx, E])
    t1, _ = variables(2)
    assert tp.coordinates == (-2 * Y, X)
    assert tp.expressions == ((0, 1), (-2, t1))
    assert tp.verify()


def test_golden_witnesses():
    tp = triangularize([ddx, -2 * Y * ddx + ddy])
    t1, t2 = variables(2)
    assert tp.witnesses[0] == t2
    assert tp.witnesses[1].substitute(list(tp.coordinates)) == Y
    assert str(tp.witnesses[1]) == "-1/2*x"


def test_normalized():
    tp = triangularize([ddx, -2 * Y * ddx + ddy]).normalized()
    assert tp.coordinates == (Y, X)
    assert tp.verify()
    t1, _ = variables(2)
    assert tp.expressions[1] == (1, -2 * t1)


def test_nontrivial_kernel_rejected():
    with pytest.raises(PreconditionViolated):
        triangularize([ddy, X * ddy])


def test_non_nilpotent_rejected():
    with pytest.raises(PreconditionViolated):
        triangularize([ddx, Y * ddx + X * ddy], depth_bound=10)


@pytest.mark.parametrize("case", range(12))
def test_idempotent_on_triangular_input(case):
    rng = random.Random(6000 + case)
    n = rng.randint(2, 3)
    S = random_triangular_set(rng, n)
    tp = triangularize(S, nvars=n)
    assert tp.verify()
    assert len(tp.coordinates) == n
    for qs in tp.expressions:
        for i, q in enumerate(qs):
            assert all(k < i for k in q.support())


@pytest.mark.parametrize("case", range(12))
def test_conjugated_round_trip(case):
    rng = random.Random(6100 + case)
    n = rng.randint(2, 3)
    S = random_triangular_set(rng, n)
    phi = random_elementary(rng, n).then(random_elementary(rng, n))
    conj = [phi.conjugate(D) for D in S]
    tp = triangularize(conj, nvars=n)
    assert len(tp.descent_traces) <= n
    for D, qs in zip(tp.members, tp.expressions):
        for a, q in zip(tp.coordinates, qs):
            assert apply(D, a) == q.substitute(list(tp.coordinates))
    for xj, w in zip(variables(n), tp.witnesses):
        assert w.substitute(list(tp.coordinates)) == xj
    assert all(is_triangular(T) for T in tp.triangular_members())


def test_counterexample_facts():
    report = counterexample_facts()
    assert report.all_verified
    assert [f.name for f in report.facts] == ["a", "b", "c", "d", "e"]
    a, b, _, d, e = report.facts
    assert a.artifact["chains"][2] == ["z", "y", "x", "0"]
    assert b.artifact["images"] == {"x": "0", "2*x*z - y^2": "0"}
    assert d.artifact["membership"] == {"y": None, "z": None, "5": "5"}
    assert e.artifact["witness"] == "2*x*z - y^2"
