"""New coordinates in which a locally nilpotent set with trivial kernel is triangular.

The coordinate system is grown one element at a time.  With ``A`` the
subalgebra generated by the coordinates found so far (initially ``Q``), the
smallest-index variable outside ``A`` is pushed down by
:func:`~lndkit.lnd_sets.descend_to_boundary` until every member maps it into
``A``; that element becomes the next coordinate.  Once every variable lies
in ``A`` the images of the coordinates are rewritten in terms of the
earlier coordinates.

If a new element turns out to be algebraically dependent on the previous
ones, the input violates the hypotheses (nontrivial kernel or not locally
nilpotent) and :class:`~lndkit.errors.PreconditionViolated` is raised.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .algebra import Polynomial, variables
from .derivations import Derivation, Inconclusive, apply, certify_lnd, is_triangular, theorem2_check
from .errors import InternalError, PreconditionViolated
from .groebner import (DEFAULT_DEGREE_GUARD, algebraically_independent, express, independence_certificate,
                       subalgebra, subalgebra_membership)
from .lnd_sets import (DEFAULT_DEPTH_BOUND, DEFAULT_DESCENT_STEPS, DEFAULT_WIDTH_BOUND, as_set, certify_lnd_set,
                       descend_to_boundary, kernel_up_to_degree)

DEFAULT_KERNEL_CHECK_DEGREE = 2


@dataclass(frozen=True)
class TriangularPresentation:
    """Coordinates ``a_1..a_n`` with ``D(a_i) = q_{D,i}(a_1..a_{i-1})``.

    All tag polynomials (``expressions`` and ``witnesses``) live in a ring
    with ``n`` tag variables ``t_1..t_n``.  ``expressions[k][i]`` belongs
    to ``members[k]``; ``witnesses[j]`` writes ``x_j`` in the coordinates.
    """

    members: tuple
    coordinates: tuple
    expressions: tuple
    witnesses: tuple
    descent_traces: tuple = field(default=(), compare=False)

    @property
    def nvars(self) -> int:
        return len(self.coordinates)

    def triangular_members(self) -> list[Derivation]:
        """The members written as derivations of ``Q[t_1..t_n]``."""
        return [Derivation(list(qs)) for qs in self.expressions]

    def verify(self) -> bool:
        n = self.nvars
        coords = list(self.coordinates)
        if not algebraically_independent(coords, n):
            return False
        for D, qs in zip(self.members, self.expressions):
            for i, (a, q) in enumerate(zip(coords, qs)):
                if any(k >= i for k in q.support()):
                    return False
                if apply(D, a) != q.substitute(coords):
                    return False
        xs = variables(n)
        for x, w in zip(xs, self.witnesses):
            if w.substitute(coords) != x:
                return False
        return all(is_triangular(T) for T in self.triangular_members())

    def normalized(self) -> "TriangularPresentation":
        """Rescale every coordinate to leading coefficient 1 and rewrite the tag polynomials."""
        n = self.nvars
        scales = [a.leading_coefficient() for a in self.coordinates]
        coords = tuple(a.scale(1 / c) for a, c in zip(self.coordinates, scales))
        # a_i = c_i * a'_i, so q(a) = q(c_1 t'_1, ...) evaluated at a'
        scaled_tags = [Polynomial.variable(n, i).scale(c) for i, c in enumerate(scales)]
        expressions = tuple(
            tuple(q.substitute(scaled_tags).scale(1 / scales[i]) for i, q in enumerate(qs))
            for qs in self.expressions)
        witnesses = tuple(w.substitute(scaled_tags) for w in self.witnesses)
        return TriangularPresentation(self.members, coords, expressions, witnesses, self.descent_traces)


def triangularize(S, descent_steps: int = DEFAULT_DESCENT_STEPS, groebner_degree: int = DEFAULT_DEGREE_GUARD,
                  depth_bound: int = DEFAULT_DEPTH_BOUND, width_bound: int = DEFAULT_WIDTH_BOUND,
                  kernel_check_degree: int = DEFAULT_KERNEL_CHECK_DEGREE, seed: int = 0,
                  nvars: int | None = None) -> TriangularPresentation:
    S = as_set(S, nvars)
    n = S.variable_count
    certificate = certify_lnd_set(S, depth_bound, width_bound)
    if isinstance(certificate, Inconclusive):
        raise PreconditionViolated(f"set is not certified locally nilpotent: {certificate.reason}")
    kernel = kernel_up_to_degree(S, kernel_check_degree)
    if len(kernel) > 1:
        raise PreconditionViolated(f"joint kernel is larger than the constants: it contains {kernel[1]}")

    xs = variables(n)
    coords: list[Polynomial] = []
    expressions: list[list[Polynomial]] = [[] for _ in S.members]
    traces = []
    sub = subalgebra([], n, groebner_degree)
    for _ in range(n + 1):
        missing = [j for j in range(n) if subalgebra_membership(xs[j], sub) is None]
        if not missing:
            break
        trace: list = []
        b = descend_to_boundary(S, sub, xs[missing[0]], descent_steps, trace)
        traces.append(tuple(trace))
        if not algebraically_independent(coords + [b], n, seed):
            raise PreconditionViolated(
                f"new coordinate {b} is algebraically dependent on {[str(a) for a in coords]}; "
                "the joint kernel is not trivial or the set is not locally nilpotent")
        for k, D in enumerate(S):
            q = subalgebra_membership(apply(D, b), sub)
            if q is None:
                raise InternalError("descent returned an element with an image outside the subalgebra")
            expressions[k].append(_to_tags(q, n))
        coords.append(b)
        sub = subalgebra(coords, n, groebner_degree)
    else:
        raise InternalError("coordinate construction did not terminate within n steps")

    witnesses = []
    for x in xs:
        q = subalgebra_membership(x, sub)
        witnesses.append(_to_tags(q, n))
    result = TriangularPresentation(tuple(S.members), tuple(coords),
                                    tuple(tuple(e) for e in expressions), tuple(witnesses), tuple(traces))
    if not result.verify():
        raise InternalError("triangular presentation failed verification")
    return result


def _to_tags(q: Polynomial, n: int) -> Polynomial:
    return q.embed(n) if q.nvars else Polynomial.constant(n, q.constant_value())


# -- the n = 3 counterexample ------------------------------------------------------------

@dataclass(frozen=True)
class Fact:
    name: str
    statement: str
    verified: bool
    artifact: dict


@dataclass(frozen=True)
class CounterexampleReport:
    derivation: str
    facts: tuple

    @property
    def all_verified(self) -> bool:
        return all(f.verified for f in self.facts)


def counterexample_facts(seed: int = 0) -> CounterexampleReport:
    """Check the facts behind ``D = x dy + y dz`` on ``Q[x, y, z]``.

    Raises :class:`InternalError` if any of them fails.
    """
    names = ["x", "y", "z"]
    x, y, z = variables(3)
    D = Derivation([Polynomial.zero(3), x, y])
    f = 2 * x * z - y ** 2
    fmt = lambda p: p.to_string(names)  # noqa: E731
    facts = []

    cert = certify_lnd(D)
    ok = not isinstance(cert, Inconclusive) and cert.max_length == 3 and cert.verify(D)
    facts.append(Fact(
        "a", "D is locally nilpotent with chains x; y, x; z, y, x",
        ok, {"chains": [[fmt(p) for p in chain] for chain in cert.chains] if ok else None,
             "max_length": cert.max_length if ok else None}))

    images = {fmt(x): apply(D, x), fmt(f): apply(D, f)}
    facts.append(Fact(
        "b", "x and 2*x*z - y^2 lie in ker D",
        all(v.is_zero() for v in images.values()), {"images": {k: fmt(v) for k, v in images.items()}}))

    icert = independence_certificate([x, f], 3, seed)
    facts.append(Fact(
        "c", "x and 2*x*z - y^2 are algebraically independent",
        icert.independent,
        {"jacobian_columns": [names[c] for c in icert.columns] if icert.columns else None,
         "minor": fmt(icert.minor) if icert.minor is not None else None,
         "evaluation_point": [str(v) for v in icert.point] if icert.point else None}))

    sub = subalgebra([x, f], 3)
    verdicts = {}
    for name, p in (("y", y), ("z", z), ("5", Polynomial.constant(3, 5))):
        q = subalgebra_membership(p, sub)
        verdicts[name] = None if q is None else q.to_string(["t1", "t2"])
    ok = verdicts["y"] is None and verdicts["z"] is None and verdicts["5"] == "5"
    tag_names = names + ["t1", "t2"]
    facts.append(Fact(
        "d", "y and z are not in Q[x, 2*x*z - y^2] (5 is)",
        ok, {"membership": verdicts,
             "graph_basis": [g.to_string(tag_names) for g in sub.graph_basis.generators]}))

    verdict = theorem2_check(D, 2)
    ok = (not verdict.hypothesis_holds) and verdict.witness == f
    facts.append(Fact(
        "e", "(ker D) D is not triangular: 2*x*z - y^2 times D leaves the triangular algebra",
        ok, {"hypothesis_holds": verdict.hypothesis_holds, "conclusion_holds": verdict.conclusion_holds,
             "witness": fmt(verdict.witness) if verdict.witness is not None else None,
             "witness_times_D": (verdict.witness * D).to_string(names) if verdict.witness is not None else None,
             "kernel_degree_bound": verdict.kernel_degree_bound,
             "kernel_basis": [fmt(p) for p in verdict.kernel_basis]}))

    report = CounterexampleReport(D.to_string(names), tuple(facts))
    failed = [fact.name for fact in facts if not fact.verified]
    if failed:
        raise InternalError(f"counterexample facts failed: {failed}")
    return report
