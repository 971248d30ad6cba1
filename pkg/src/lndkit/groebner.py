"""Buchberger's algorithm, subalgebra membership and algebraic independence.

Reduction runs fraction-free on integer coefficients; bases are reported
monic over Q.  Two orders are supported: lex (``x_0 < ... < x_{n-1}``) and
a block elimination order in which every monomial containing one of the
first ``block_split`` variables beats every monomial that does not.  Inside
each block the block order uses degree reverse lex.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from math import gcd, lcm

from . import _kernels
from .algebra import Polynomial, lex_key, row_echelon
from .errors import InternalError, ResourceError, StructuralError

DEFAULT_DEGREE_GUARD = 40


@dataclass(frozen=True)
class TermOrder:
    kind: str = "lex"
    block_split: int | None = None

    def __post_init__(self):
        if self.kind not in ("lex", "block_elimination"):
            raise ValueError(f"unknown term order {self.kind!r}")
        if self.kind == "block_elimination" and (self.block_split is None or self.block_split < 0):
            raise ValueError("block elimination needs a non-negative block_split")

    def key_function(self, nvars: int):
        """A memoised sort key; larger key means larger monomial."""
        if self.kind == "lex":
            return lex_key
        s = self.block_split
        if s > nvars:
            raise StructuralError(f"block split {s} exceeds the variable count {nvars}")
        memo: dict = {}

        def key(e):
            k = memo.get(e)
            if k is None:
                head, tail = e[:s], e[s:]
                k = (sum(head), tuple(-v for v in reversed(head)),
                     sum(tail), tuple(-v for v in reversed(tail)))
                memo[e] = k
            return k

        return key


LEX = TermOrder("lex")


def elimination_order(split: int) -> TermOrder:
    return TermOrder("block_elimination", split)


# -- integer polynomial helpers ---------------------------------------------------

def _to_int(p: Polynomial) -> tuple[dict, Fraction]:
    """Return ``(q, s)`` with integer-coefficient ``q`` and ``p = s * q``."""
    if not p.terms:
        return {}, Fraction(1)
    den = lcm(*(c.denominator for c in p.terms.values()))
    q = {e: int(c * den) for e, c in p.terms.items()}
    g = gcd(*q.values())
    if g != 1:
        q = {e: c // g for e, c in q.items()}
    return q, Fraction(g, den)


def _content_divide(*dicts) -> int:
    g = 0
    for d in dicts:
        for c in d.values():
            g = gcd(g, c)
            if g == 1:
                return 1
    if g > 1:
        for d in dicts:
            for e in d:
                d[e] //= g
    return g or 1


def _divides(a, b) -> bool:
    for x, y in zip(a, b):
        if x > y:
            return False
    return True


def _reduce(p: dict, basis, key, full: bool = True) -> tuple[dict, Fraction]:
    """Reduce integer poly ``p`` (consumed) by ``basis`` entries ``(lm, lc, poly)``.

    Returns ``(r, m)`` with ``m * p_in - r`` in the ideal, ``m`` a nonzero rational.
    With ``full=False`` stops at the first irreducible leading term.
    """
    r: dict = {}
    mult = Fraction(1)
    steps = 0
    while p:
        lm = max(p, key=key)
        c = p[lm]
        for glm, glc, g in basis:
            if _divides(glm, lm):
                break
        else:
            if not full:
                r.update(p)
                break
            r[lm] = c
            del p[lm]
            continue
        q = gcd(c, glc)
        a, b = glc // q, c // q
        if glc < 0:
            a, b = -a, -b
        shift = tuple([x - y for x, y in zip(lm, glm)])
        _kernels.int_combine(p, a, b, shift, g)
        if a != 1:
            for e in r:
                r[e] *= a
            mult *= a
        steps += 1
        if steps % 8 == 0:
            mult /= _content_divide(p, r)
    mult /= _content_divide(p, r) if p else _content_divide(r)
    return r, mult


def _primitive_int(p: dict, key) -> dict:
    if not p:
        return p
    g = gcd(*p.values())
    lc = p[max(p, key=key)]
    if lc < 0:
        g = -g
    if g != 1:
        p = {e: c // g for e, c in p.items()}
    return p


# -- Groebner bases ---------------------------------------------------------------

@dataclass(frozen=True)
class GroebnerBasis:
    generators: tuple
    order: TermOrder
    nvars: int
    reduced: bool = True
    _int_form: list = field(default=None, compare=False, repr=False)

    def __len__(self):
        return len(self.generators)

    def leading_monomials(self) -> list:
        key = self.order.key_function(self.nvars)
        return [g.leading_monomial(key) for g in self.generators]

    def int_form(self):
        if self._int_form is None:
            key = self.order.key_function(self.nvars)
            form = []
            for g in self.generators:
                q, _ = _to_int(g)
                q = _primitive_int(q, key)
                lm = max(q, key=key)
                form.append((lm, q[lm], q))
            object.__setattr__(self, "_int_form", form)
        return self._int_form

    def is_zero_ideal(self) -> bool:
        return not self.generators

    def contains(self, p: Polynomial) -> bool:
        return normal_form(p, self).is_zero()


def _lcm_monomial(a, b):
    return tuple([x if x > y else y for x, y in zip(a, b)])


def _coprime(a, b) -> bool:
    return all(not (x and y) for x, y in zip(a, b))


def buchberger(gens, order: TermOrder = LEX, nvars: int | None = None,
               degree_guard: int = DEFAULT_DEGREE_GUARD) -> GroebnerBasis:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    Pairs are processed smallest-lcm first (ties by creation order) and
    pruned with the Gebauer-Moeller criteria.  Raises :class:`ResourceError`
    when an intermediate polynomial exceeds ``degree_guard``.
    """
    gens = list(gens)
    if nvars is None:
        if not gens:
            raise StructuralError("cannot infer the variable count of an empty generator list")
        nvars = gens[0].nvars
    if any(g.nvars != nvars for g in gens):
        raise StructuralError("generators live in different rings")
    key = order.key_function(nvars)

    polys: list[dict] = []
    lms: list = []
    active: list[int] = []
    pairs: list[tuple] = []  # (lcm_key, seq, i, j, lcm)
    seq = 0

    def basis_view():
        return [(lms[i], polys[i][lms[i]], polys[i]) for i in active]

    def update(h: int):
        nonlocal pairs, active, seq
        lm_h = lms[h]
        cand = [(g, _lcm_monomial(lm_h, lms[g])) for g in active]
        kept = []
        for idx, (g, l) in enumerate(cand):
            if _coprime(lm_h, lms[g]):
                kept.append((g, l))
                continue
            dominated = False
            for jdx, (g2, l2) in enumerate(cand):
                if jdx == idx:
                    continue
                if _divides(l2, l) and (l2 != l or jdx < idx):
                    dominated = True
                    break
            if not dominated:
                kept.append((g, l))
        new_pairs = []
        for g, l in kept:
            if not _coprime(lm_h, lms[g]):
                new_pairs.append((key(l), seq, g, h, l))
                seq += 1
        survivors = []
        for pair in pairs:
            _, _, i, j, l = pair
            if (_divides(lm_h, l) and _lcm_monomial(lms[i], lm_h) != l
                    and _lcm_monomial(lms[j], lm_h) != l):
                continue
            survivors.append(pair)
        pairs = survivors + new_pairs
        active = [g for g in active if not _divides(lm_h, lms[g])] + [h]

    def add(p: dict):
        if sum(max(p, key=sum)) > degree_guard:
            raise ResourceError(f"Groebner degree guard {degree_guard} exceeded")
        p = _primitive_int(p, key)
        polys.append(p)
        lms.append(max(p, key=key))
        update(len(polys) - 1)

    for g in gens:
        q, _ = _to_int(g)
        if not q:
            continue
        r, _ = _reduce(q, basis_view(), key)
        if r:
            add(r)

    while pairs:
        best = min(range(len(pairs)), key=lambda k: (pairs[k][0], pairs[k][1]))
        _, _, i, j, l = pairs.pop(best)
        fi, fj = polys[i], polys[j]
        s = _kernels.mul_terms(fi, {tuple(x - y for x, y in zip(l, lms[i])): fj[lms[j]]})
        _kernels.int_combine(s, 1, fi[lms[i]], tuple(x - y for x, y in zip(l, lms[j])), fj)
        if not s:
            continue
        r, _ = _reduce(s, basis_view(), key)
        if r:
            add(r)

    # interreduce the minimal basis
    current = basis_view()
    reduced = []
    for idx in range(len(current)):
        lm, _, g = current[idx]
        others = current[:idx] + current[idx + 1:]
        r, _ = _reduce(dict(g), others, key)
        r = _primitive_int(r, key)
        current[idx] = (lm, r[lm], r)
        reduced.append(r)
    out = []
    for q in reduced:
        lm = max(q, key=key)
        lc = q[lm]
        out.append(Polynomial._raw(nvars, {e: Fraction(c, lc) for e, c in q.items()}))
    out.sort(key=lambda p: key(p.leading_monomial(key)))
    return GroebnerBasis(tuple(out), order, nvars, True)


def normal_form(p: Polynomial, gb: GroebnerBasis) -> Polynomial:
    """Unique remainder of ``p`` modulo the reduced basis ``gb``."""
    if p.nvars != gb.nvars:
        raise StructuralError(f"variable count mismatch: {p.nvars} vs {gb.nvars}")
    q, s = _to_int(p)
    if not q:
        return p
    key = gb.order.key_function(gb.nvars)
    r, mult = _reduce(q, gb.int_form(), key)
    f = s / mult
    return Polynomial._raw(p.nvars, {e: f * c for e, c in r.items()})


# -- subalgebras ------------------------------------------------------------------

@dataclass(frozen=True)
class SubalgebraPresentation:
    """``Q[a_1..a_k]`` inside ``Q[x_1..x_n]`` via the graph ideal ``<t_i - a_i>``.

    The extended ring has the ambient variables first and the tag variables
    ``t_1..t_k`` after them; the order eliminates the ambient block.
    """

    ambient_variable_count: int
    generators: tuple
    graph_basis: GroebnerBasis

    @property
    def tag_count(self) -> int:
        return len(self.generators)


def subalgebra(generators, nvars: int | None = None,
               degree_guard: int = DEFAULT_DEGREE_GUARD) -> SubalgebraPresentation:
    generators = tuple(generators)
    if nvars is None:
        if not generators:
            raise StructuralError("need nvars for the subalgebra of constants")
        nvars = generators[0].nvars
    if any(a.nvars != nvars for a in generators):
        raise StructuralError("generators live in different rings")
    k = len(generators)
    total = nvars + k
    graph = [Polynomial.variable(total, nvars + i) - a.embed(total) for i, a in enumerate(generators)]
    gb = buchberger(graph, elimination_order(nvars), total, degree_guard)
    return SubalgebraPresentation(nvars, generators, gb)


def express(q: Polynomial, generators, nvars: int) -> Polynomial:
    """Evaluate a tag polynomial ``q(t_1..t_k)`` at the generators."""
    if q.nvars == 0:
        return Polynomial.constant(nvars, q.constant_value())
    return q.substitute(list(generators))


def subalgebra_membership(f: Polynomial, sub: SubalgebraPresentation) -> Polynomial | None:
    """Polynomial ``q`` in the tag variables with ``f = q(a_1..a_k)``, or None."""
    n = sub.ambient_variable_count
    if f.nvars != n:
        raise StructuralError(f"variable count mismatch: {f.nvars} vs {n}")
    total = n + sub.tag_count
    r = normal_form(f.embed(total), sub.graph_basis)
    if any(any(e[:n]) for e in r.terms):
        return None
    q = r.restrict(n, total)
    if express(q, sub.generators, n) != f:
        raise InternalError("membership expression failed the substitution check")
    return q


# -- algebraic independence -------------------------------------------------------

def jacobian(gens, nvars: int) -> list[list[Polynomial]]:
    return [[a.derivative(j) for j in range(nvars)] for a in gens]


def determinant(m: list[list[Polynomial]]) -> Polynomial:
    """Determinant of a small square polynomial matrix by cofactor expansion."""
    k = len(m)
    if k == 0:
        raise StructuralError("empty matrix")
    nv = m[0][0].nvars
    memo: dict = {}

    def minor(rows: tuple, cols: tuple) -> Polynomial:
        if len(rows) == 1:
            return m[rows[0]][cols[0]]
        hit = memo.get((rows, cols))
        if hit is not None:
            return hit
        total = Polynomial.zero(nv)
        r0, rest = rows[0], rows[1:]
        for idx, c in enumerate(cols):
            entry = m[r0][c]
            if entry.is_zero():
                continue
            sub = minor(rest, cols[:idx] + cols[idx + 1:])
            term = entry * sub
            total = total - term if idx % 2 else total + term
        memo[(rows, cols)] = total
        return total

    return minor(tuple(range(k)), tuple(range(k)))


@dataclass(frozen=True)
class IndependenceCertificate:
    independent: bool
    point: tuple | None
    columns: tuple | None
    minor: Polynomial | None
    minors_checked: int = 0


def independence_certificate(gens, nvars: int | None = None, seed: int = 0,
                             retries: int = 3) -> IndependenceCertificate:
    """Jacobian-criterion decision with a symbolic minor as evidence.

    A nonzero maximal minor proves independence.  Dependence is proved by
    checking that every maximal minor vanishes identically.
    """
    gens = list(gens)
    if nvars is None:
        if not gens:
            return IndependenceCertificate(True, None, None, None)
        nvars = gens[0].nvars
    k = len(gens)
    if k == 0:
        return IndependenceCertificate(True, None, (), None)
    if k > nvars:
        return IndependenceCertificate(False, None, None, None)
    jac = jacobian(gens, nvars)
    rng = random.Random(seed)
    for attempt in range(retries):
        bound = 10 ** (attempt + 2)
        point = tuple(Fraction(rng.randint(-bound, bound)) for _ in range(nvars))
        numeric = [[entry.evaluate(point) for entry in row] for row in jac]
        reduced, pivots = row_echelon(numeric, nvars)
        if len(pivots) == k:
            cols = tuple(pivots)
            minor = determinant([[row[c] for c in cols] for row in jac])
            if minor.is_zero():
                raise InternalError("numerically nonzero minor vanished symbolically")
            return IndependenceCertificate(True, point, cols, minor)
    checked = 0
    for cols in combinations(range(nvars), k):
        minor = determinant([[row[c] for c in cols] for row in jac])
        checked += 1
        if not minor.is_zero():
            return IndependenceCertificate(True, None, cols, minor, checked)
    return IndependenceCertificate(False, None, None, None, checked)


def transcendence_degree(gens, nvars: int, seed: int = 0) -> int:
    """Rank of the Jacobian at a random point.

    A lower bound for ``tr.deg Q(gens)`` that is exact unless the point
    lies on the vanishing locus of every maximal nonzero minor.
    """
    gens = [g for g in gens if not g.is_constant()]
    if not gens:
        return 0
    rng = random.Random(seed)
    point = tuple(Fraction(rng.randint(-1000, 1000)) for _ in range(nvars))
    numeric = [[entry.evaluate(point) for entry in row] for row in jacobian(gens, nvars)]
    return len(row_echelon(numeric, nvars)[1])


def algebraically_independent(gens, nvars: int | None = None, seed: int = 0) -> bool:
    return independence_certificate(gens, nvars, seed).independent


def algebraically_independent_by_elimination(gens, nvars: int | None = None,
                                             degree_guard: int = DEFAULT_DEGREE_GUARD) -> bool:
    """Independence iff the graph ideal meets ``Q[t]`` only in zero."""
    gens = list(gens)
    if not gens:
        return True
    sub = subalgebra(gens, nvars, degree_guard)
    n = sub.ambient_variable_count
    return not any(all(not any(e[:n]) for e in g.terms) for g in sub.graph_basis.generators)
