"""Finite sets of derivations.

Certification of locally nilpotent sets, the descent to an element whose
images fall into a given subalgebra, degree-bounded joint kernels, kernel
cutsets, and Lie closure with the derived series.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import LinearSpan, Polynomial, RationalMatrix, lex_key, monomials_up_to, nullspace, row_echelon, variables
from .derivations import Derivation, Inconclusive, apply, bracket
from .errors import CertificationInconsistency, StructuralError, UsageError
from .groebner import SubalgebraPresentation, subalgebra_membership

DEFAULT_DEPTH_BOUND = 64
DEFAULT_WIDTH_BOUND = 512
DEFAULT_DESCENT_STEPS = 256


@dataclass(frozen=True)
class DerivationSet:
    members: tuple
    variable_count: int

    def __init__(self, members: Sequence[Derivation], variable_count: int | None = None):
        unique = []
        for D in members:
            if D not in unique:
                unique.append(D)
        if variable_count is None:
            if not unique:
                raise StructuralError("an empty derivation set needs an explicit variable count")
            variable_count = unique[0].nvars
        if any(D.nvars != variable_count for D in unique):
            raise StructuralError("derivations of different rings in one set")
        object.__setattr__(self, "members", tuple(unique))
        object.__setattr__(self, "variable_count", variable_count)

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)


def as_set(S, nvars: int | None = None) -> DerivationSet:
    if isinstance(S, DerivationSet):
        if nvars is not None and nvars != S.variable_count:
            raise StructuralError("variable count mismatch")
        return S
    return DerivationSet(list(S), nvars)


def span_basis(polys: Sequence[Polynomial], nvars: int) -> list[Polynomial]:
    """Canonical basis of the Q-span of ``polys``.

    Reduced echelon form with respect to lex-leading monomials, each vector
    scaled to a primitive integer polynomial with positive leading
    coefficient, sorted by leading monomial.
    """
    polys = [p for p in polys if not p.is_zero()]
    if not polys:
        return []
    cols = sorted({e for p in polys for e in p.terms}, key=lex_key, reverse=True)
    index = {e: i for i, e in enumerate(cols)}
    rows = []
    for p in polys:
        row = [Fraction(0)] * len(cols)
        for e, c in p.terms.items():
            row[index[e]] = c
        rows.append(row)
    reduced, _ = row_echelon(rows, len(cols))
    out = [Polynomial._raw(nvars, {cols[j]: v for j, v in enumerate(row) if v}).primitive() for row in reduced]
    out.sort(key=lambda p: lex_key(p.leading_monomial()))
    return out


# -- locally nilpotent sets ------------------------------------------------------------

@dataclass(frozen=True)
class SetNilpotencyCertificate:
    """Per variable, the levels ``V_0 = {x_i}``, ``V_{t+1} = span S(V_t)``, last one empty.

    Levels are stored as canonical span bases; a word of length ``t``
    applied to ``x_i`` lies in the span of level ``t``.
    """

    trees: tuple

    @property
    def depths(self) -> tuple:
        """Number of nonempty levels per variable."""
        return tuple(len(t) - 1 for t in self.trees)

    @property
    def depth(self) -> int:
        return max(self.depths, default=1)

    @property
    def max_width(self) -> int:
        return max((len(level) for t in self.trees for level in t), default=0)

    def verify(self, S) -> bool:
        S = as_set(S)
        n = S.variable_count
        xs = variables(n)
        for i, tree in enumerate(self.trees):
            if list(tree[0]) != [xs[i]] or tree[-1]:
                return False
            for level, nxt in zip(tree, tree[1:]):
                images = [apply(D, v) for v in level for D in S]
                if span_basis(images, n) != list(nxt):
                    return False
        return True


def certify_lnd_set(S, depth_bound: int = DEFAULT_DEPTH_BOUND, width_bound: int = DEFAULT_WIDTH_BOUND,
                    nvars: int | None = None) -> SetNilpotencyCertificate | Inconclusive:
    """Certify that every long enough word in ``S`` kills every variable.

    ``depth_bound`` caps the number of nonempty levels per variable and
    ``width_bound`` the dimension of a level.
    """
    if depth_bound < 1 or width_bound < 1:
        raise ValueError("bounds must be at least 1")
    S = as_set(S, nvars)
    n = S.variable_count
    trees = []
    for i, x in enumerate(variables(n)):
        levels = [(x,)]
        while levels[-1]:
            if len(levels) > depth_bound:
                return Inconclusive(f"images of x_{i + 1} survive {depth_bound} levels", levels[-1])
            images = [apply(D, v) for v in levels[-1] for D in S]
            nxt = tuple(span_basis(images, n))
            if len(nxt) > width_bound:
                return Inconclusive(f"level of x_{i + 1} exceeds width {width_bound}", nxt)
            levels.append(nxt)
        trees.append(tuple(levels))
    return SetNilpotencyCertificate(tuple(trees))


def descend_to_boundary(S, sub: SubalgebraPresentation, v: Polynomial,
                        max_steps: int = DEFAULT_DESCENT_STEPS, trace: list | None = None) -> Polynomial:
    """Walk from ``v`` outside ``sub`` to an element all of whose images lie in ``sub``.

    At each step the first member ``D`` of ``S`` with ``D(v)`` outside the
    subalgebra replaces ``v`` by ``D(v)``.  Visited elements are appended to
    ``trace`` when given.
    """
    S = as_set(S, sub.ambient_variable_count)
    if subalgebra_membership(v, sub) is not None:
        raise UsageError("descent must start outside the subalgebra")
    if trace is not None:
        trace.append(v)
    for _ in range(max_steps + 1):
        for D in S:
            image = apply(D, v)
            if subalgebra_membership(image, sub) is None:
                v = image
                if trace is not None:
                    trace.append(v)
                break
        else:
            return v
    raise CertificationInconsistency(f"descent did not stop within {max_steps} steps")


# -- kernels -----------------------------------------------------------------------

def kernel_up_to_degree(S, degree: int, nvars: int | None = None) -> list[Polynomial]:
    """Basis of ``{f : deg f <= degree, D(f) = 0 for all D in S}``.

    The basis is canonical in the sense of :func:`span_basis`.
    """
    if degree < 0:
        raise ValueError("degree must be non-negative")
    S = as_set(S, nvars)
    n = S.variable_count
    monos = monomials_up_to(n, degree)
    basis_polys = [Polynomial.monomial(e) for e in monos]
    if not S.members:
        return span_basis(basis_polys, n)
    rows_index: dict = {}
    columns = []
    for m in basis_polys:
        col = {}
        for k, D in enumerate(S):
            for e, c in apply(D, m).terms.items():
                col[(k, e)] = c
                rows_index.setdefault((k, e), len(rows_index))
        columns.append(col)
    matrix = [[Fraction(0)] * len(monos) for _ in rows_index]
    for j, col in enumerate(columns):
        for key, c in col.items():
            matrix[rows_index[key]][j] = c
    if not matrix:
        return span_basis(basis_polys, n)
    vectors = nullspace(RationalMatrix.from_rows(matrix, len(monos)))
    polys = [Polynomial._raw(n, {monos[j]: c for j, c in enumerate(v) if c}) for v in vectors]
    return span_basis(polys, n)


def select_kernel_cutset(S, degree: int, nvars: int | None = None) -> list[Derivation]:
    """Greedy sublist of ``S`` with the same degree-bounded joint kernel."""
    S = as_set(S, nvars)
    n = S.variable_count
    target = len(kernel_up_to_degree(S, degree))
    current = len(monomials_up_to(n, degree))
    chosen: list[Derivation] = []
    for D in S:
        if current == target:
            break
        dim = len(kernel_up_to_degree(chosen + [D], degree, n))
        if dim < current:
            chosen.append(D)
            current = dim
    return chosen


# -- Lie closure and derived series --------------------------------------------------

def derivation_vector(D: Derivation) -> dict:
    return {(i, e): c for i, p in enumerate(D.coefficients) for e, c in p.terms.items()}


@dataclass(frozen=True)
class DerivationSpan:
    """Linearly independent derivations with the structure constants of their span.

    ``bracket_table[i][j]`` is the coordinate vector of ``[basis_i, basis_j]``.
    """

    basis: tuple
    bracket_table: tuple | None
    coefficient_degree_bound: int

    @property
    def dimension(self) -> int:
        return len(self.basis)

    def is_abelian(self) -> bool:
        if self.bracket_table is None:
            raise UsageError("span has no bracket table")
        return all(not any(v) for row in self.bracket_table for v in row)

    def verify(self) -> bool:
        if self.bracket_table is None:
            return False
        span = LinearSpan()
        for D in self.basis:
            if not span.add(derivation_vector(D)):
                return False
        for i, Di in enumerate(self.basis):
            for j, Dj in enumerate(self.basis):
                combo = Derivation.zero(Di.nvars)
                for c, Dk in zip(self.bracket_table[i][j], self.basis):
                    if c:
                        combo = combo + Dk * c
                if combo != bracket(Di, Dj):
                    return False
        return True


@dataclass(frozen=True)
class Overflow:
    reason: str
    partial_basis: tuple = ()


def lie_closure(generators: Sequence[Derivation], coefficient_degree_bound: int,
                dimension_bound: int) -> DerivationSpan | Overflow:
    """Close ``generators`` under brackets inside coefficients of bounded degree."""
    if coefficient_degree_bound < 0 or dimension_bound < 1:
        raise ValueError("bounds out of range")
    basis: list[Derivation] = []
    span = LinearSpan()
    brackets: dict = {}

    def consider(D: Derivation) -> Overflow | None:
        if D.total_degree() > coefficient_degree_bound:
            return Overflow(f"coefficient degree {D.total_degree()} exceeds {coefficient_degree_bound}",
                            tuple(basis))
        if span.add(derivation_vector(D)):
            basis.append(D)
            if len(basis) > dimension_bound:
                return Overflow(f"dimension exceeds {dimension_bound}", tuple(basis))
        return None

    for g in generators:
        failure = consider(g)
        if failure:
            return failure
    j = 0
    while j < len(basis):
        for i in range(j):
            b = bracket(basis[i], basis[j])
            brackets[(i, j)] = b
            failure = consider(b)
            if failure:
                return failure
        j += 1
    m = len(basis)
    table = [[None] * m for _ in range(m)]
    for i in range(m):
        table[i][i] = (Fraction(0),) * m
        for j in range(i + 1, m):
            combo = span.express(derivation_vector(brackets[(i, j)]))
            row = tuple(combo.get(k, Fraction(0)) for k in range(m))
            table[i][j] = row
            table[j][i] = tuple(-v for v in row)
    return DerivationSpan(tuple(basis), tuple(tuple(r) for r in table), coefficient_degree_bound)


@dataclass(frozen=True)
class DerivedSeries:
    dimensions: tuple
    solvable: bool
    solvability_degree: int | None


def derived_series(span: DerivationSpan) -> DerivedSeries:
    """Dimensions of ``A, [A,A], [[A,A],[A,A]], ...`` until they stabilise."""
    if span.bracket_table is None:
        raise UsageError("derived series needs a complete bracket table")
    m = span.dimension
    table = span.bracket_table
    current = [{k: Fraction(1)} for k in range(m)]
    dims = [m]
    while dims[-1]:
        nxt = LinearSpan()
        vectors = []
        for a in range(len(current)):
            for b in range(a + 1, len(current)):
                u, v = current[a], current[b]
                out: dict = {}
                for i, ui in u.items():
                    for j, vj in v.items():
                        for k, c in enumerate(table[i][j]):
                            if c:
                                out[k] = out.get(k, 0) + ui * vj * c
                out = {k: c for k, c in out.items() if c}
                if out and nxt.add(out):
                    vectors.append(out)
        dims.append(len(vectors))
        if len(vectors) == dims[-2]:
            break
        current = vectors
    solvable = dims[-1] == 0
    return DerivedSeries(tuple(dims), solvable, len(dims) - 1 if solvable else None)
