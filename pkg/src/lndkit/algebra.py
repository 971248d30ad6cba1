"""Exact arithmetic foundation: sparse polynomials over Q and rational linear algebra.

A polynomial in ``n`` variables is a map from exponent tuples (length ``n``)
to nonzero :class:`fractions.Fraction` coefficients.  Variables are indexed
``0..n-1`` and ordered ``x_0 < x_1 < ... < x_{n-1}`` for the lexicographic
order, so the last variable is the most significant one.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Sequence

from . import _kernels
from .errors import StructuralError

Monomial = tuple[int, ...]


def lex_key(exps: Monomial) -> Monomial:
    """Sort key realising the lex order ``x_0 < x_1 < ... < x_{n-1}``."""
    return exps[::-1]


def _as_fraction(c) -> Fraction:
    if isinstance(c, Fraction):
        return c
    if isinstance(c, int):
        return Fraction(c)
    if isinstance(c, str):
        return Fraction(c)
    raise TypeError(f"unsupported coefficient type {type(c).__name__}")


class Polynomial:
    """Immutable sparse polynomial with rational coefficients."""

    __slots__ = ("nvars", "terms", "_hash")

    def __init__(self, nvars: int, terms=None):
        if nvars < 0:
            raise StructuralError("variable count must be non-negative")
        clean = {}
        if terms:
            items = terms.items() if isinstance(terms, dict) else terms
            for e, c in items:
                e = tuple(int(v) for v in e)
                if len(e) != nvars or any(v < 0 for v in e):
                    raise StructuralError(f"bad exponent vector {e} for {nvars} variables")
                c = _as_fraction(c)
                if c:
                    c = clean.get(e, 0) + c
                    if c:
                        clean[e] = c
                    else:
                        clean.pop(e, None)
        self.nvars = nvars
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, nvars: int, terms: dict) -> "Polynomial":
        # trusted constructor: terms already canonical
        p = object.__new__(cls)
        p.nvars = nvars
        p.terms = terms
        p._hash = None
        return p

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls._raw(nvars, {})

    @classmethod
    def constant(cls, nvars: int, value) -> "Polynomial":
        value = _as_fraction(value)
        return cls._raw(nvars, {(0,) * nvars: value} if value else {})

    @classmethod
    def variable(cls, nvars: int, index: int) -> "Polynomial":
        if not 0 <= index < nvars:
            raise StructuralError(f"variable index {index} out of range for {nvars} variables")
        e = [0] * nvars
        e[index] = 1
        return cls._raw(nvars, {tuple(e): Fraction(1)})

    @classmethod
    def monomial(cls, exps: Sequence[int], coeff=1) -> "Polynomial":
        return cls(len(exps), {tuple(exps): coeff})

    # -- predicates and accessors -------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and not any(next(iter(self.terms))))

    def constant_value(self) -> Fraction:
        """The constant coefficient."""
        return self.terms.get((0,) * self.nvars, Fraction(0))

    def total_degree(self) -> int:
        """Total degree; -1 for the zero polynomial."""
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, index: int) -> int:
        return max((e[index] for e in self.terms), default=-1)

    def support(self) -> frozenset[int]:
        """Indices of the variables that actually occur."""
        used = set()
        for e in self.terms:
            used.update(i for i, v in enumerate(e) if v)
        return frozenset(used)

    def sorted_terms(self, key=lex_key) -> list[tuple[Monomial, Fraction]]:
        """Terms from the largest monomial down."""
        return sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True)

    def leading_monomial(self, key=lex_key) -> Monomial | None:
        if not self.terms:
            return None
        return max(self.terms, key=key)

    def leading_coefficient(self, key=lex_key) -> Fraction:
        lm = self.leading_monomial(key)
        return Fraction(0) if lm is None else self.terms[lm]

    # -- arithmetic -----------------------------------------------------------------

    def _coerce(self, other) -> "Polynomial":
        if isinstance(other, Polynomial):
            if other.nvars != self.nvars:
                raise StructuralError(
                    f"variable count mismatch: {self.nvars} vs {other.nvars}")
            return other
        if isinstance(other, (int, Fraction)):
            return Polynomial.constant(self.nvars, other)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.nvars, _kernels.add_mul_terms(self.terms, other.terms, 1, None))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.nvars, _kernels.add_mul_terms(self.terms, other.terms, -1, None))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return other - self

    def __neg__(self):
        return Polynomial._raw(self.nvars, {e: -c for e, c in self.terms.items()})

    def __pos__(self):
        return self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Polynomial._raw(self.nvars, _kernels.mul_terms(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise StructuralError("polynomial exponent must be a non-negative integer")
        result = Polynomial.constant(self.nvars, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def scale(self, c) -> "Polynomial":
        c = _as_fraction(c)
        if not c:
            return Polynomial.zero(self.nvars)
        return Polynomial._raw(self.nvars, {e: c * v for e, v in self.terms.items()})

    def shift(self, exps: Monomial, coeff=1) -> "Polynomial":
        """Multiply by ``coeff * x**exps``."""
        return Polynomial._raw(self.nvars, _kernels.add_mul_terms({}, self.terms, _as_fraction(coeff), tuple(exps)))

    def derivative(self, index: int) -> "Polynomial":
        if not 0 <= index < self.nvars:
            raise StructuralError(f"variable index {index} out of range for {self.nvars} variables")
        out = {}
        for e, c in self.terms.items():
            k = e[index]
            if k:
                out[e[:index] + (k - 1,) + e[index + 1:]] = c * k
        return Polynomial._raw(self.nvars, out)

    def substitute(self, images: Sequence["Polynomial"]) -> "Polynomial":
        """Replace variable ``i`` by ``images[i]``; the result lives in the images' ring."""
        if len(images) != self.nvars:
            raise StructuralError(f"need {self.nvars} images, got {len(images)}")
        if self.nvars == 0:
            # no images to read the target ring from
            raise StructuralError("cannot substitute into a polynomial without variables")
        target = images[0].nvars
        if any(g.nvars != target for g in images):
            raise StructuralError("substitution images live in different rings")
        powers: list[dict[int, Polynomial]] = [{0: Polynomial.constant(target, 1)} for _ in images]

        def power(i: int, k: int) -> Polynomial:
            cache = powers[i]
            top = max(cache)
            while top < k:
                cache[top + 1] = cache[top] * images[i]
                top += 1
            return cache[k]

        acc: dict = {}
        for e, c in self.terms.items():
            term = Polynomial.constant(target, c)
            for i, k in enumerate(e):
                if k:
                    term = term * power(i, k)
            acc = _kernels.add_mul_terms(acc, term.terms, 1, None)
        return Polynomial._raw(target, acc)

    def evaluate(self, point: Sequence) -> Fraction:
        if len(point) != self.nvars:
            raise StructuralError(f"need {self.nvars} coordinates, got {len(point)}")
        total = Fraction(0)
        for e, c in self.terms.items():
            v = c
            for x, k in zip(point, e):
                if k:
                    v *= x ** k
            total += v
        return total

    def embed(self, nvars: int, offset: int = 0) -> "Polynomial":
        """View in a ring with ``nvars`` variables, mapping ``x_i`` to ``x_{offset+i}``."""
        if offset < 0 or offset + self.nvars > nvars:
            raise StructuralError("embedding does not fit the target ring")
        pre = (0,) * offset
        post = (0,) * (nvars - offset - self.nvars)
        return Polynomial._raw(nvars, {pre + e + post: c for e, c in self.terms.items()})

    def restrict(self, start: int, stop: int) -> "Polynomial":
        """Drop variables outside ``[start, stop)``; they must not occur."""
        out = {}
        for e, c in self.terms.items():
            if any(e[:start]) or any(e[stop:]):
                raise StructuralError("polynomial uses variables outside the kept range")
            out[e[start:stop]] = c
        return Polynomial._raw(stop - start, out)

    def primitive(self, key=lex_key) -> "Polynomial":
        """Scale to integer coefficients with content 1 and positive leading coefficient."""
        if not self.terms:
            return self
        den = lcm(*(c.denominator for c in self.terms.values()))
        num = gcd(*(c.numerator for c in self.terms.values()))
        f = Fraction(den, num)
        if self.leading_coefficient(key) < 0:
            f = -f
        return self.scale(f)

    def monic(self, key=lex_key) -> "Polynomial":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_coefficient(key))

    # -- comparison, hashing, printing ---------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Polynomial):
            return self.nvars == other.nvars and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            return self.is_constant() and self.constant_value() == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.nvars, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        if names is None:
            names = default_names(self.nvars)
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            factors = []
            for name, k in zip(names, e):
                if k == 1:
                    factors.append(name)
                elif k:
                    factors.append(f"{name}^{k}")
            mag = abs(c)
            if not factors:
                body = str(mag)
            elif mag == 1:
                body = "*".join(factors)
            else:
                body = str(mag) + "*" + "*".join(factors)
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Polynomial({self.nvars}, {self.to_string()!r})"


def default_names(n: int) -> list[str]:
    if n <= 3:
        return ["x", "y", "z"][:n]
    return [f"x{i + 1}" for i in range(n)]


def variables(n: int) -> list[Polynomial]:
    return [Polynomial.variable(n, i) for i in range(n)]


def monomials_up_to(nvars: int, degree: int) -> list[Monomial]:
    """All exponent vectors of total degree at most ``degree``, by degree then lex."""
    out = []

    def rec(prefix, left, idx):
        if idx == nvars:
            out.append(tuple(prefix))
            return
        for k in range(left + 1):
            prefix.append(k)
            rec(prefix, left - k, idx + 1)
            prefix.pop()

    rec([], degree, 0)
    out.sort(key=lambda e: (sum(e), lex_key(e)))
    return out


# -- named operations --------------------------------------------------------------

def poly_arith(op: str, *operands):
    """Dispatch ``add``, ``sub``, ``mul``, ``scale`` or ``pow``."""
    if op == "add":
        a, b = operands
        return a + b
    if op == "sub":
        a, b = operands
        return a - b
    if op == "mul":
        a, b = operands
        return a * b
    if op == "scale":
        a, c = operands
        return a.scale(c)
    if op == "pow":
        a, k = operands
        return a ** k
    raise ValueError(f"unknown operation {op!r}")


def lex_leading_monomial(p: Polynomial, precedence: Sequence[int] | None = None) -> Monomial | None:
    """Lex-greatest monomial of ``p``.

    ``precedence`` lists variable indices from least to most significant;
    the default is ``0, 1, ..., n-1``.
    """
    if precedence is None:
        return p.leading_monomial()
    order = list(reversed(precedence))
    return p.leading_monomial(key=lambda e: tuple(e[i] for i in order))


def partial_derivative(p: Polynomial, var_index: int) -> Polynomial:
    return p.derivative(var_index)


# -- exact linear algebra ---------------------------------------------------------

@dataclass(frozen=True)
class RationalMatrix:
    rows: int
    cols: int
    entries: tuple

    def __post_init__(self):
        if len(self.entries) != self.rows * self.cols:
            raise StructuralError("entry count does not match the shape")
        object.__setattr__(self, "entries", tuple(_as_fraction(v) for v in self.entries))

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence], cols: int | None = None) -> "RationalMatrix":
        rows = [list(r) for r in rows]
        if cols is None:
            cols = len(rows[0]) if rows else 0
        if any(len(r) != cols for r in rows):
            raise StructuralError("ragged rows")
        return cls(len(rows), cols, tuple(v for r in rows for v in r))

    def row_lists(self) -> list[list[Fraction]]:
        c = self.cols
        return [list(self.entries[i * c:(i + 1) * c]) for i in range(self.rows)]

    def __matmul__(self, vec: Sequence) -> tuple:
        if len(vec) != self.cols:
            raise StructuralError("vector length does not match the column count")
        return tuple(sum((a * b for a, b in zip(row, vec)), Fraction(0)) for row in self.row_lists())


def row_echelon(rows: list[list], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    """Reduced row echelon form of a copy of ``rows``; returns (nonzero rows, pivots)."""
    work = [[_as_fraction(v) for v in r] for r in rows]
    pivots = _kernels.rref(work, ncols)
    return work[:len(pivots)], pivots


def rank(m: RationalMatrix) -> int:
    return len(row_echelon(m.row_lists(), m.cols)[1])


def nullspace(m: RationalMatrix) -> list[tuple[Fraction, ...]]:
    """Basis of ``{v : m v = 0}``, one vector per free column."""
    reduced, pivots = row_echelon(m.row_lists(), m.cols)
    pivot_set = set(pivots)
    basis = []
    for free in range(m.cols):
        if free in pivot_set:
            continue
        v = [Fraction(0)] * m.cols
        v[free] = Fraction(1)
        for row, p in zip(reduced, pivots):
            v[p] = -row[free]
        basis.append(tuple(v))
    return basis


class LinearSpan:
    """Incrementally maintained span of sparse vectors over Q.

    Vectors are dicts ``{column: Fraction}``.  Every accepted vector gets an
    index; :meth:`express` writes a vector of the span in terms of the
    accepted vectors.
    """

    def __init__(self):
        self._rows: list[tuple[object, dict, dict]] = []  # (pivot, row, combination)
        self._pivots: dict = {}
        self.size = 0

    def _reduce(self, vec: dict):
        vec = {k: v for k, v in vec.items() if v}
        combo: dict[int, Fraction] = {}
        for pivot, row, rcombo in self._rows:
            f = vec.get(pivot)
            if f:
                for k, v in row.items():
                    nv = vec.get(k, 0) - f * v
                    if nv:
                        vec[k] = nv
                    else:
                        vec.pop(k, None)
                for k, v in rcombo.items():
                    nv = combo.get(k, 0) + f * v
                    if nv:
                        combo[k] = nv
                    else:
                        combo.pop(k, None)
        return vec, combo

    def contains(self, vec: dict) -> bool:
        return not self._reduce(vec)[0]

    def add(self, vec: dict) -> bool:
        """Accept ``vec`` if independent of the span; returns whether it was accepted."""
        residue, combo = self._reduce(vec)
        if not residue:
            return False
        pivot = min(residue, key=_column_key)
        inv = 1 / residue[pivot]
        row = {k: v * inv for k, v in residue.items()}
        # residue = vec - sum(combo_j * accepted_j)
        rcombo = {k: -v * inv for k, v in combo.items()}
        rcombo[self.size] = inv
        for _, other, ocombo in self._rows:
            f = other.get(pivot)
            if f:
                for k, v in row.items():
                    nv = other.get(k, 0) - f * v
                    if nv:
                        other[k] = nv
                    else:
                        other.pop(k, None)
                for k, v in rcombo.items():
                    nv = ocombo.get(k, 0) - f * v
                    if nv:
                        ocombo[k] = nv
                    else:
                        ocombo.pop(k, None)
        self._rows.append((pivot, row, rcombo))
        self._pivots[pivot] = len(self._rows) - 1
        self.size += 1
        return True

    def express(self, vec: dict) -> dict[int, Fraction] | None:
        """Coefficients ``c`` with ``vec = sum c[j] * accepted_j``, or None outside the span."""
        residue, combo = self._reduce(vec)
        if residue:
            return None
        return combo


def _column_key(k):
    return (0, k) if isinstance(k, int) else (1, k)
