"""Derivations of Q[x_1..x_n] and their calculus.

A derivation ``D = f_1 d/dx_1 + ... + f_n d/dx_n`` is stored as the
coefficient vector ``(f_1, ..., f_n)``; ``f_i = D(x_i)``.

Local nilpotency is certified on the variables only.  That suffices: if
``D^a(x_i) = 0`` for every ``i`` then, by the Leibniz rule,
``D^m(x^e) = sum binom * prod D^{k_j}(x_j)`` over splits ``m = sum k_j``, and
for ``m`` larger than ``sum_j e_j * (a_j - 1)`` every summand contains a
vanishing factor.  The same counting works for words in several
derivations, which is what :mod:`lndkit.lnd_sets` relies on.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .algebra import Monomial, Polynomial, lex_key, variables
from .errors import PreconditionViolated, StructuralError

DEFAULT_STEP_BOUND = 64


class Derivation:
    """Immutable derivation given by the images of the variables."""

    __slots__ = ("coefficients", "_hash")

    def __init__(self, coefficients: Sequence[Polynomial]):
        coefficients = tuple(coefficients)
        n = len(coefficients)
        if n == 0:
            raise StructuralError("a derivation needs at least one variable")
        if any(c.nvars != n for c in coefficients):
            raise StructuralError("derivation coefficients must live in the ring of the derivation")
        self.coefficients = coefficients
        self._hash = None

    @classmethod
    def zero(cls, nvars: int) -> "Derivation":
        return cls([Polynomial.zero(nvars)] * nvars)

    @classmethod
    def partial(cls, nvars: int, index: int, coeff: Polynomial | int | Fraction = 1) -> "Derivation":
        """``coeff * d/dx_index``."""
        coeffs = [Polynomial.zero(nvars)] * nvars
        if not isinstance(coeff, Polynomial):
            coeff = Polynomial.constant(nvars, coeff)
        coeffs[index] = coeff
        return cls(coeffs)

    @property
    def nvars(self) -> int:
        return len(self.coefficients)

    def is_zero(self) -> bool:
        return all(c.is_zero() for c in self.coefficients)

    def __call__(self, p: Polynomial) -> Polynomial:
        return apply(self, p)

    def _check(self, other: "Derivation"):
        if not isinstance(other, Derivation):
            return NotImplemented
        if other.nvars != self.nvars:
            raise StructuralError(f"variable count mismatch: {self.nvars} vs {other.nvars}")
        return other

    def __add__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Derivation([a + b for a, b in zip(self.coefficients, other.coefficients)])

    def __sub__(self, other):
        other = self._check(other)
        if other is NotImplemented:
            return other
        return Derivation([a - b for a, b in zip(self.coefficients, other.coefficients)])

    def __neg__(self):
        return Derivation([-c for c in self.coefficients])

    def __mul__(self, factor):
        # polynomial and scalar multiples: (a D)(p) = a * D(p)
        if isinstance(factor, (int, Fraction)):
            return Derivation([c.scale(factor) for c in self.coefficients])
        if isinstance(factor, Polynomial):
            if factor.nvars != self.nvars:
                raise StructuralError(f"variable count mismatch: {self.nvars} vs {factor.nvars}")
            return Derivation([factor * c for c in self.coefficients])
        return NotImplemented

    __rmul__ = __mul__

    def __eq__(self, other):
        if not isinstance(other, Derivation):
            return NotImplemented
        return self.coefficients == other.coefficients

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.coefficients)
        return self._hash

    def total_degree(self) -> int:
        """Largest total degree of a coefficient; -1 for the zero derivation."""
        return max(c.total_degree() for c in self.coefficients)

    def to_string(self, names: Sequence[str] | None = None) -> str:
        from .algebra import default_names
        if names is None:
            names = default_names(self.nvars)
        parts = []
        for name, c in zip(names, self.coefficients):
            if c.is_zero():
                continue
            atom = "d" + name
            if c == 1:
                parts.append(atom)
            elif c == -1:
                parts.append("-" + atom)
            elif len(c.terms) == 1:
                parts.append(f"{c.to_string(names)}*{atom}")
            else:
                parts.append(f"({c.to_string(names)})*{atom}")
        if not parts:
            return "0*d" + names[0]
        out = parts[0]
        for part in parts[1:]:
            out += " - " + part[1:] if part.startswith("-") else " + " + part
        return out

    def __str__(self):
        return self.to_string()

    def __repr__(self):
        return f"Derivation({self.to_string()!r})"


def apply(D: Derivation, p: Polynomial) -> Polynomial:
    """``D(p) = sum_i D(x_i) * dp/dx_i``."""
    if p.nvars != D.nvars:
        raise StructuralError(f"variable count mismatch: {D.nvars} vs {p.nvars}")
    total = Polynomial.zero(p.nvars)
    for i, c in enumerate(D.coefficients):
        if c.is_zero():
            continue
        d = p.derivative(i)
        if not d.is_zero():
            total = total + c * d
    return total


def bracket(D: Derivation, E: Derivation) -> Derivation:
    """Commutator ``[D, E] = DE - ED``."""
    if D.nvars != E.nvars:
        raise StructuralError(f"variable count mismatch: {D.nvars} vs {E.nvars}")
    return Derivation([apply(D, e) - apply(E, d) for d, e in zip(D.coefficients, E.coefficients)])


def conjugate(D: Derivation, images: Sequence[Polynomial], inverse_images: Sequence[Polynomial]) -> Derivation:
    """``phi D phi^{-1}`` for the automorphism ``phi: x_i -> images[i]``.

    ``inverse_images`` must describe ``phi^{-1}``, i.e. substituting
    ``images`` into ``inverse_images[i]`` gives back ``x_i``.
    """
    return Derivation([apply(D, g).substitute(images) for g in inverse_images])


# -- local nilpotency ---------------------------------------------------------------

@dataclass(frozen=True)
class NilpotencyCertificate:
    """For each variable the chain ``x_i, D(x_i), D^2(x_i), ..., 0``."""

    chains: tuple

    @property
    def max_length(self) -> int:
        """Longest chain, counting its nonzero entries."""
        return max((len(c) - 1 for c in self.chains), default=0)

    def verify(self, D: Derivation) -> bool:
        for i, chain in enumerate(self.chains):
            if chain[0] != Polynomial.variable(D.nvars, i) or not chain[-1].is_zero():
                return False
            for a, b in zip(chain, chain[1:]):
                if apply(D, a) != b:
                    return False
        return True


@dataclass(frozen=True)
class Inconclusive:
    """A bounded search that neither certified nor refuted its claim."""

    reason: str
    frontier: tuple = ()


def certify_lnd(D: Derivation, step_bound: int = DEFAULT_STEP_BOUND) -> NilpotencyCertificate | Inconclusive:
    if step_bound < 1:
        raise ValueError("step_bound must be at least 1")
    chains = []
    for i, x in enumerate(variables(D.nvars)):
        chain = [x]
        while not chain[-1].is_zero():
            if len(chain) > step_bound:
                return Inconclusive(
                    f"chain of x_{i + 1} survives {step_bound} applications", tuple(chain))
            chain.append(apply(D, chain[-1]))
        chains.append(tuple(chain))
    return NilpotencyCertificate(tuple(chains))


def is_locally_nilpotent(D: Derivation, step_bound: int = DEFAULT_STEP_BOUND) -> bool:
    return isinstance(certify_lnd(D, step_bound), NilpotencyCertificate)


def is_triangular(D: Derivation) -> bool:
    """Whether ``D(x_i)`` only involves ``x_1..x_{i-1}`` for every ``i``."""
    for i, c in enumerate(D.coefficients):
        if any(k >= i for k in c.support()):
            return False
    return True


# -- kernel multiples and the last-variable form ----------------------------------------

@dataclass(frozen=True)
class Theorem2Verdict:
    hypothesis_holds: bool
    conclusion_holds: bool
    witness: Polynomial | None
    kernel_degree_bound: int
    kernel_basis: tuple
    kernel_transcendence: int = 0
    full_transcendence: int = 0

    @property
    def kernel_captured(self) -> bool:
        """The slice reaches the transcendence degree of ``ker D`` (``n - 1`` for ``D != 0``).

        Below that the slice is missing generators, and a true hypothesis
        only means that no witness of bounded degree exists.
        """
        return self.kernel_transcendence >= self.full_transcendence

    @property
    def consistent(self) -> bool:
        return not self.hypothesis_holds or self.conclusion_holds or not self.kernel_captured


def has_last_variable_form(D: Derivation) -> bool:
    """``D = f d/dx_n`` with ``f`` free of ``x_n``."""
    n = D.nvars
    *head, last = D.coefficients
    return all(c.is_zero() for c in head) and (n - 1) not in last.support()


def theorem2_check(D: Derivation, kernel_degree_bound: int,
                   step_bound: int = DEFAULT_STEP_BOUND) -> Theorem2Verdict:
    """Test ``(ker D) D`` inside the triangular algebra against ``D = f d/dx_n``.

    The kernel is the slice of degree at most ``kernel_degree_bound``; the
    witness is the first kernel basis element ``a`` with ``aD`` not
    triangular.  ``hypothesis_holds`` is therefore relative to the bound;
    ``kernel_captured`` says whether the slice is large enough to trust it.
    """
    from .groebner import transcendence_degree
    from .lnd_sets import kernel_up_to_degree

    if not isinstance(certify_lnd(D, step_bound), NilpotencyCertificate):
        raise PreconditionViolated("theorem2_check needs a certified locally nilpotent derivation")
    basis = tuple(kernel_up_to_degree([D], kernel_degree_bound))
    witness = None
    for a in basis:
        if not is_triangular(a * D):
            witness = a
            break
    trdeg = transcendence_degree(basis, D.nvars)
    full = D.nvars if D.is_zero() else D.nvars - 1
    return Theorem2Verdict(witness is None, has_last_variable_form(D), witness,
                           kernel_degree_bound, basis, trdeg, full)


# -- height order ------------------------------------------------------------------

@dataclass(frozen=True)
class HeightKey:
    height: int
    leading_coordinate_order: Monomial | None


def coordinates(D: Derivation, base: Sequence[Polynomial], coords: Sequence[Polynomial]) -> list[Polynomial]:
    return [apply(D, b) for b in base] + [apply(D, x) for x in coords]


def height_key(D: Derivation, base: Sequence[Polynomial] = (),
               coords: Sequence[Polynomial] | None = None) -> HeightKey:
    """Index (1-based) of the first nonzero coordinate and its lex-leading monomial.

    ``coords`` defaults to the ring variables.  The zero derivation has
    height ``len(base) + len(coords) + 1``.
    """
    if coords is None:
        coords = variables(D.nvars)
    values = coordinates(D, base, coords)
    for idx, v in enumerate(values):
        if not v.is_zero():
            return HeightKey(idx + 1, v.leading_monomial())
    return HeightKey(len(values) + 1, None)


def compare_ad_order(D: Derivation, E: Derivation, base: Sequence[Polynomial] = (),
                     coords: Sequence[Polynomial] | None = None) -> str:
    """``"less"`` if ``D`` precedes ``E`` in the height order, else ``"not_less"``.

    ``D`` precedes ``E`` when its height is larger, or when the heights agree
    and the leading monomial of that coordinate of ``D`` is lex-smaller.
    """
    hd = height_key(D, base, coords)
    he = height_key(E, base, coords)
    if hd.height != he.height:
        return "less" if hd.height > he.height else "not_less"
    if hd.leading_coordinate_order is None:
        return "not_less"
    if lex_key(hd.leading_coordinate_order) < lex_key(he.leading_coordinate_order):
        return "less"
    return "not_less"
