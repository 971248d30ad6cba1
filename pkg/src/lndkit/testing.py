"""Random objects for property tests and benchmarks."""

from __future__ import annotations

import random
from dataclasses import dataclass

from .algebra import Polynomial, monomials_up_to, variables
from .derivations import Derivation, conjugate


def random_polynomial(rng: random.Random, nvars: int, degree: int, allowed=None,
                      max_terms: int = 4, coeff_range: int = 5) -> Polynomial:
    """Random polynomial in the variables ``allowed`` (default: all) of degree at most ``degree``."""
    allowed = range(nvars) if allowed is None else list(allowed)
    sub = monomials_up_to(len(allowed), degree)
    terms = {}
    for _ in range(rng.randint(1, max_terms)):
        small = rng.choice(sub)
        e = [0] * nvars
        for idx, k in zip(allowed, small):
            e[idx] = k
        terms[tuple(e)] = terms.get(tuple(e), 0) + rng.randint(-coeff_range, coeff_range)
    return Polynomial(nvars, terms)


def random_triangular(rng: random.Random, nvars: int, degree: int, **kw) -> Derivation:
    coeffs = [random_polynomial(rng, nvars, 0 if i == 0 else degree, range(i), **kw) for i in range(nvars)]
    return Derivation(coeffs)


def random_derivation(rng: random.Random, nvars: int, degree: int, **kw) -> Derivation:
    return Derivation([random_polynomial(rng, nvars, degree, **kw) for _ in range(nvars)])


@dataclass(frozen=True)
class Automorphism:
    """``phi: x_i -> images[i]`` together with the images of ``phi^{-1}``."""

    images: tuple
    inverse_images: tuple

    def conjugate(self, D: Derivation) -> Derivation:
        return conjugate(D, self.images, self.inverse_images)

    def then(self, other: "Automorphism") -> "Automorphism":
        """``self o other``: apply ``other`` first."""
        images = tuple(g.substitute(list(self.images)) for g in other.images)
        inverse = tuple(g.substitute(list(other.inverse_images)) for g in self.inverse_images)
        return Automorphism(images, inverse)


def elementary(nvars: int, index: int, shift: Polynomial) -> Automorphism:
    """``x_index -> x_index + shift`` with ``shift`` free of ``x_index``."""
    if index in shift.support():
        raise ValueError("elementary shift must not involve its own variable")
    xs = variables(nvars)
    images = list(xs)
    inverse = list(xs)
    images[index] = xs[index] + shift
    inverse[index] = xs[index] - shift
    return Automorphism(tuple(images), tuple(inverse))


def random_elementary(rng: random.Random, nvars: int, degree: int = 2) -> Automorphism:
    index = rng.randrange(nvars)
    others = [i for i in range(nvars) if i != index]
    shift = Polynomial.zero(nvars)
    while shift.is_zero() and others:
        shift = random_polynomial(rng, nvars, degree, others, max_terms=2, coeff_range=2)
    return elementary(nvars, index, shift)


def random_triangular_set(rng: random.Random, nvars: int, degree: int = 2, extra: int = 1) -> list[Derivation]:
    """Triangular set with trivial joint kernel.

    Member ``i`` is ``d/dx_i`` plus terms in later variables; the chain of
    those members alone already cuts the kernel down to the constants.
    """
    members = []
    for i in range(nvars):
        coeffs = [Polynomial.zero(nvars) for _ in range(nvars)]
        coeffs[i] = Polynomial.constant(nvars, rng.choice([1, 1, 2, -1]))
        for j in range(i + 1, nvars):
            if rng.random() < 0.5:
                coeffs[j] = random_polynomial(rng, nvars, degree, range(j), max_terms=2, coeff_range=3)
        members.append(Derivation(coeffs))
    for _ in range(extra):
        D = random_triangular(rng, nvars, degree, max_terms=2, coeff_range=3)
        if not D.is_zero():
            members.append(D)
    return members
