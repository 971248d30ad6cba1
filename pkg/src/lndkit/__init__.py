"""Locally nilpotent derivations of polynomial rings over the rationals."""

from ._kernels import BACKEND
from .algebra import Polynomial, RationalMatrix, lex_leading_monomial, nullspace, partial_derivative, poly_arith, rank
from .derivations import (Derivation, HeightKey, Inconclusive, NilpotencyCertificate, apply, bracket,
                          certify_lnd, compare_ad_order, height_key, is_triangular, theorem2_check)
from .errors import (CertificationInconsistency, InternalError, LndError, ParseError, PreconditionViolated,
                     ResourceError, StructuralError, UsageError)
from .groebner import (GroebnerBasis, SubalgebraPresentation, TermOrder, algebraically_independent, buchberger,
                       normal_form, subalgebra, subalgebra_membership)
from .lnd_sets import (DerivationSet, DerivationSpan, DerivedSeries, Overflow, SetNilpotencyCertificate,
                       certify_lnd_set, derived_series, descend_to_boundary, kernel_up_to_degree, lie_closure,
                       select_kernel_cutset)
from .triangularize import TriangularPresentation, counterexample_facts, triangularize

__version__ = "0.1.0"
