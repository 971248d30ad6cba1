"""Select the kernel backend.

The compiled extension is used when it was built; setting the environment
variable ``LNDKIT_PURE_PYTHON=1`` forces the pure-Python fallback.
"""

import os

if os.environ.get("LNDKIT_PURE_PYTHON"):
    from ._kernels_py import BACKEND, add_mul_terms, int_combine, mul_terms, rref
else:
    try:
        from ._ckernels import BACKEND, add_mul_terms, int_combine, mul_terms, rref
    except ImportError:
        from ._kernels_py import BACKEND, add_mul_terms, int_combine, mul_terms, rref

__all__ = ["BACKEND", "add_mul_terms", "int_combine", "mul_terms", "rref"]
