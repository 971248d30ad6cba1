"""Compiled kernels vs the pure-Python fallback.

Times the raw kernels on synthetic inputs, then a few end-to-end workloads
with each backend in a fresh interpreter (the backend is fixed at import).

    python benchmarks/bench_kernels.py [--repeat N] [--json]
"""

import argparse
import json
import os
import random
import subprocess
import sys
import timeit
from fractions import Fraction

from lndkit import _kernels_py

try:
    from lndkit import _ckernels
except ImportError:
    _ckernels = None

WORKLOADS = {
    "groebner": (
        "from lndkit.algebra import variables\n"
        "from lndkit.groebner import buchberger\n"
        "x, y, z = variables(3)\n",
        "buchberger([x**2*y - z**2 + x, y**2*z - x*y + 1, z**2*x - y])",
    ),
    "triangularize": (
        "import random\n"
        "from lndkit.testing import random_elementary, random_triangular_set\n"
        "from lndkit.triangularize import triangularize\n"
        "rng = random.Random(7)\n"
        "cases = []\n"
        "for _ in range(6):\n"
        "    S = random_triangular_set(rng, 3)\n"
        "    phi = random_elementary(rng, 3).then(random_elementary(rng, 3))\n"
        "    cases.append([phi.conjugate(D) for D in S])\n",
        "for S in cases: triangularize(S, nvars=3)",
    ),
    "kernel": (
        "from lndkit.algebra import variables\n"
        "from lndkit.derivations import Derivation\n"
        "from lndkit.lnd_sets import kernel_up_to_degree\n"
        "x, y, z, w = variables(4)\n"
        "D = Derivation([x*0, x, y, z])\n",
        "kernel_up_to_degree([D], 4)",
    ),
}


def _terms(rng, n, k):
    out = {}
    for _ in range(k):
        out[tuple(rng.randint(0, 4) for _ in range(n))] = Fraction(rng.randint(-9, 9), rng.randint(1, 4))
    return {e: c for e, c in out.items() if c}


def kernel_timings(repeat):
    rng = random.Random(1)
    a, b = _terms(rng, 4, 60), _terms(rng, 4, 60)
    ia = {e: int(c * 12) or 1 for e, c in a.items()}
    ib = {e: int(c * 12) or 1 for e, c in b.items()}
    shift = (1, 0, 2, 0)
    rows = [[Fraction(rng.randint(-5, 5)) for _ in range(30)] for _ in range(25)]
    cases = {
        "mul_terms": lambda m: m.mul_terms(a, b),
        "add_mul_terms": lambda m: m.add_mul_terms(a, b, Fraction(3, 2), shift),
        "int_combine": lambda m: m.int_combine(dict(ia), 7, 3, shift, ib),
        "rref": lambda m: m.rref([list(r) for r in rows], 30),
    }
    out = {}
    for name, fn in cases.items():
        py = min(timeit.repeat(lambda: fn(_kernels_py), number=20, repeat=repeat)) / 20
        cy = min(timeit.repeat(lambda: fn(_ckernels), number=20, repeat=repeat)) / 20 if _ckernels else None
        out[name] = (py, cy)
    return out


def workload_timings(repeat):
    out = {}
    for name, (setup, stmt) in WORKLOADS.items():
        row = []
        for pure in (True, False):
            env = dict(os.environ)
            env.pop("LNDKIT_PURE_PYTHON", None)
            if pure:
                env["LNDKIT_PURE_PYTHON"] = "1"
            code = (f"import timeit\n{setup}\n"
                    f"print(min(timeit.repeat({stmt!r}, globals=globals(), number=1, repeat={repeat})))")
            res = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env, check=True)
            row.append(float(res.stdout))
        out[name] = tuple(row)
    return out


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    parser.add_argument("--json", action="store_true")
    args = parser.parse_args()
    kernels = kernel_timings(args.repeat)
    workloads = workload_timings(args.repeat) if _ckernels else {}
    if args.json:
        print(json.dumps({"kernels": kernels, "workloads": workloads}))
        return
    if _ckernels is None:
        print("compiled extension not built; only the fallback was timed")
    print(f"{'case':<16}{'python (ms)':>14}{'cython (ms)':>14}{'speedup':>10}")
    for name, (py, cy) in {**kernels, **workloads}.items():
        cy_txt = f"{cy * 1e3:14.3f}" if cy else f"{'-':>14}"
        sp = f"{py / cy:9.2f}x" if cy else f"{'-':>10}"
        print(f"{name:<16}{py * 1e3:14.3f}{cy_txt}{sp}")


if __name__ == "__main__":
    main()
