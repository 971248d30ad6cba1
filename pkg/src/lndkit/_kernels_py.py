"""Pure-Python versions of the hot inner loops.

Polynomials here are bare ``dict`` objects mapping exponent tuples to
coefficients.  ``lndkit._ckernels`` compiles the same functions with Cython;
``lndkit._kernels`` picks one at import time.
"""

from fractions import Fraction

BACKEND = "python"


def mul_terms(a, b):
    """Product of two term dicts, zero coefficients dropped."""
    if len(a) < len(b):
        a, b = b, a
    out = {}
    get = out.get
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = tuple([x + y for x, y in zip(ea, eb)])
            c = get(e)
            out[e] = ca * cb if c is None else c + ca * cb
    return {e: c for e, c in out.items() if c}


def add_mul_terms(a, b, coeff, shift):
    """Return ``a + coeff * x**shift * b`` as a new dict.

    ``shift`` may be ``None`` for the unit monomial.
    """
    out = dict(a)
    get = out.get
    if shift is None:
        for e, c in b.items():
            cur = get(e)
            if cur is None:
                out[e] = coeff * c
            else:
                cur = cur + coeff * c
                if cur:
                    out[e] = cur
                else:
                    del out[e]
        return out
    for e, c in b.items():
        e = tuple([x + y for x, y in zip(e, shift)])
        cur = get(e)
        if cur is None:
            out[e] = coeff * c
        else:
            cur = cur + coeff * c
            if cur:
                out[e] = cur
            else:
                del out[e]
    return out


def int_combine(p, a, b, shift, g):
    """In place: ``p <- a*p - b * x**shift * g`` for integer term dicts."""
    if a != 1:
        for e in p:
            p[e] *= a
    get = p.get
    for e, c in g.items():
        e = tuple([x + y for x, y in zip(e, shift)])
        cur = get(e)
        if cur is None:
            p[e] = -b * c
        else:
            cur -= b * c
            if cur:
                p[e] = cur
            else:
                del p[e]
    return p


def rref(rows, ncols):
    """Reduce ``rows`` (list of lists of Fractions) to reduced row echelon form in place.

    Returns the list of pivot columns.  Zero rows end up at the bottom.
    """
    pivots = []
    nrows = len(rows)
    r = 0
    for col in range(ncols):
        if r == nrows:
            break
        piv = None
        for i in range(r, nrows):
            if rows[i][col]:
                piv = i
                break
        if piv is None:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = rows[r]
        inv = Fraction(1) / prow[col]
        if inv != 1:
            for j in range(col, ncols):
                if prow[j]:
                    prow[j] *= inv
        nz = [j for j in range(col, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[col]
            if f:
                for j in nz:
                    row[j] -= f * prow[j]
        pivots.append(col)
        r += 1
    return pivots
