# cython: language_level=3, boundscheck=False, wraparound=False, initializedcheck=False
"""Compiled versions of the kernels in ``_kernels_py``; same signatures, same results."""

from cpython.ref cimport Py_INCREF
from cpython.tuple cimport PyTuple_GET_ITEM, PyTuple_New, PyTuple_SET_ITEM

from fractions import Fraction

BACKEND = "cython"


cdef inline tuple _add_exps(tuple a, tuple b):
    cdef Py_ssize_t n = len(a)
    cdef Py_ssize_t i
    cdef tuple out = PyTuple_New(n)
    cdef object v
    for i in range(n):
        v = <long>(<object>PyTuple_GET_ITEM(a, i)) + <long>(<object>PyTuple_GET_ITEM(b, i))
        Py_INCREF(v)
        PyTuple_SET_ITEM(out, i, v)
    return out


def mul_terms(dict a, dict b):
    cdef dict out = {}
    cdef tuple ea, eb, e
    cdef object ca, cb, c
    if len(a) < len(b):
        a, b = b, a
    for eb, cb in b.items():
        for ea, ca in a.items():
            e = _add_exps(ea, eb)
            c = out.get(e)
            if c is None:
                out[e] = ca * cb
            else:
                out[e] = c + ca * cb
    return {e: c for e, c in out.items() if c}


def add_mul_terms(dict a, dict b, object coeff, object shift):
    cdef dict out = dict(a)
    cdef tuple e, s
    cdef object c, cur
    for e, c in b.items():
        if shift is not None:
            s = <tuple>shift
            e = _add_exps(e, s)
        cur = out.get(e)
        if cur is None:
            out[e] = coeff * c
        else:
            cur = cur + coeff * c
            if cur:
                out[e] = cur
            else:
                del out[e]
    return out


def int_combine(dict p, object a, object b, tuple shift, dict g):
    cdef tuple e
    cdef object c, cur
    if a != 1:
        for e in list(p):
            p[e] = p[e] * a
    for e, c in g.items():
        e = _add_exps(e, shift)
        cur = p.get(e)
        if cur is None:
            p[e] = -b * c
        else:
            cur = cur - b * c
            if cur:
                p[e] = cur
            else:
                del p[e]
    return p


def rref(list rows, Py_ssize_t ncols):
    cdef list pivots = []
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t r = 0, col, i, j, piv
    cdef list prow, row, nz
    cdef object inv, f
    for col in range(ncols):
        if r == nrows:
            break
        piv = -1
        for i in range(r, nrows):
            if (<list>rows[i])[col]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            rows[r], rows[piv] = rows[piv], rows[r]
        prow = <list>rows[r]
        inv = Fraction(1) / prow[col]
        if inv != 1:
            for j in range(col, ncols):
                if prow[j]:
                    prow[j] = prow[j] * inv
        nz = [j for j in range(col, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = <list>rows[i]
            f = row[col]
            if f:
                for j in nz:
                    row[j] = row[j] - f * prow[j]
        pivots.append(col)
        r += 1
    return pivots
