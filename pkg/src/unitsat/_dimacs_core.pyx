# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled DIMACS clause writers (hot path for large formulas).

Same contract as ``_dimacs_py``: callers pass parallel ``array('q')``
buffers of place indices.  Output is staged in a C buffer and flushed to
the sink in roughly megabyte-sized bytes objects.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc

BACKEND = "compiled"


cdef inline Py_ssize_t _put_int(char *buf, Py_ssize_t pos, long long v) noexcept nogil:
    cdef char tmp[24]
    cdef int k = 0
    if v == 0:
        buf[pos] = c'0'
        return pos + 1
    while v > 0:
        tmp[k] = <char> (c'0' + v % 10)
        v //= 10
        k += 1
    while k > 0:
        k -= 1
        buf[pos] = tmp[k]
        pos += 1
    return pos


def write_conflict_clauses(sink, ps, qs, long long n):
    """One clause (-x(p,u) -x(q,u)) per pair and unit, pair-major."""
    cdef const long long[::1] pv = ps
    cdef const long long[::1] qv = qs
    cdef Py_ssize_t pair_count = pv.shape[0]
    cdef Py_ssize_t cap = 1 << 20
    cdef char *buf = <char *> malloc(cap)
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t pos = 0
    cdef Py_ssize_t i
    cdef long long a, b, u
    try:
        for i in range(pair_count):
            a = (pv[i] - 1) * n
            b = (qv[i] - 1) * n
            for u in range(1, n + 1):
                if pos > cap - 64:
                    sink.write(PyBytes_FromStringAndSize(buf, pos))
                    pos = 0
                buf[pos] = c'-'
                pos = _put_int(buf, pos + 1, a + u)
                buf[pos] = c' '
                buf[pos + 1] = c'-'
                pos = _put_int(buf, pos + 2, b + u)
                buf[pos] = c' '
                buf[pos + 1] = c'0'
                buf[pos + 2] = c'\n'
                pos += 3
        if pos:
            sink.write(PyBytes_FromStringAndSize(buf, pos))
    finally:
        free(buf)
    return pair_count * n


def write_membership_clauses(sink, long long place_count, long long n, bint symmetry):
    """One at-least-one-unit clause per place."""
    cdef Py_ssize_t cap = 1 << 20
    if (n + 2) * 24 > cap:
        cap = (n + 2) * 24
    cdef char *buf = <char *> malloc(cap)
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t pos = 0
    cdef long long p, u, base, limit
    try:
        for p in range(1, place_count + 1):
            limit = n
            if symmetry and p < n:
                limit = p
            if pos > cap - (limit + 2) * 24:
                sink.write(PyBytes_FromStringAndSize(buf, pos))
                pos = 0
            base = (p - 1) * n
            for u in range(1, limit + 1):
                pos = _put_int(buf, pos, base + u)
                buf[pos] = c' '
                pos += 1
            buf[pos] = c'0'
            buf[pos + 1] = c'\n'
            pos += 2
        if pos:
            sink.write(PyBytes_FromStringAndSize(buf, pos))
    finally:
        free(buf)
    return place_count
