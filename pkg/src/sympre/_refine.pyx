# cython: boundscheck=False, wraparound=False, language_level=3
"""Compiled color refinement kernel.

Same contract as sympre._refine_py.refine_rounds: vertex keys are
(old color, sorted neighbor-color multiset); new color ids are the
lexicographic ranks of the distinct keys; iterate until the class count is
stable.  Keys are encoded as big-endian 32-bit words so that bytewise order
equals numeric tuple order.
"""

from cpython.bytes cimport PyBytes_FromStringAndSize
from libc.stdlib cimport free, malloc


cdef inline void _sort_ints(int* buf, int length) noexcept:
    cdef int i, j, key
    for i in range(1, length):
        key = buf[i]
        j = i - 1
        while j >= 0 and buf[j] > key:
            buf[j + 1] = buf[j]
            j -= 1
        buf[j + 1] = key


cdef bytes _vertex_key(int v, int[::1] indptr, int[::1] indices, int* cur,
                       int* scratch, unsigned char* out):
    cdef int start = indptr[v]
    cdef int deg = indptr[v + 1] - start
    cdef int i, value
    for i in range(deg):
        scratch[i] = cur[indices[start + i]]
    _sort_ints(scratch, deg)
    value = cur[v]
    out[0] = (value >> 24) & 0xFF
    out[1] = (value >> 16) & 0xFF
    out[2] = (value >> 8) & 0xFF
    out[3] = value & 0xFF
    for i in range(deg):
        value = scratch[i]
        out[4 * i + 4] = (value >> 24) & 0xFF
        out[4 * i + 5] = (value >> 16) & 0xFF
        out[4 * i + 6] = (value >> 8) & 0xFF
        out[4 * i + 7] = value & 0xFF
    return PyBytes_FromStringAndSize(<char*> out, 4 * (deg + 1))


def refine_rounds(int n, int[::1] indptr, int[::1] indices, int[::1] colors):
    """Refine to the coarsest equitable partition; returns (colors, #colors, rounds)."""
    if n == 0:
        return [], 0, 0
    cdef int v, i, rounds = 0, max_deg = 0, deg
    cdef int* cur = <int*> malloc(n * sizeof(int))
    cdef int* scratch = NULL
    cdef unsigned char* keybuf = NULL
    if cur == NULL:
        raise MemoryError()
    try:
        for v in range(n):
            cur[v] = colors[v]
            deg = indptr[v + 1] - indptr[v]
            if deg > max_deg:
                max_deg = deg
        scratch = <int*> malloc((max_deg + 1) * sizeof(int))
        keybuf = <unsigned char*> malloc(4 * (max_deg + 1) * sizeof(unsigned char))
        if scratch == NULL or keybuf == NULL:
            raise MemoryError()

        seen = set()
        for v in range(n):
            seen.add(cur[v])
        ncolors = len(seen)

        while True:
            keys = [_vertex_key(v, indptr, indices, cur, scratch, keybuf)
                    for v in range(n)]
            distinct = sorted(set(keys))
            rank = {key: i for i, key in enumerate(distinct)}
            for v in range(n):
                cur[v] = rank[keys[v]]
            rounds += 1
            if len(distinct) == ncolors:
                return [cur[v] for v in range(n)], ncolors, rounds
            ncolors = len(distinct)
    finally:
        free(cur)
        if scratch != NULL:
            free(scratch)
        if keybuf != NULL:
            free(keybuf)
