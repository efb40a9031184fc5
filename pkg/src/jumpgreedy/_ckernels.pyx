# cython: language_level=3, boundscheck=False, wraparound=False
"""Compiled versions of the exhaustive axiom scans (see _pykernels)."""

import numpy as np


def jexc_scan(grid, pts, strides):
    cdef const unsigned char[::1] g = np.ascontiguousarray(grid, dtype=np.uint8)
    cdef const long long[:, ::1] p = np.ascontiguousarray(pts, dtype=np.int64)
    cdef const long long[::1] st = np.ascontiguousarray(strides, dtype=np.int64)
    cdef Py_ssize_t m = p.shape[0]
    cdef Py_ssize_t n = st.shape[0]
    cdef Py_ssize_t a, b, i, j
    cdef long long d, dj, fx, fs, sign
    cdef bint found
    flat_arr = np.zeros(m, dtype=np.int64)
    cdef long long[::1] flat = flat_arr
    for a in range(m):
        fx = 0
        for i in range(n):
            fx += p[a, i] * st[i]
        flat[a] = fx
    for a in range(m):
        fx = flat[a]
        for b in range(m):
            if a == b:
                continue
            for i in range(n):
                d = p[b, i] - p[a, i]
                if d == 0:
                    continue
                sign = 1 if d > 0 else -1
                fs = fx + sign * st[i]
                if g[fs]:
                    continue
                found = False
                for j in range(n):
                    dj = p[b, j] - p[a, j]
                    if j == i:
                        dj -= sign
                    if dj == 0:
                        continue
                    if g[fs + (st[j] if dj > 0 else -st[j])]:
                        found = True
                        break
                if not found:
                    return (a, b, i, sign)
    return None


def exchange_scan(member, family, int n):
    cdef const unsigned char[::1] mem = np.ascontiguousarray(member, dtype=np.uint8)
    cdef const long long[::1] fam = np.ascontiguousarray(family, dtype=np.int64)
    cdef Py_ssize_t m = fam.shape[0]
    cdef Py_ssize_t a, b
    cdef int i, j
    cdef long long x, y, diff, bi, bj
    cdef bint found
    for a in range(m):
        x = fam[a]
        for b in range(m):
            y = fam[b]
            diff = x ^ y
            if diff == 0:
                continue
            for i in range(n):
                bi = 1 << i
                if not (diff & bi):
                    continue
                if mem[x ^ bi]:
                    continue
                found = False
                for j in range(n):
                    bj = 1 << j
                    if (diff & bj) and j != i and mem[x ^ bi ^ bj]:
                        found = True
                        break
                if not found:
                    return (x, y, i)
    return None
