# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels.

Semantics mirror normcc._kernels_py exactly; that module is the readable
reference.  Inputs are normalized to the dtypes the typed loops expect.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

BACKEND = "cython"

ctypedef cnp.int32_t i32
ctypedef cnp.int64_t i64
ctypedef cnp.float64_t f64
ctypedef cnp.uint8_t u8


cdef inline i64 _isect_range(i32[:] idx, i64 a0, i64 a1, i64 b0, i64 b1) nogil:
    cdef i64 i = a0, j = b0, c = 0
    while i < a1 and j < b1:
        if idx[i] < idx[j]:
            i += 1
        elif idx[i] > idx[j]:
            j += 1
        else:
            c += 1
            i += 1
            j += 1
    return c


def intersect_size(a, b):
    cdef i32[:] av = np.ascontiguousarray(a, dtype=np.int32)
    cdef i32[:] bv = np.ascontiguousarray(b, dtype=np.int32)
    cdef Py_ssize_t i = 0, j = 0, c = 0
    cdef Py_ssize_t na = av.shape[0], nb = bv.shape[0]
    while i < na and j < nb:
        if av[i] < bv[j]:
            i += 1
        elif av[i] > bv[j]:
            j += 1
        else:
            c += 1
            i += 1
            j += 1
    return c


def pair_common_counts(indptr, indices, us, vs):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef i32[:] uu = np.ascontiguousarray(us, dtype=np.int32)
    cdef i32[:] vv = np.ascontiguousarray(vs, dtype=np.int32)
    cdef Py_ssize_t m = uu.shape[0], k
    out = np.empty(m, dtype=np.int64)
    cdef i64[:] o = out
    for k in range(m):
        o[k] = _isect_range(ix, ip[uu[k]], ip[uu[k] + 1], ip[vv[k]], ip[vv[k] + 1])
    return out


def pair_common_counts_masked(indptr, indices, us, vs, mask):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef i32[:] uu = np.ascontiguousarray(us, dtype=np.int32)
    cdef i32[:] vv = np.ascontiguousarray(vs, dtype=np.int32)
    cdef u8[:] mk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t m = uu.shape[0], k
    cdef i64 i, j, a1, b1, c
    out = np.empty(m, dtype=np.int64)
    cdef i64[:] o = out
    for k in range(m):
        i = ip[uu[k]]
        a1 = ip[uu[k] + 1]
        j = ip[vv[k]]
        b1 = ip[vv[k] + 1]
        c = 0
        while i < a1 and j < b1:
            if ix[i] < ix[j]:
                i += 1
            elif ix[i] > ix[j]:
                j += 1
            else:
                if mk[ix[i]]:
                    c += 1
                i += 1
                j += 1
        o[k] = c
    return out


def row_masked_counts(indptr, indices, mask):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef u8[:] mk = np.ascontiguousarray(mask, dtype=np.uint8)
    cdef Py_ssize_t n = ip.shape[0] - 1, w
    cdef i64 k, c
    out = np.zeros(n, dtype=np.int64)
    cdef i64[:] o = out
    for w in range(n):
        c = 0
        for k in range(ip[w], ip[w + 1]):
            if mk[ix[k]]:
                c += 1
        o[w] = c
    return out


def l_values(indptr, indices, vals, active, double r):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef f64[:] xv = np.ascontiguousarray(vals, dtype=np.float64)
    cdef u8[:] act = np.ascontiguousarray(active, dtype=np.uint8)
    cdef Py_ssize_t n = ip.shape[0] - 1, w
    cdef i64 k
    cdef double acc
    out = np.zeros(n, dtype=np.float64)
    cdef f64[:] o = out
    for w in range(n):
        if not act[w]:
            continue
        acc = r
        for k in range(ip[w], ip[w + 1]):
            if act[ix[k]] and xv[k] <= r:
                acc += r - xv[k]
        o[w] = acc
    return out


def ball_member_counts(indptr, indices, vals, member, double radius):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef f64[:] xv = np.ascontiguousarray(vals, dtype=np.float64)
    cdef u8[:] mem = np.ascontiguousarray(member, dtype=np.uint8)
    cdef Py_ssize_t n = ip.shape[0] - 1, w
    cdef i64 k, c
    out = np.zeros(n, dtype=np.int64)
    cdef i64[:] o = out
    for w in range(n):
        if not mem[w]:
            continue
        c = 1
        for k in range(ip[w], ip[w + 1]):
            if mem[ix[k]] and xv[k] <= radius:
                c += 1
        o[w] = c
    return out


def conflict_free(indptr, indices, vals, sampled, double radius):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef f64[:] xv = np.ascontiguousarray(vals, dtype=np.float64)
    cdef u8[:] smp = np.ascontiguousarray(sampled, dtype=np.uint8)
    cdef Py_ssize_t n = ip.shape[0] - 1, w
    cdef i64 k
    cdef bint ok
    out = np.zeros(n, dtype=bool)
    cdef u8[:] o = out.view(np.uint8)
    for w in range(n):
        if not smp[w]:
            continue
        ok = 1
        for k in range(ip[w], ip[w + 1]):
            if smp[ix[k]] and xv[k] <= radius:
                ok = 0
                break
        o[w] = ok
    return out


def assign_min_center(indptr, indices, vals, active, center, double radius):
    cdef i64[:] ip = np.ascontiguousarray(indptr, dtype=np.int64)
    cdef i32[:] ix = np.ascontiguousarray(indices, dtype=np.int32)
    cdef f64[:] xv = np.ascontiguousarray(vals, dtype=np.float64)
    cdef u8[:] act = np.ascontiguousarray(active, dtype=np.uint8)
    cdef u8[:] cen = np.ascontiguousarray(center, dtype=np.uint8)
    cdef Py_ssize_t n = ip.shape[0] - 1, w
    cdef i64 k, best
    out = np.full(n, -1, dtype=np.int64)
    cdef i64[:] o = out
    for w in range(n):
        if not act[w]:
            continue
        best = n
        if cen[w]:
            best = w
        for k in range(ip[w], ip[w + 1]):
            if cen[ix[k]] and xv[k] <= radius and ix[k] < best:
                best = ix[k]
        if best < n:
            o[w] = best
    return out
